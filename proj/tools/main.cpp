// Copyright 2026 The cvqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cvqst pipeline driver.
//
//   simulate      draw homodyne quadrature samples from a configured state
//   reconstruct   estimate a density matrix / Wigner grid from samples
//   analyze       report fidelity, photon statistics, and Wigner negativity
//   spatial-scan  parity-sampled Wigner scan of a spatial mode profile
//
// Configuration is a flat key=value file ('#' starts a comment); command-line
// flags override config values. Exit codes: 0 success, 1 invalid input or
// configuration, 2 runtime failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqst/fock.hpp"
#include "cvqst/io.hpp"
#include "cvqst/maxlik.hpp"
#include "cvqst/pattern.hpp"
#include "cvqst/radon.hpp"
#include "cvqst/sampler.hpp"
#include "cvqst/spatial.hpp"
#include "cvqst/states.hpp"

namespace fs = std::filesystem;
using namespace cvqst;

namespace {

double to_double(const std::string& s, const std::string& key) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("config: " + key + ": cannot parse number '" +
                                s + "'");
  return v;
}

template <typename T>
T to_integer(const std::string& s, const std::string& key) {
  T v;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("config: " + key + ": cannot parse integer '" +
                                s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Flat key=value store. Reads mark keys as consumed; finish() rejects any
// leftovers so misspelled keys fail loudly instead of silently defaulting.
class Config {
 public:
  static Config load(const fs::path& path) {
    Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in)
      throw std::invalid_argument("cannot open config file " + path.string());
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const size_t hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      const std::string row = trim(line);
      if (row.empty()) continue;
      const size_t eq = row.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(path.string() + ":" +
                                    std::to_string(line_no) +
                                    ": expected key=value");
      const std::string key = trim(row.substr(0, eq));
      if (key.empty() || !cfg.kv_.try_emplace(key, trim(row.substr(eq + 1))).second)
        throw std::invalid_argument(path.string() + ":" +
                                    std::to_string(line_no) +
                                    ": empty or duplicate key '" + key + "'");
    }
    return cfg;
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::optional<std::string> take(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::string take_required(const std::string& key) {
    auto v = take(key);
    if (!v) throw std::invalid_argument("config: missing required key '" + key + "'");
    return *v;
  }

  std::string take_string(const std::string& key, const std::string& dflt) {
    return take(key).value_or(dflt);
  }

  double take_double(const std::string& key, double dflt) {
    const auto v = take(key);
    return v ? to_double(*v, key) : dflt;
  }

  template <typename T>
  T take_integer(const std::string& key, T dflt) {
    const auto v = take(key);
    return v ? to_integer<T>(*v, key) : dflt;
  }

  bool take_bool(const std::string& key, bool dflt) {
    const auto v = take(key);
    if (!v) return dflt;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw std::invalid_argument("config: " + key + ": expected true or false");
  }

  // Marks a key consumed without reading it; lets one reconstruct config
  // carry keys for several methods while misspellings still fail below.
  void allow(const std::string& key) {
    if (kv_.count(key)) used_.insert(key);
  }

  void finish() const {
    std::string extra;
    for (const auto& [key, value] : kv_)
      if (!used_.count(key)) extra += (extra.empty() ? "" : ", ") + key;
    if (!extra.empty())
      throw std::invalid_argument("config: unknown keys: " + extra);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string::npos) return {};
    return s.substr(from, s.find_last_not_of(" \t\r\n") - from + 1);
  }

  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

// Dotted state keys: state.kind, state.alpha / state.alpha_im, ...; nested
// state.base.* describes the input of photon_added / photon_subtracted.
states::StateSpec parse_state(Config& cfg, const std::string& prefix) {
  states::StateSpec spec;
  spec.kind = cfg.take_required(prefix + "kind");
  spec.n = cfg.take_integer<int>(prefix + "n", spec.n);
  spec.alpha = Complex(cfg.take_double(prefix + "alpha", spec.alpha.real()),
                       cfg.take_double(prefix + "alpha_im", spec.alpha.imag()));
  spec.zeta = cfg.take_double(prefix + "zeta", spec.zeta);
  spec.nbar = cfg.take_double(prefix + "nbar", spec.nbar);
  spec.c0 = Complex(cfg.take_double(prefix + "c0", spec.c0.real()),
                    cfg.take_double(prefix + "c0_im", spec.c0.imag()));
  spec.c1 = Complex(cfg.take_double(prefix + "c1", spec.c1.real()),
                    cfg.take_double(prefix + "c1_im", spec.c1.imag()));
  if (cfg.has(prefix + "base.kind"))
    spec.base = std::make_shared<states::StateSpec>(
        parse_state(cfg, prefix + "base."));
  return spec;
}

GridSpec parse_grid(const std::string& s, const std::string& key) {
  const auto parts = split(s, ':');
  if (parts.size() != 6)
    throw std::invalid_argument("config: " + key +
                                ": expected qmin:qmax:nq:pmin:pmax:np");
  GridSpec grid{to_double(parts[0], key), to_double(parts[1], key),
                to_integer<int>(parts[2], key), to_double(parts[3], key),
                to_double(parts[4], key), to_integer<int>(parts[5], key)};
  grid.validate();
  return grid;
}

// phases = uniform_random | swept:K | fixed:t1;t2;...
sampler::PhaseSchedule parse_phases(const std::string& s) {
  if (s == "uniform_random") return sampler::PhaseSchedule::uniform_random();
  if (s.rfind("swept:", 0) == 0)
    return sampler::PhaseSchedule::swept(to_integer<int>(s.substr(6), "phases"));
  if (s.rfind("fixed:", 0) == 0) {
    std::vector<double> thetas;
    for (const auto& part : split(s.substr(6), ';'))
      thetas.push_back(to_double(part, "phases"));
    return sampler::PhaseSchedule::fixed_list(std::move(thetas));
  }
  throw std::invalid_argument(
      "config: phases: expected uniform_random, swept:K, or fixed:t1;t2;...");
}

bool flag_given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// Closest physical state: clip negative eigenvalues, renormalize the trace.
// Estimators that are unbiased but not positivity-constrained (pattern
// functions) can sit slightly outside the state set; fidelity is only
// defined on it.
DensityMatrix nearest_state(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = Complex(0.5, 0.0) * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const double total = lam.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("matrix has no positive part; not a state");
  return DensityMatrix(es.eigenvectors() *
                       (lam / total).cast<Complex>().asDiagonal() *
                       es.eigenvectors().adjoint());
}

double bilinear_at_origin(const WignerGrid& w) {
  const GridSpec& g = w.spec;
  if (g.q_min > 0.0 || g.q_max < 0.0 || g.p_min > 0.0 || g.p_max < 0.0)
    throw std::invalid_argument("wigner grid does not contain the origin");
  const auto cell = [](double lo, double step, int n) {
    return std::min(std::max(static_cast<int>(std::floor((0.0 - lo) / step)), 0),
                    n - 2);
  };
  const int i = cell(g.q_min, g.dq(), g.nq);
  const int j = cell(g.p_min, g.dp(), g.np);
  const double tq = (0.0 - g.q_at(i)) / g.dq();
  const double tp = (0.0 - g.p_at(j)) / g.dp();
  return (1 - tq) * (1 - tp) * w.values(i, j) +
         tq * (1 - tp) * w.values(i + 1, j) +
         (1 - tq) * tp * w.values(i, j + 1) + tq * tp * w.values(i + 1, j + 1);
}

int run_simulate(const CLI::App* sub, Config& cfg, std::uint64_t seed,
                 double eta, int nmax, const std::string& out) {
  states::StateSpec spec = parse_state(cfg, "state.");

  sampler::AcquisitionPlan plan;
  plan.n_samples = cfg.take_integer<long long>("n_samples", -1);
  plan.schedule = parse_phases(cfg.take_string("phases", "uniform_random"));
  plan.eta = cfg.take_double("eta", plan.eta);
  plan.snr = cfg.take_double("snr", plan.snr);
  plan.xi = cfg.take_double("xi", plan.xi);
  plan.seed = cfg.take_integer<std::uint64_t>("seed", plan.seed);
  int n_max = cfg.take_integer<int>("nmax", 20);
  cfg.finish();

  if (flag_given(sub, "--eta")) plan.eta = eta;
  if (flag_given(sub, "--seed")) plan.seed = seed;
  if (flag_given(sub, "--nmax")) n_max = nmax;
  if (plan.n_samples < 0)
    throw std::invalid_argument("config: missing required key 'n_samples'");

  const DensityMatrix truth = states::build(spec, n_max);
  const auto samples = sampler::sample(truth, plan);

  const fs::path dir = prepare_out_dir(out);
  io::write_samples_csv(dir / "samples.csv", samples);
  io::write_metadata_json(dir / "samples.meta.json", {plan, spec});
  std::cout << "simulate: wrote " << samples.size() << " samples to "
            << (dir / "samples.csv").string() << "\n";
  return 0;
}

int run_reconstruct(const CLI::App* sub, Config& cfg, std::uint64_t seed,
                    const std::string& method_flag, double eta, double kc,
                    int nmax, double epsilon, const std::string& out) {
  const fs::path samples_path(cfg.take_required("samples"));
  std::string method = cfg.take_string("method", "");
  if (flag_given(sub, "--method")) method = method_flag;
  if (method.empty())
    throw std::invalid_argument(
        "reconstruct: no method given (--method or config key 'method')");

  const auto samples = io::read_samples_csv(samples_path);
  const fs::path dir = prepare_out_dir(out);

  const auto finish_config = [&cfg] {
    for (const char* key :
         {"kc", "grid", "binned", "phase_bins", "q_bins", "nmax", "epsilon",
          "stop_tol", "max_iters", "bias_correction", "eta", "bootstrap",
          "bootstrap_seed"})
      cfg.allow(key);
    cfg.finish();
  };

  if (method == "radon") {
    radon::RadonConfig rc;
    rc.kc = cfg.take_double("kc", rc.kc);
    if (const auto g = cfg.take("grid")) rc.grid = parse_grid(*g, "grid");
    rc.binned = cfg.take_bool("binned", rc.binned);
    rc.n_phase_bins = cfg.take_integer<int>("phase_bins", rc.binned ? 64 : 0);
    rc.n_q_bins = cfg.take_integer<int>("q_bins", rc.binned ? 64 : 0);
    finish_config();
    if (flag_given(sub, "--kc")) rc.kc = kc;

    const WignerGrid w = radon::reconstruct(samples, rc);
    io::write_wigner_csv(dir / "wigner.csv", w);
    std::cout << "reconstruct: radon on " << samples.size()
              << " samples, kc=" << io::format_sig9(rc.kc) << ", wrote "
              << (dir / "wigner.csv").string() << "\n";
    return 0;
  }

  if (method == "pattern") {
    int n_max = cfg.take_integer<int>("nmax", 10);
    finish_config();
    if (flag_given(sub, "--nmax")) n_max = nmax;

    const pattern::PatternEstimate est =
        pattern::estimate_density_matrix(samples, n_max);
    io::write_density_matrix_json(dir / "rho.json", est.rho, &est.se);
    std::cout << "reconstruct: pattern on " << samples.size()
              << " samples, n_max=" << n_max << ", wrote "
              << (dir / "rho.json").string() << "\n";
    return 0;
  }

  if (method == "maxlik") {
    maxlik::MaxlikConfig mc;
    mc.n_max = cfg.take_integer<int>("nmax", mc.n_max);
    mc.epsilon = cfg.take_double("epsilon", mc.epsilon);
    mc.stop_tol = cfg.take_double("stop_tol", mc.stop_tol);
    mc.max_iters = cfg.take_integer<int>("max_iters", mc.max_iters);
    mc.bias_correction = cfg.take_bool("bias_correction", mc.bias_correction);
    mc.eta = cfg.take_double("eta", mc.eta);
    const int bootstrap_k = cfg.take_integer<int>("bootstrap", 0);
    std::uint64_t bootstrap_seed =
        cfg.take_integer<std::uint64_t>("bootstrap_seed", 1);
    finish_config();
    if (flag_given(sub, "--nmax")) mc.n_max = nmax;
    if (flag_given(sub, "--epsilon")) mc.epsilon = epsilon;
    if (flag_given(sub, "--eta")) mc.eta = eta;
    if (flag_given(sub, "--seed")) bootstrap_seed = seed;

    const maxlik::MaxlikResult res = maxlik::reconstruct(samples, mc);

    std::string trace = "iter,loglik,residual\n";
    for (size_t i = 0; i < res.likelihood_trace.size(); ++i) {
      trace += std::to_string(i);
      trace += ',';
      trace += io::format_sig9(res.likelihood_trace[i]);
      trace += ',';
      trace += io::format_sig9(res.residual_trace[i]);
      trace += '\n';
    }
    std::ofstream log(dir / "likelihood.csv", std::ios::binary);
    log << trace;

    if (bootstrap_k > 0) {
      fs::path sidecar = samples_path;
      sidecar.replace_extension(".meta.json");
      if (!fs::exists(sidecar))
        throw std::invalid_argument(
            "reconstruct: bootstrap requires the metadata sidecar " +
            sidecar.string() + " (written by simulate)");
      const io::SimulationMetadata meta = io::read_metadata_json(sidecar);
      const Eigen::MatrixXd se = maxlik::bootstrap_errors(
          res.rho, meta.plan, mc, bootstrap_k, bootstrap_seed);
      io::write_density_matrix_json(dir / "rho.json", res.rho.matrix(), &se);
    } else {
      io::write_density_matrix_json(dir / "rho.json", res.rho.matrix());
    }

    // tail population: mass parked on the last retained Fock level warns
    // that n_max clips the state
    std::cout << "reconstruct: maxlik on " << samples.size()
              << " samples, n_max=" << mc.n_max << ", " << res.iterations
              << " iterations, converged="
              << (res.converged ? "true" : "false")
              << ", loglik=" << io::format_sig9(res.likelihood_trace.back())
              << ", tail_population="
              << io::format_sig9(res.rho(mc.n_max, mc.n_max).real())
              << ", wrote " << (dir / "rho.json").string() << "\n";
    return 0;
  }

  throw std::invalid_argument("reconstruct: unknown method '" + method +
                              "' (expected radon, pattern, or maxlik)");
}

int run_analyze(Config& cfg, const std::string& out) {
  const auto est_path = cfg.take("estimate");
  const auto wigner_path = cfg.take("wigner");
  const auto meta_path = cfg.take("metadata");
  const auto ref_path = cfg.take("reference");
  cfg.finish();
  if (!est_path && !wigner_path)
    throw std::invalid_argument(
        "analyze: provide estimate=PATH (density matrix) or wigner=PATH (grid)");
  if (est_path && wigner_path)
    throw std::invalid_argument("analyze: provide only one of estimate, wigner");

  io::AnalysisReport report;
  if (est_path) {
    const io::DensityMatrixFile file = io::read_density_matrix_json(*est_path);
    report.source = *est_path;
    const int d = static_cast<int>(file.rho.rows());
    report.photon_p.resize(d);
    double parity_sum = 0.0;
    for (int n = 0; n < d; ++n) {
      report.photon_p[n] = file.rho(n, n).real();
      parity_sum += (n % 2 == 0 ? 1.0 : -1.0) * report.photon_p[n];
    }
    report.w_origin = parity_sum / M_PI;

    std::optional<DensityMatrix> truth;
    if (meta_path) {
      const io::SimulationMetadata meta = io::read_metadata_json(*meta_path);
      truth = states::build(meta.truth, d - 1);
    } else if (ref_path) {
      truth = nearest_state(io::read_density_matrix_json(*ref_path).rho);
    }
    if (truth) report.fidelity = fidelity(*truth, nearest_state(file.rho));
  } else {
    const WignerGrid w = io::read_wigner_csv(*wigner_path);
    report.source = *wigner_path;
    report.w_origin = bilinear_at_origin(w);
  }
  report.wigner_negative_at_origin = report.w_origin < 0.0;

  std::cout << "analyze: source " << report.source << "\n";
  if (report.fidelity)
    std::cout << "  fidelity: " << io::format_sig9(*report.fidelity) << "\n";
  else
    std::cout << "  fidelity: omitted (no truth state provided)\n";
  if (!report.photon_p.empty()) {
    std::cout << "  photon_p:";
    for (const double p : report.photon_p)
      std::cout << ' ' << io::format_sig9(p);
    std::cout << "\n";
  }
  std::cout << "  W(0,0): " << io::format_sig9(report.w_origin) << "\n";
  std::cout << "  negative_at_origin: "
            << (report.wigner_negative_at_origin ? "true" : "false") << "\n";

  const fs::path dir = prepare_out_dir(out);
  io::write_report_json(dir / "report.json", report);
  return 0;
}

int run_spatial_scan(Config& cfg, const std::string& out) {
  const fs::path mode_path(cfg.take_required("mode"));
  const double k0 = cfg.take_double("k0", 1.0);
  const double z = cfg.take_double("z", 0.0);
  const GridSpec grid = parse_grid(cfg.take_required("grid"), "grid");
  cfg.finish();

  spatial::SpatialMode mode = io::read_mode_csv(mode_path, k0);
  if (mode.dims() != 1)
    throw std::invalid_argument(
        "spatial-scan: only 1D mode profiles can be scanned");
  if (z != 0.0) mode = spatial::propagate(mode, z);

  const WignerGrid w = spatial::wigner_scan(mode, grid);
  const fs::path dir = prepare_out_dir(out);
  io::write_wigner_csv(dir / "spatial_wigner.csv", w);
  std::cout << "spatial-scan: " << grid.nq << "x" << grid.np
            << " scan of " << mode_path.string() << " at z="
            << io::format_sig9(z) << ", wrote "
            << (dir / "spatial_wigner.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvqst: homodyne tomography simulation and reconstruction"};
  app.require_subcommand(1);

  std::string config_path, method, out = ".";
  std::uint64_t seed = 0;
  double eta = 1.0, kc = 4.0, epsilon = 1.0;
  int nmax = 10;

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default .)");
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "draw quadrature samples from a configured state");
  add_config(sim);
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--eta", eta, "detector efficiency in (0, 1]");
  sim->add_option("--nmax", nmax, "Fock truncation of the truth state");

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "estimate a state from a samples file");
  add_config(rec);
  rec->add_option("--method", method, "reconstruction method")
      ->check(CLI::IsMember({"radon", "pattern", "maxlik"}));
  rec->add_option("--seed", seed, "bootstrap base seed");
  rec->add_option("--eta", eta, "efficiency correction for maxlik POVMs");
  rec->add_option("--kc", kc, "radon low-pass cutoff");
  rec->add_option("--nmax", nmax, "Fock truncation of the estimate");
  rec->add_option("--epsilon", epsilon, "maxlik dilution parameter (inf for undiluted)");

  CLI::App* ana = app.add_subcommand(
      "analyze", "report on an estimate against the recorded truth");
  add_config(ana);

  CLI::App* spa = app.add_subcommand(
      "spatial-scan", "Wigner scan of a spatial mode profile");
  add_config(spa);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Config cfg = Config::load(config_path);
    if (sim->parsed()) return run_simulate(sim, cfg, seed, eta, nmax, out);
    if (rec->parsed())
      return run_reconstruct(rec, cfg, seed, method, eta, kc, nmax, epsilon, out);
    if (ana->parsed()) return run_analyze(cfg, out);
    return run_spatial_scan(cfg, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
