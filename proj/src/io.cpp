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

#include "cvqst/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <nlohmann/json.hpp>

namespace cvqst::io {

namespace {

using nlohmann::json;

std::string format_with(double v, int precision) {
  char buf[64];
  const auto res = precision > 0
                       ? std::to_chars(buf, buf + sizeof(buf), v,
                                       std::chars_format::general, precision)
                       : std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void bad_row(const std::filesystem::path& path, size_t line,
                          const std::string& what) {
  throw std::invalid_argument(path.string() + ":" + std::to_string(line) +
                              ": " + what);
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    size_t line) {
  double v;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    bad_row(path, line, "cannot parse number '" + std::string(field) + "'");
  return v;
}

// splits one CSV line on commas; no quoting, formats here never need it
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open input file " + path.string());
  return in;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex values must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json state_to_json(const states::StateSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  j["n"] = spec.n;
  j["alpha"] = complex_to_json(spec.alpha);
  j["zeta"] = spec.zeta;
  j["nbar"] = spec.nbar;
  j["c0"] = complex_to_json(spec.c0);
  j["c1"] = complex_to_json(spec.c1);
  if (spec.base) j["base"] = state_to_json(*spec.base);
  return j;
}

states::StateSpec state_from_json(const json& j) {
  states::StateSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("n")) spec.n = j["n"].get<int>();
  if (j.contains("alpha")) spec.alpha = complex_from_json(j["alpha"]);
  if (j.contains("zeta")) spec.zeta = j["zeta"].get<double>();
  if (j.contains("nbar")) spec.nbar = j["nbar"].get<double>();
  if (j.contains("c0")) spec.c0 = complex_from_json(j["c0"]);
  if (j.contains("c1")) spec.c1 = complex_from_json(j["c1"]);
  if (j.contains("base"))
    spec.base = std::make_shared<states::StateSpec>(state_from_json(j["base"]));
  return spec;
}

json plan_to_json(const sampler::AcquisitionPlan& plan) {
  json sched;
  switch (plan.schedule.kind) {
    case sampler::PhaseSchedule::Kind::uniform_random:
      sched["kind"] = "uniform_random";
      break;
    case sampler::PhaseSchedule::Kind::swept:
      sched["kind"] = "swept";
      sched["n_phases"] = plan.schedule.n_phases;
      break;
    case sampler::PhaseSchedule::Kind::fixed_list:
      sched["kind"] = "fixed_list";
      sched["phases"] = plan.schedule.phases;
      break;
  }
  json j;
  j["n_samples"] = plan.n_samples;
  j["schedule"] = sched;
  j["eta"] = plan.eta;
  if (std::isfinite(plan.snr)) j["snr"] = plan.snr;
  j["xi"] = plan.xi;
  j["seed"] = plan.seed;
  return j;
}

sampler::AcquisitionPlan plan_from_json(const json& j) {
  sampler::AcquisitionPlan plan;
  plan.n_samples = j.at("n_samples").get<long long>();
  const json& sched = j.at("schedule");
  const auto kind = sched.at("kind").get<std::string>();
  if (kind == "uniform_random") {
    plan.schedule = sampler::PhaseSchedule::uniform_random();
  } else if (kind == "swept") {
    plan.schedule = sampler::PhaseSchedule::swept(sched.at("n_phases").get<int>());
  } else if (kind == "fixed_list") {
    plan.schedule = sampler::PhaseSchedule::fixed_list(
        sched.at("phases").get<std::vector<double>>());
  } else {
    throw std::invalid_argument("unknown phase schedule kind '" + kind + "'");
  }
  plan.eta = j.at("eta").get<double>();
  plan.snr = j.contains("snr") ? j["snr"].get<double>()
                               : std::numeric_limits<double>::infinity();
  plan.xi = j.at("xi").get<double>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  return plan;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

std::string format_sig9(double v) { return format_with(v, 9); }

std::string format_full(double v) { return format_with(v, 0); }

void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<QuadratureSample>& samples) {
  std::string text = "theta,q\n";
  text.reserve(text.size() + samples.size() * 24);
  for (const auto& s : samples) {
    text += format_sig9(s.theta);
    text += ',';
    text += format_sig9(s.q);
    text += '\n';
  }
  write_text(path, text);
}

std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != "theta,q")
    bad_row(path, 1, "expected header 'theta,q'");
  std::vector<QuadratureSample> samples;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trimmed(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != 2) bad_row(path, line_no, "expected 2 fields");
    samples.push_back({parse_double(fields[0], path, line_no),
                       parse_double(fields[1], path, line_no)});
  }
  return samples;
}

void write_metadata_json(const std::filesystem::path& path,
                         const SimulationMetadata& meta) {
  json j;
  j["plan"] = plan_to_json(meta.plan);
  j["truth_state"] = state_to_json(meta.truth);
  write_text(path, j.dump(2) + "\n");
}

SimulationMetadata read_metadata_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  try {
    return {plan_from_json(j.at("plan")), state_from_json(j.at("truth_state"))};
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_density_matrix_json(const std::filesystem::path& path,
                               const Eigen::MatrixXcd& rho,
                               const Eigen::MatrixXd* se) {
  const int d = static_cast<int>(rho.rows());
  if (rho.cols() != d) throw std::invalid_argument("density matrix must be square");
  json j;
  j["dim"] = d;
  json re = json::array(), im = json::array();
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      re.push_back(rho(r, c).real());
      im.push_back(rho(r, c).imag());
    }
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  if (se) {
    if (se->rows() != d || se->cols() != d)
      throw std::invalid_argument("se block must match the matrix dimension");
    json s = json::array();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) s.push_back((*se)(r, c));
    j["se"] = std::move(s);
  }
  write_text(path, j.dump(2) + "\n");
}

DensityMatrixFile read_density_matrix_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  try {
    const int d = j.at("dim").get<int>();
    if (d < 1) throw std::invalid_argument(path.string() + ": dim must be >= 1");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<size_t>(d) * d || im.size() != re.size())
      throw std::invalid_argument(path.string() +
                                  ": re/im length must equal dim^2");
    DensityMatrixFile out;
    out.rho.resize(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        out.rho(r, c) = Complex(re[r * d + c], im[r * d + c]);
    if (j.contains("se")) {
      const auto se = j["se"].get<std::vector<double>>();
      if (se.size() != re.size())
        throw std::invalid_argument(path.string() +
                                    ": se length must equal dim^2");
      out.se.emplace(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) (*out.se)(r, c) = se[r * d + c];
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& w) {
  std::string text = "q,p,w\n";
  text.reserve(text.size() + static_cast<size_t>(w.spec.nq) * w.spec.np * 36);
  for (int i = 0; i < w.spec.nq; ++i) {
    for (int j = 0; j < w.spec.np; ++j) {
      text += format_sig9(w.spec.q_at(i));
      text += ',';
      text += format_sig9(w.spec.p_at(j));
      text += ',';
      text += format_sig9(w.values(i, j));
      text += '\n';
    }
  }
  write_text(path, text);
}

WignerGrid read_wigner_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != "q,p,w")
    bad_row(path, 1, "expected header 'q,p,w'");
  std::vector<double> qs, ps, ws;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trimmed(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != 3) bad_row(path, line_no, "expected 3 fields");
    qs.push_back(parse_double(fields[0], path, line_no));
    ps.push_back(parse_double(fields[1], path, line_no));
    ws.push_back(parse_double(fields[2], path, line_no));
  }
  if (ws.size() < 4) throw std::invalid_argument(path.string() + ": grid too small");
  // q-major ordering: p cycles fastest
  size_t np = 1;
  while (np < ps.size() && ps[np] != ps[0]) ++np;
  if (np < 2 || ws.size() % np != 0)
    throw std::invalid_argument(path.string() + ": rows do not form a grid");
  const size_t nq = ws.size() / np;
  if (nq < 2) throw std::invalid_argument(path.string() + ": grid too small");
  WignerGrid out;
  out.spec = {qs.front(), qs.back(), static_cast<int>(nq),
              ps.front(), ps[np - 1], static_cast<int>(np)};
  out.spec.validate();
  out.values.resize(nq, np);
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < np; ++j) out.values(i, j) = ws[i * np + j];
  return out;
}

void write_mode_csv(const std::filesystem::path& path,
                    const spatial::SpatialMode& mode) {
  std::string text;
  if (mode.dims() == 1) {
    text = "x,re,im\n";
    for (int i = 0; i < mode.nx(); ++i) {
      text += format_sig9(mode.x_at(i));
      text += ',';
      text += format_sig9(mode.field()(i, 0).real());
      text += ',';
      text += format_sig9(mode.field()(i, 0).imag());
      text += '\n';
    }
  } else {
    text = "x,y,re,im\n";
    for (int i = 0; i < mode.nx(); ++i) {
      for (int j = 0; j < mode.ny(); ++j) {
        text += format_sig9(mode.x_at(i));
        text += ',';
        text += format_sig9(mode.y_at(j));
        text += ',';
        text += format_sig9(mode.field()(i, j).real());
        text += ',';
        text += format_sig9(mode.field()(i, j).imag());
        text += '\n';
      }
    }
  }
  write_text(path, text);
}

spatial::SpatialMode read_mode_csv(const std::filesystem::path& path, double k0) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) bad_row(path, 1, "empty file");
  const std::string header = trimmed(line);
  const bool is_2d = header == "x,y,re,im";
  if (!is_2d && header != "x,re,im")
    bad_row(path, 1, "expected header 'x,re,im' or 'x,y,re,im'");

  std::vector<double> xs, ys;
  std::vector<Complex> es;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trimmed(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != (is_2d ? 4u : 3u))
      bad_row(path, line_no, "wrong field count");
    xs.push_back(parse_double(fields[0], path, line_no));
    if (is_2d) ys.push_back(parse_double(fields[1], path, line_no));
    es.emplace_back(parse_double(fields[is_2d ? 2 : 1], path, line_no),
                    parse_double(fields[is_2d ? 3 : 2], path, line_no));
  }
  if (es.size() < 3) throw std::invalid_argument(path.string() + ": too few rows");

  if (!is_2d) {
    const double pitch = (xs.back() - xs.front()) / (xs.size() - 1);
    if (!(pitch > 0.0))
      throw std::invalid_argument(path.string() + ": x must be increasing");
    Eigen::VectorXcd field(static_cast<Eigen::Index>(es.size()));
    for (size_t i = 0; i < es.size(); ++i) field(i) = es[i];
    return spatial::SpatialMode::line(pitch, k0, std::move(field));
  }
  // x-major rows: y cycles fastest
  size_t ny = 1;
  while (ny < ys.size() && ys[ny] != ys[0]) ++ny;
  if (ny < 3 || es.size() % ny != 0)
    throw std::invalid_argument(path.string() + ": rows do not form a grid");
  const size_t nx = es.size() / ny;
  const double pitch = (xs.back() - xs.front()) / (nx - 1);
  if (!(pitch > 0.0))
    throw std::invalid_argument(path.string() + ": x must be increasing");
  Eigen::MatrixXcd field(nx, ny);
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j) field(i, j) = es[i * ny + j];
  return spatial::SpatialMode::plane(pitch, k0, std::move(field));
}

void write_report_json(const std::filesystem::path& path,
                       const AnalysisReport& report) {
  json j;
  j["source"] = report.source;
  if (report.fidelity) j["fidelity"] = *report.fidelity;
  j["photon_p"] = report.photon_p;
  j["w_origin"] = report.w_origin;
  j["wigner_negative_at_origin"] = report.wigner_negative_at_origin;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace cvqst::io
