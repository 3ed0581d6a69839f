// Copyright 2026 The stellar-witness Authors
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

#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "stellar/errors.hpp"

namespace stellar::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw DataError("field '" + field + "': " + what);
}

const Json& member(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(field + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "must be finite");
  return v;
}

std::size_t count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    field_error(field, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array");
  return j;
}

std::string kind_string(const Json& j, const char* key, const std::string& field) {
  const Json& v = member(j, key, field);
  if (!v.is_string()) field_error(field + "." + key, "expected a string");
  return v.get<std::string>();
}

bool scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

bool inline_array(const Json& j) {
  for (const Json& e : j) {
    if (scalar(e)) continue;
    if (e.is_array() && std::all_of(e.begin(), e.end(), scalar)) continue;
    return false;
  }
  return true;
}

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (inline_array(j)) {
        out += '[';
        bool first = true;
        for (const Json& e : j) {
          if (!first) out += ", ";
          first = false;
          emit(e, out, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  ";
        emit(e, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  " + Json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_double(double x) { return std::isfinite(x) ? format_double(x) : "nan"; }

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) throw NumericError("cannot serialise a non-finite number");
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DataError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": malformed JSON (" + e.what() + ")");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot rename onto '" + path.string() + "'");
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) field_error(field, "expected a [re, im] pair");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

// ---- states ------------------------------------------------------------------

StateValue state_from_json(const Json& j, const std::string& field) {
  const std::string kind = kind_string(j, "kind", field);
  const std::size_t cutoff = count(member(j, "cutoff", field), field + ".cutoff");
  const Json& data = array(member(j, "data", field), field + ".data");
  double tail = 0.0;
  if (j.contains("tail_bound")) tail = number(j["tail_bound"], field + ".tail_bound");
  if (data.size() != cutoff + 1) {
    field_error(field + ".data", "expected cutoff + 1 = " + std::to_string(cutoff + 1) +
                                     " entries, got " + std::to_string(data.size()));
  }
  if (kind == "fock_vector") {
    FockVector psi;
    psi.tail_bound = tail;
    for (std::size_t k = 0; k <= cutoff; ++k)
      psi.amplitudes.push_back(complex_from(data[k], field + ".data[" + std::to_string(k) + "]"));
    return psi;
  }
  if (kind == "fock_probabilities") {
    ComplexMatrix rho(cutoff + 1, cutoff + 1);
    for (std::size_t k = 0; k <= cutoff; ++k) {
      const double p = number(data[k], field + ".data[" + std::to_string(k) + "]");
      if (p < 0.0) field_error(field + ".data[" + std::to_string(k) + "]", "negative probability");
      rho(k, k) = p;
    }
    return FockDensity{std::move(rho), tail};
  }
  if (kind == "density") {
    ComplexMatrix rho(cutoff + 1, cutoff + 1);
    for (std::size_t k = 0; k <= cutoff; ++k) {
      const std::string row = field + ".data[" + std::to_string(k) + "]";
      const Json& r = array(data[k], row);
      if (r.size() != cutoff + 1) field_error(row, "row has the wrong length");
      for (std::size_t l = 0; l <= cutoff; ++l)
        rho(k, l) = complex_from(r[l], row + "[" + std::to_string(l) + "]");
    }
    if (!rho.is_hermitian(1e-10)) field_error(field + ".data", "density matrix is not Hermitian");
    return FockDensity{std::move(rho), tail};
  }
  field_error(field + ".kind", "unknown state kind '" + kind + "'");
}

Json state_to_json(const FockVector& psi) {
  Json data = Json::array();
  for (Complex a : psi.amplitudes) data.push_back(complex_json(a));
  return {{"kind", "fock_vector"}, {"cutoff", psi.cutoff()}, {"data", data}, {"tail_bound", psi.tail_bound}};
}

Json state_to_json(const FockDensity& rho) {
  Json data = Json::array();
  for (std::size_t k = 0; k < rho.matrix.rows(); ++k) {
    Json row = Json::array();
    for (std::size_t l = 0; l < rho.matrix.cols(); ++l) row.push_back(complex_json(rho.matrix(k, l)));
    data.push_back(row);
  }
  return {{"kind", "density"}, {"cutoff", rho.cutoff()}, {"data", data}, {"tail_bound", rho.tail_bound}};
}

MultimodeState multimode_state_from_json(const Json& j, std::size_t modes, const std::string& field) {
  const std::string kind = kind_string(j, "kind", field);
  if (kind != "multimode_vector") field_error(field + ".kind", "expected 'multimode_vector'");
  const Json& data = array(member(j, "data", field), field + ".data");
  if (data.empty()) field_error(field + ".data", "empty state");
  MultimodeState out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string entry = field + ".data[" + std::to_string(i) + "]";
    const Json& occ = array(member(data[i], "occupation", entry), entry + ".occupation");
    if (occ.size() != modes) field_error(entry + ".occupation", "expected " + std::to_string(modes) + " modes");
    MultiIndex m;
    for (std::size_t k = 0; k < occ.size(); ++k)
      m.occupations.push_back(count(occ[k], entry + ".occupation[" + std::to_string(k) + "]"));
    out.amplitudes.emplace_back(std::move(m), complex_from(member(data[i], "amplitude", entry), entry + ".amplitude"));
  }
  return out;
}

// ---- witnesses ---------------------------------------------------------------

WitnessDocument witness_from_json(const Json& j) {
  const std::string field = "witness";
  WitnessDocument doc;
  doc.source = j;
  const std::string type = kind_string(j, "type", field);
  double identity = 0.0;
  if (j.contains("identity_weight")) identity = number(j["identity_weight"], field + ".identity_weight");

  if (j.contains("modes")) {
    const std::size_t modes = count(j["modes"], field + ".modes");
    if (modes < 1 || modes > kMaxModes) field_error(field + ".modes", "must lie in [1, 3]");
    std::vector<MultimodeTerm> terms;
    if (type == "fock_projector") {
      const Json& occ = array(member(j, "occupation", field), field + ".occupation");
      if (occ.size() != modes) field_error(field + ".occupation", "expected " + std::to_string(modes) + " modes");
      MultiIndex m;
      for (std::size_t k = 0; k < occ.size(); ++k)
        m.occupations.push_back(count(occ[k], field + ".occupation[" + std::to_string(k) + "]"));
      terms.push_back({1.0, MultimodeState::fock(std::move(m))});
    } else if (type == "terms") {
      const Json& list = array(member(j, "terms", field), field + ".terms");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string t = field + ".terms[" + std::to_string(i) + "]";
        terms.push_back({number(member(list[i], "weight", t), t + ".weight"),
                         multimode_state_from_json(member(list[i], "state", t), modes, t + ".state")});
      }
    } else {
      field_error(field + ".type", "unknown multimode witness type '" + type + "'");
    }
    doc.multimode.emplace(modes, std::move(terms), identity);
    return doc;
  }

  if (type == "fock_pair") {
    doc.single = fock_pair_witness(count(member(j, "j", field), field + ".j"),
                                   count(member(j, "k", field), field + ".k"),
                                   number(member(j, "omega", field), field + ".omega"));
  } else if (type == "cat_pair") {
    doc.single = cat_pair_witness(complex_from(member(j, "beta", field), field + ".beta"),
                                  number(member(j, "omega", field), field + ".omega"));
  } else if (type == "fock_diagonal") {
    const Json& w = array(member(j, "weights", field), field + ".weights");
    std::vector<double> weights;
    for (std::size_t i = 0; i < w.size(); ++i)
      weights.push_back(number(w[i], field + ".weights[" + std::to_string(i) + "]"));
    doc.single = fock_diagonal_witness(weights);
  } else if (type == "terms") {
    const Json& list = array(member(j, "terms", field), field + ".terms");
    std::vector<WitnessTerm> terms;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string t = field + ".terms[" + std::to_string(i) + "]";
      const double weight = number(member(list[i], "weight", t), t + ".weight");
      StateValue s = state_from_json(member(list[i], "state", t), t + ".state");
      if (auto* psi = std::get_if<FockVector>(&s)) {
        terms.push_back({weight, std::move(*psi)});
      } else {
        terms.push_back({weight, std::get<FockDensity>(std::move(s))});
      }
    }
    doc.single = WitnessOperator(std::move(terms), identity);
    return doc;
  } else {
    field_error(field + ".type", "unknown witness type '" + type + "'");
  }
  if (identity != 0.0) doc.single = doc.single->affine(1.0, identity);
  return doc;
}

// ---- optimizer config and results ----------------------------------------------

OptimizerConfig config_from_json(const Json& j, OptimizerConfig base) {
  const std::string field = "config";
  if (!j.is_object()) field_error(field, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = it.key();
    const std::string f = field + "." + key;
    if (key == "starts") {
      base.starts = count(*it, f);
    } else if (key == "r_max") {
      base.r_max = number(*it, f);
    } else if (key == "alpha_bound") {
      base.alpha_bound = number(*it, f);
    } else if (key == "simplex_tolerance") {
      base.simplex_tolerance = number(*it, f);
    } else if (key == "max_iterations") {
      base.max_iterations = count(*it, f);
    } else if (key == "seed") {
      if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
        field_error(f, "expected a non-negative integer");
      }
      base.seed = it->get<std::uint64_t>();
    } else if (key == "threads") {
      base.threads = count(*it, f);
    } else if (key == "free_vartheta") {
      if (!it->is_boolean()) field_error(f, "expected a boolean");
      base.free_vartheta = it->get<bool>();
    } else {
      field_error(f, "unknown option");
    }
  }
  try {
    base.validate();
  } catch (const DomainError& e) {
    field_error(field, e.what());
  }
  return base;
}

Json config_to_json(const OptimizerConfig& c) {
  return {{"starts", c.starts},
          {"r_max", c.r_max},
          {"alpha_bound", c.alpha_bound},
          {"simplex_tolerance", c.simplex_tolerance},
          {"max_iterations", c.max_iterations},
          {"free_vartheta", c.free_vartheta}};
}

Json params_to_json(const GaussianParams& p) {
  return {{"theta", p.theta}, {"vartheta", p.vartheta}, {"r", p.r}, {"alpha", complex_json(p.alpha)}};
}

GaussianParams params_from_json(const Json& j, const std::string& field) {
  GaussianParams p;
  p.theta = number(member(j, "theta", field), field + ".theta");
  p.vartheta = number(member(j, "vartheta", field), field + ".vartheta");
  p.r = number(member(j, "r", field), field + ".r");
  p.alpha = complex_from(member(j, "alpha", field), field + ".alpha");
  return p;
}

Json diagnostics_to_json(const ThresholdDiagnostics& d) {
  Json values = Json::array();
  for (const StartRecord& s : d.starts) values.push_back(s.error.empty() ? Json(s.value) : Json(nullptr));
  Json out = {{"starts", d.starts.size()},
              {"converged_starts", d.converged_starts},
              {"starts_near_best", d.starts_near_best},
              {"optimized_parameters", d.optimized_parameters},
              {"r_at_bound", d.r_at_bound},
              {"alpha_at_bound", d.alpha_at_bound},
              {"witness_tail_bound", d.witness_tail_bound},
              {"monotonicity_violation", d.monotonicity_violation},
              {"start_values", values}};
  return out;
}

Json threshold_result_to_json(const Json& witness, const ThresholdResult& r,
                              const OptimizerConfig& config) {
  Json core = Json::array();
  for (Complex c : r.core) core.push_back(complex_json(c));
  return {{"witness", witness},
          {"rank", r.rank},
          {"value", r.value},
          {"params", params_to_json(r.params)},
          {"core", core},
          {"diagnostics", diagnostics_to_json(r.diagnostics)},
          {"seed", config.seed},
          {"config", config_to_json(config)}};
}

Json multimode_result_to_json(const Json& witness, const MultimodeThresholdResult& r,
                              const OptimizerConfig& config) {
  Json generator = Json::array();
  for (std::size_t k = 0; k < r.params.generator.rows(); ++k) {
    Json row = Json::array();
    for (std::size_t l = 0; l < r.params.generator.cols(); ++l) row.push_back(complex_json(r.params.generator(k, l)));
    generator.push_back(row);
  }
  Json modes = Json::array();
  for (const GaussianParams& g : r.params.modes) modes.push_back(params_to_json(g));
  Json basis = Json::array();
  for (const MultiIndex& m : r.basis) basis.push_back(m.occupations);
  Json core = Json::array();
  for (Complex c : r.core) core.push_back(complex_json(c));
  return {{"witness", witness},
          {"rank", r.rank},
          {"value", r.value},
          {"params", {{"generator", generator}, {"modes", modes}}},
          {"basis", basis},
          {"core", core},
          {"diagnostics", diagnostics_to_json(r.diagnostics)},
          {"seed", config.seed},
          {"config", config_to_json(config)}};
}

// ---- boundary ------------------------------------------------------------------

Json family_to_json(const WitnessFamily& f) {
  if (f.kind == WitnessFamily::Kind::FockPair) return {{"type", "fock_pair"}, {"j", f.j}, {"k", f.k}};
  return {{"type", "cat_pair"}, {"beta", complex_json(f.beta)}};
}

WitnessFamily family_from_json(const Json& j) {
  const std::string field = "family";
  const std::string type = kind_string(j, "type", field);
  if (type == "fock_pair") {
    return WitnessFamily::fock_pair(count(member(j, "j", field), field + ".j"),
                                    count(member(j, "k", field), field + ".k"));
  }
  if (type == "cat_pair") return WitnessFamily::cat_pair(complex_from(member(j, "beta", field), field + ".beta"));
  field_error(field + ".type", "unknown family '" + type + "'");
}

std::string boundary_csv(const std::vector<BoundaryCurve>& curves) {
  std::string out = "omega,rank,p_first,p_second,threshold,on_hull,flagged\n";
  for (const BoundaryCurve& c : curves) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const BoundaryPoint& p = c.points[i];
      out += format_double(p.omega) + "," + std::to_string(c.rank) + "," + csv_double(p.p_first) + "," +
             csv_double(p.p_second) + "," + csv_double(p.threshold) + "," + (c.on_hull(i) ? "1" : "0") +
             "," + (p.flagged ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::vector<BoundaryCurve> curves_from_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "omega,rank,p_first,p_second,threshold,on_hull,flagged") {
    throw DataError(source + ":1: missing or unexpected CSV header");
  }
  std::vector<BoundaryCurve> curves;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const std::string where = source + ":" + std::to_string(lineno);
    if (cells.size() != 7) throw DataError(where + ": expected 7 columns");
    auto real = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') throw DataError(where + ": bad number '" + s + "'");
      return v;
    };
    const auto rank = static_cast<std::size_t>(real(cells[1]));
    if (rank == 0) throw DataError(where + ": rank must be positive");
    if (curves.empty() || curves.back().rank != rank) {
      if (!curves.empty() && rank != curves.back().rank + 1) {
        throw DataError(where + ": ranks must appear in consecutive blocks");
      }
      curves.push_back({});
      curves.back().rank = rank;
    }
    BoundaryPoint p;
    p.omega = real(cells[0]);
    p.p_first = real(cells[2]);
    p.p_second = real(cells[3]);
    p.threshold = real(cells[4]);
    p.flagged = cells[6] == "1";
    if (!p.flagged && !(std::isfinite(p.p_first) && std::isfinite(p.p_second) && std::isfinite(p.threshold))) {
      throw DataError(where + ": unflagged row has non-finite values");
    }
    curves.back().points.push_back(p);
  }
  if (curves.empty()) throw DataError(source + ": no boundary rows");
  for (BoundaryCurve& c : curves) {
    std::vector<Point2> pts;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (c.points[i].flagged) continue;
      pts.push_back({c.points[i].p_first, c.points[i].p_second});
      index.push_back(i);
    }
    if (!pts.empty())
      for (std::size_t h : gift_wrap(pts)) c.hull.push_back(index[h]);
  }
  return curves;
}

Json hull_to_json(const BoundaryCurve& curve) {
  Json vertices = Json::array();
  for (const Point2& v : curve.hull_vertices()) vertices.push_back(Json::array({v.x, v.y}));
  return {{"rank", curve.rank}, {"vertices", vertices}};
}

}  // namespace stellar::io
