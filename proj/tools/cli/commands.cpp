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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "stellar/boundary.hpp"
#include "stellar/errors.hpp"
#include "stellar/multimode.hpp"
#include "stellar/threshold.hpp"
#include "validation.hpp"

namespace stellar::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr const char* kCsvName = "boundary.csv";
constexpr const char* kRequestName = "request.json";

std::string hull_name(std::size_t rank) { return "hull_rank_" + std::to_string(rank) + ".json"; }

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  return j[key];
}

std::size_t need_count(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_unsigned()) throw DataError(where + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

Json parse_file(const fs::path& path) { return io::parse(io::read_file(path), path.string()); }

// Optimizer flags shared by the computing subcommands.
struct OptimizerFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> starts;
  std::optional<std::size_t> threads;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON file with optimizer settings")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Multistart seed");
    app->add_option("--starts", starts, "Number of seeded starts");
    app->add_option("--threads", threads, "Worker threads (0 = all; capped by STELLAR_THREADS)");
  }

  OptimizerConfig build() const {
    OptimizerConfig config;
    if (!config_path.empty()) config = io::config_from_json(parse_file(config_path));
    if (seed) config.seed = *seed;
    if (starts) config.starts = *starts;
    apply_threads(config);
    config.validate();
    return config;
  }

  void apply_threads(OptimizerConfig& config) const {
    if (threads) config.threads = *threads;
  }
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    io::write_file_atomic(out_path, text);
  }
}

// ---- threshold ---------------------------------------------------------------

std::string threshold_text(const io::WitnessDocument& doc, std::size_t rank, const OptimizerConfig& config) {
  if (doc.multimode) {
    return io::dump(io::multimode_result_to_json(doc.source, multimode_threshold(*doc.multimode, rank, config), config));
  }
  return io::dump(io::threshold_result_to_json(doc.source, compute_threshold(*doc.single, rank, config), config));
}

struct ThresholdArgs {
  std::string witness;
  std::size_t rank = 1;
  std::string out;
  std::string recheck;
  OptimizerFlags flags;
};

int cmd_threshold(const ThresholdArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.recheck.empty()) {
    const std::string stored = io::read_file(a.recheck);
    const Json j = io::parse(stored, a.recheck);
    const io::WitnessDocument doc = io::witness_from_json(need(j, "witness", a.recheck));
    OptimizerConfig config = io::config_from_json(need(j, "config", a.recheck));
    config.seed = need(j, "seed", a.recheck).get<std::uint64_t>();
    a.flags.apply_threads(config);
    const bool same = threshold_text(doc, need_count(j, "rank", a.recheck), config) == stored;
    out << io::dump({{"recheck", a.recheck}, {"identical", same}});
    if (!same) err << "recheck: regenerated output differs from " << a.recheck << "\n";
    return same ? kOk : kCheckFailure;
  }
  if (a.witness.empty()) throw DataError("--witness is required (or --recheck)");
  const io::WitnessDocument doc = io::witness_from_json(parse_file(a.witness));
  emit(threshold_text(doc, a.rank, a.flags.build()), a.out, out);
  return kOk;
}

// ---- boundary ----------------------------------------------------------------

struct BoundaryRequest {
  WitnessFamily family;
  std::size_t first_rank = 1;
  std::size_t last_rank = 1;
  std::size_t omegas = 64;
  OptimizerConfig config;
};

Json request_to_json(const BoundaryRequest& r) {
  return {{"family", io::family_to_json(r.family)},
          {"ranks", Json::array({r.first_rank, r.last_rank})},
          {"omegas", r.omegas},
          {"seed", r.config.seed},
          {"config", io::config_to_json(r.config)}};
}

BoundaryRequest request_from_json(const Json& j, const std::string& where) {
  BoundaryRequest r;
  r.family = io::family_from_json(need(j, "family", where));
  const Json& ranks = need(j, "ranks", where);
  if (!ranks.is_array() || ranks.size() != 2 || !ranks[0].is_number_unsigned() || !ranks[1].is_number_unsigned()) {
    throw DataError(where + ": 'ranks' must be [first, last]");
  }
  r.first_rank = ranks[0].get<std::size_t>();
  r.last_rank = ranks[1].get<std::size_t>();
  r.omegas = need_count(j, "omegas", where);
  r.config = io::config_from_json(need(j, "config", where));
  r.config.seed = need(j, "seed", where).get<std::uint64_t>();
  return r;
}

// All output files of a sweep, keyed by file name.
std::map<std::string, std::string> boundary_files(const BoundaryRequest& r) {
  if (r.first_rank < 1 || r.first_rank > r.last_rank) throw DomainError("rank range must satisfy 1 <= first <= last");
  if (r.omegas < 1) throw DomainError("--omegas must be at least 1");
  const std::vector<double> omegas = uniform_omegas(r.omegas);
  std::vector<BoundaryCurve> curves = sweep_family(r.family, r.last_rank, omegas, r.config);
  curves.erase(curves.begin(), curves.begin() + static_cast<std::ptrdiff_t>(r.first_rank - 1));

  std::map<std::string, std::string> files;
  files[kCsvName] = io::boundary_csv(curves);
  for (const BoundaryCurve& c : curves) files[hull_name(c.rank)] = io::dump(io::hull_to_json(c));
  files[kRequestName] = io::dump(request_to_json(r));
  return files;
}

std::pair<std::size_t, std::size_t> parse_ranks(const std::string& text) {
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw DataError("--ranks: expected 'n' or 'a..b', got '" + text + "'");
    }
    return std::stoul(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {1, number(text)};
  return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

struct BoundaryArgs {
  std::string family;
  std::size_t j = 0;
  std::size_t k = 2;
  double beta = 2.0;
  double beta_im = 0.0;
  std::string ranks = "3";
  std::size_t omegas = 64;
  std::string out;
  std::string recheck;
  OptimizerFlags flags;
};

int cmd_boundary(const BoundaryArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.recheck.empty()) {
    const fs::path dir = a.recheck;
    BoundaryRequest r = request_from_json(parse_file(dir / kRequestName), (dir / kRequestName).string());
    a.flags.apply_threads(r.config);
    bool same = true;
    Json mismatched = Json::array();
    for (const auto& [name, text] : boundary_files(r)) {
      const bool equal = fs::exists(dir / name) && io::read_file(dir / name) == text;
      if (!equal) mismatched.push_back(name);
      same = same && equal;
    }
    out << io::dump({{"recheck", dir.string()}, {"identical", same}, {"mismatched", mismatched}});
    if (!same) err << "recheck: regenerated boundary differs in " << mismatched.dump() << "\n";
    return same ? kOk : kCheckFailure;
  }

  BoundaryRequest r;
  if (a.family == "fock_pair") {
    r.family = WitnessFamily::fock_pair(a.j, a.k);
  } else if (a.family == "cat_pair") {
    r.family = WitnessFamily::cat_pair({a.beta, a.beta_im});
  } else {
    throw DataError("--family must be fock_pair or cat_pair");
  }
  std::tie(r.first_rank, r.last_rank) = parse_ranks(a.ranks);
  r.omegas = a.omegas;
  r.config = a.flags.build();
  if (a.out.empty()) throw DataError("--out DIR is required");

  // Everything is computed before the first file is written.
  const std::map<std::string, std::string> files = boundary_files(r);
  fs::create_directories(a.out);
  for (const auto& [name, text] : files) io::write_file_atomic(fs::path(a.out) / name, text);

  std::size_t flagged = 0;
  for (const BoundaryCurve& c : io::curves_from_csv(files.at(kCsvName), kCsvName))
    flagged += static_cast<std::size_t>(std::count_if(c.points.begin(), c.points.end(),
                                                      [](const BoundaryPoint& p) { return p.flagged; }));
  if (flagged > 0) err << "boundary: " << flagged << " optimisation(s) failed; rows flagged\n";
  return kOk;
}

// ---- certify -----------------------------------------------------------------

struct CertifyArgs {
  std::vector<double> pair;
  std::string state;
  std::string curves;
  std::string witness;
  std::size_t rank = 0;
  double margin = 1e-4;
  std::string out;
  OptimizerFlags flags;
};

std::vector<TermState> family_terms(const WitnessFamily& f) {
  if (f.kind == WitnessFamily::Kind::FockPair) return {FockProjector{f.j}, FockProjector{f.k}};
  return {CatProjector{f.beta, Parity::Odd}, CatProjector{f.beta, Parity::Even}};
}

template <class State>
double projector_expectation(const TermState& term, const State& s) {
  return expectation(WitnessOperator({WitnessTerm{1.0, term}}), s).value;
}

Json certify_with_curves(const CertifyArgs& a, std::optional<io::StateValue> state) {
  const fs::path dir = a.curves;
  const std::vector<BoundaryCurve> curves =
      io::curves_from_csv(io::read_file(dir / kCsvName), (dir / kCsvName).string());
  const BoundaryRequest request = request_from_json(parse_file(dir / kRequestName), (dir / kRequestName).string());

  Point2 p;
  if (state) {
    const std::vector<TermState> terms = family_terms(request.family);
    std::visit([&](const auto& s) {
      p = {projector_expectation(terms[0], s), projector_expectation(terms[1], s)};
    }, *state);
  } else {
    p = {a.pair[0], a.pair[1]};
  }

  const std::size_t certified = certify_pair(p, curves, a.margin);
  Json report = {{"certified_rank", certified}, {"margin", a.margin}, {"point", Json::array({p.x, p.y})}};
  if (certified == 0) {
    report["trace_distance_lower_bound"] = 0.0;
    return report;
  }
  const BoundaryCurve& curve = curves[certified - curves.front().rank];
  const Separation sep = tangent_witness(curve, p, a.margin);
  const UnitRescaling unit = rescale_to_unit(request.family.at(sep.omega));
  report["separating_omega"] = sep.omega;
  report["witness_value"] = sep.witness_value;
  report["threshold"] = sep.threshold;
  report["trace_distance_lower_bound"] =
      trace_distance_lower_bound(unit.map(sep.witness_value), unit.map(sep.threshold + a.margin));
  return report;
}

Json certify_with_witness(const CertifyArgs& a, std::optional<io::StateValue> state) {
  if (a.rank < 1) throw DataError("--rank is required with --witness");
  const io::WitnessDocument doc = io::witness_from_json(parse_file(a.witness));
  if (!doc.single) throw DataError("certification supports single-mode witnesses only");
  const WitnessOperator& w = *doc.single;

  double value = 0.0;
  double tail = 0.0;
  if (state) {
    std::visit([&](const auto& s) {
      const Expectation e = expectation(w, s);
      value = e.value;
      tail = e.tail_bound;
    }, *state);
  } else {
    const std::string type = doc.source.value("type", "");
    if (type != "fock_pair" && type != "cat_pair") {
      throw DataError("--pair needs a fock_pair or cat_pair witness");
    }
    value = w.identity_weight() + w.terms()[0].weight * a.pair[0] + w.terms()[1].weight * a.pair[1];
  }

  const std::vector<ThresholdResult> thresholds = compute_thresholds(w, a.rank, a.flags.build());
  std::size_t certified = 0;
  for (const ThresholdResult& t : thresholds)
    if (value - tail > t.value + a.margin) certified = std::max(certified, t.rank);

  const double threshold = thresholds[certified == 0 ? 0 : certified - 1].value;
  const UnitRescaling unit = rescale_to_unit(w);
  Json report = {{"certified_rank", certified},
                 {"margin", a.margin},
                 {"witness_value", value},
                 {"witness_tail_bound", tail},
                 {"threshold", threshold}};
  report["trace_distance_lower_bound"] =
      certified == 0 ? 0.0 : trace_distance_lower_bound(unit.map(value - tail), unit.map(threshold + a.margin));
  return report;
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  if (!(a.margin >= 0.0)) throw DataError("--margin must be non-negative");
  if (a.pair.empty() == a.state.empty()) throw DataError("give exactly one of --pair or --state");
  if (a.curves.empty() == a.witness.empty()) throw DataError("give exactly one of --curves or --witness");
  std::optional<io::StateValue> state;
  if (!a.state.empty()) state = io::state_from_json(parse_file(a.state));
  const Json report = a.curves.empty() ? certify_with_witness(a, std::move(state))
                                       : certify_with_curves(a, std::move(state));
  emit(io::dump(report), a.out, out);
  return kOk;
}

// ---- validate / gaussian-elements ----------------------------------------------

int cmd_validate(const std::string& suite, std::uint64_t seed, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  const std::vector<CheckReport> reports = run_suite(suite, seed);
  emit(io::dump(report_to_json(reports, seed)), out_path, out);
  bool passed = true;
  for (const CheckReport& r : reports) {
    if (r.passed()) continue;
    passed = false;
    err << "validate: " << r.name << " max deviation " << io::format_double(r.max_deviation)
        << " exceeds " << io::format_double(r.tolerance) << "\n"
        << "worst case: " << r.worst_case.dump() << "\n";
  }
  return passed ? kOk : kCheckFailure;
}

struct ElementArgs {
  double theta = 0.0;
  double vartheta = 0.0;
  double r = 0.0;
  std::vector<double> alpha = {0.0, 0.0};
  std::size_t rows = 5;
  std::size_t cols = 5;
  std::string out;
};

int cmd_elements(const ElementArgs& a, std::ostream& out) {
  GaussianParams p;
  p.theta = a.theta;
  p.vartheta = a.vartheta;
  p.r = a.r;
  p.alpha = {a.alpha[0], a.alpha[1]};
  if (!p.valid()) throw DomainError("invalid Gaussian parameters (r must be >= 0, all finite)");
  if (a.rows < 1 || a.cols < 1) throw DomainError("--rows and --cols must be positive");
  const ComplexMatrix block = gaussian_block(p, a.rows - 1, a.cols - 1);
  Json matrix = Json::array();
  for (std::size_t k = 0; k < a.rows; ++k) {
    Json row = Json::array();
    for (std::size_t m = 0; m < a.cols; ++m) row.push_back(io::complex_json(block(k, m)));
    matrix.push_back(row);
  }
  emit(io::dump({{"params", io::params_to_json(p)}, {"rows", a.rows}, {"cols", a.cols}, {"matrix", matrix}}),
       a.out, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stellar-rank witnesses: thresholds, boundary curves and certification", "stellar"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ThresholdArgs th;
  CLI::App* threshold = app.add_subcommand("threshold", "Compute the threshold W_n of a witness");
  threshold->add_option("--witness", th.witness, "Witness JSON file");
  threshold->add_option("--rank", th.rank, "Stellar rank n (>= 1)")->check(CLI::PositiveNumber);
  threshold->add_option("--out", th.out, "Result file (default: stdout)");
  threshold->add_option("--recheck", th.recheck, "Regenerate a result file and compare bytes");
  th.flags.attach(threshold);

  BoundaryArgs bd;
  CLI::App* boundary = app.add_subcommand("boundary", "Sweep a witness family into boundary curves");
  boundary->add_option("--family", bd.family, "fock_pair or cat_pair");
  boundary->add_option("--j", bd.j, "First Fock index (fock_pair)");
  boundary->add_option("--k", bd.k, "Second Fock index (fock_pair)");
  boundary->add_option("--beta", bd.beta, "Real part of the cat amplitude (cat_pair)");
  boundary->add_option("--beta-im", bd.beta_im, "Imaginary part of the cat amplitude (cat_pair)");
  boundary->add_option("--ranks", bd.ranks, "n_max or a range 'a..b'");
  boundary->add_option("--omegas", bd.omegas, "Number of uniformly spaced angles");
  boundary->add_option("--out", bd.out, "Output directory");
  boundary->add_option("--recheck", bd.recheck, "Regenerate a boundary directory and compare bytes");
  bd.flags.attach(boundary);

  CertifyArgs ce;
  CLI::App* certify = app.add_subcommand("certify", "Certify the stellar rank of a state or probability pair");
  certify->add_option("--pair", ce.pair, "Probability pair p_first p_second")->expected(2);
  certify->add_option("--state", ce.state, "State JSON file");
  certify->add_option("--curves", ce.curves, "Directory written by 'boundary'");
  certify->add_option("--witness", ce.witness, "Witness JSON file");
  certify->add_option("--rank", ce.rank, "Highest rank to test with --witness");
  certify->add_option("--margin", ce.margin, "Safety margin added to every threshold");
  certify->add_option("--out", ce.out, "Report file (default: stdout)");
  ce.flags.attach(certify);

  std::string suite = "all";
  std::uint64_t validate_seed = 1;
  std::string validate_out;
  CLI::App* validate = app.add_subcommand("validate", "Run the oracle-equivalence suites");
  validate->add_option("--suite", suite, "elements, states, hull or all")
      ->check(CLI::IsMember({"elements", "states", "hull", "all"}));
  validate->add_option("--seed", validate_seed, "Seed of the random cases");
  validate->add_option("--out", validate_out, "Report file (default: stdout)");

  ElementArgs el;
  CLI::App* elements = app.add_subcommand("gaussian-elements", "Dump a block of Gaussian matrix elements");
  elements->add_option("--theta", el.theta, "Output phase");
  elements->add_option("--vartheta", el.vartheta, "Input phase");
  elements->add_option("--r", el.r, "Squeezing (>= 0)");
  elements->add_option("--alpha", el.alpha, "Displacement re im")->expected(2);
  elements->add_option("--rows", el.rows, "Number of rows");
  elements->add_option("--cols", el.cols, "Number of columns");
  elements->add_option("--out", el.out, "Output file (default: stdout)");

  std::vector<std::string> argv_store = {"stellar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (threshold->parsed()) return cmd_threshold(th, out, err);
    if (boundary->parsed()) return cmd_boundary(bd, out, err);
    if (certify->parsed()) return cmd_certify(ce, out);
    if (validate->parsed()) return cmd_validate(suite, validate_seed, validate_out, out, err);
    return cmd_elements(el, out);
  } catch (const OptimizerError& e) {
    err << "optimizer failure: " << e.what() << "\n";
    return kOptimizerFailure;
  } catch (const TailBoundError& e) {
    err << "truncation failure: " << e.what() << "\n";
    return kOptimizerFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
}

}  // namespace stellar::cli
