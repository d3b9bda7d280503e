#pragma once

// Scenario configuration, batch runners and the oracle validation suite.
//
// A scenario is a single JSON document:
//
//   {
//     "bath": "independent" | "common" | "squeezed",
//     "gamma": 1.0, "n": 0.001, "psi": 0.0,
//     "initial": {"bell": [C1, C2, C3]}  or  {"x": [a, b, c, d]},
//     "t_end": 5.0, "dt": 0.001,          // units of 1/gamma
//     "outputs": ["csv", "jsonl", "svg"],
//     "alpha": 9.0,                        // optional, extraction runs
//     "seed": 0
//   }

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mee/baths.hpp"
#include "mee/dynamics.hpp"
#include "mee/error.hpp"
#include "mee/filtering.hpp"
#include "mee/io.hpp"
#include "mee/random.hpp"

namespace mee {

enum class OutputKind { Csv, Jsonl, Svg };

struct InitialState {
  enum class Kind { Bell, X };
  Kind kind = Kind::Bell;
  std::vector<double> values{1.0, 1.0, -1.0};

  XStateParams to_x() const {
    if (kind == Kind::Bell) return {values.at(0), values.at(1), values.at(2), 0.0};
    return {values.at(0), values.at(1), values.at(2), values.at(3)};
  }

  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct ScenarioConfig {
  BathKind bath = BathKind::IndependentThermal;
  double gamma = 1.0;
  double n = 0.0;
  double psi = 0.0;
  InitialState initial;
  double t_end = 5.0;
  double dt = 1e-3;
  std::vector<OutputKind> outputs{OutputKind::Csv};
  std::optional<double> alpha;
  std::uint64_t seed = 0;

  BathModel model() const { return {bath, gamma, n, psi}; }

  bool wants(OutputKind k) const { return std::find(outputs.begin(), outputs.end(), k) != outputs.end(); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& field, const std::string& why) {
  throw Error(Errc::InvalidConfig, field + ": " + why);
}

inline const char* bath_name(BathKind k) {
  switch (k) {
    case BathKind::IndependentThermal: return "independent";
    case BathKind::CommonThermal: return "common";
    case BathKind::CommonSqueezed: return "squeezed";
  }
  return "independent";
}

inline const char* output_name(OutputKind k) {
  switch (k) {
    case OutputKind::Csv: return "csv";
    case OutputKind::Jsonl: return "jsonl";
    case OutputKind::Svg: return "svg";
  }
  return "csv";
}

inline double number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "must be finite");
  return v;
}

}  // namespace detail

inline BathKind parse_bath(const std::string& s) {
  if (s == "independent") return BathKind::IndependentThermal;
  if (s == "common") return BathKind::CommonThermal;
  if (s == "squeezed") return BathKind::CommonSqueezed;
  detail::invalid("bath", "expected independent, common or squeezed, got '" + s + "'");
}

/// Field-level checks; messages start with the offending field name.
inline void validate(const ScenarioConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) detail::invalid("gamma", "must be > 0");
  if (!(cfg.n >= 0.0) || !std::isfinite(cfg.n)) detail::invalid("n", "must be >= 0");
  if (!std::isfinite(cfg.psi)) detail::invalid("psi", "must be finite");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) detail::invalid("t_end", "must be >= 0");
  if (cfg.t_end > 0.0 && (!(cfg.dt > 0.0) || cfg.dt > cfg.t_end)) detail::invalid("dt", "need 0 < dt <= t_end");
  if (cfg.t_end > 0.0 && cfg.dt * (1.0 + 2.0 * cfg.n) > 0.1) detail::invalid("dt", "dt * (1 + 2n) must be <= 0.1");
  const std::size_t want = cfg.initial.kind == InitialState::Kind::Bell ? 3 : 4;
  if (cfg.initial.values.size() != want)
    detail::invalid("initial", "expected " + std::to_string(want) + " coordinates");
  for (double v : cfg.initial.values)
    if (!std::isfinite(v)) detail::invalid("initial", "coordinates must be finite");
  if (!is_physical(cfg.initial.to_x())) detail::invalid("initial", "not a physical state");
  if (cfg.bath == BathKind::CommonSqueezed && cfg.n > 0.0 && std::abs(std::sin(cfg.psi)) > 1e-12)
    detail::invalid("psi", "only real squeezing (psi = 0 or pi) keeps the X-form family closed");
  if (cfg.alpha && !(std::abs(*cfg.alpha) <= boost_limits::kMax))
    detail::invalid("alpha", "|alpha| must not exceed " + io::format_double(boost_limits::kMax));
}

inline ScenarioConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) detail::invalid("config", "expected a JSON object");
  static const std::vector<std::string> known{"bath", "gamma", "n", "psi", "initial", "t_end", "dt",
                                              "outputs", "alpha", "seed"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      detail::invalid(item.key(), "unknown field");

  ScenarioConfig cfg;
  if (j.contains("bath")) {
    if (!j["bath"].is_string()) detail::invalid("bath", "expected a string");
    cfg.bath = parse_bath(j["bath"].get<std::string>());
  }
  if (j.contains("gamma")) cfg.gamma = detail::number(j["gamma"], "gamma");
  if (j.contains("n")) cfg.n = detail::number(j["n"], "n");
  if (j.contains("psi")) cfg.psi = detail::number(j["psi"], "psi");
  if (j.contains("t_end")) cfg.t_end = detail::number(j["t_end"], "t_end");
  if (j.contains("dt")) cfg.dt = detail::number(j["dt"], "dt");
  if (j.contains("alpha")) cfg.alpha = detail::number(j["alpha"], "alpha");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      detail::invalid("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("initial")) {
    const auto& init = j["initial"];
    if (!init.is_object() || init.size() != 1) detail::invalid("initial", "expected {\"bell\": [...]} or {\"x\": [...]}");
    const auto& [key, arr] = *init.items().begin();
    if (key == "bell")
      cfg.initial.kind = InitialState::Kind::Bell;
    else if (key == "x")
      cfg.initial.kind = InitialState::Kind::X;
    else
      detail::invalid("initial", "unknown initial-state kind '" + key + "'");
    if (!arr.is_array()) detail::invalid("initial", "expected an array of coordinates");
    cfg.initial.values.clear();
    for (const auto& v : arr) cfg.initial.values.push_back(detail::number(v, "initial"));
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) detail::invalid("outputs", "expected an array");
    cfg.outputs.clear();
    for (const auto& o : j["outputs"]) {
      if (!o.is_string()) detail::invalid("outputs", "expected strings");
      const auto s = o.get<std::string>();
      OutputKind k;
      if (s == "csv")
        k = OutputKind::Csv;
      else if (s == "jsonl")
        k = OutputKind::Jsonl;
      else if (s == "svg")
        k = OutputKind::Svg;
      else
        detail::invalid("outputs", "unknown output '" + s + "'");
      if (!cfg.wants(k)) cfg.outputs.push_back(k);
    }
  }
  validate(cfg);
  return cfg;
}

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::invalid("config", std::string("malformed JSON: ") + e.what());
  }
}

inline ScenarioConfig parse_config_text(const std::string& text) { return parse_config(parse_json_text(text)); }

/// Raw JSON document, for callers that overlay fields before parsing.
inline nlohmann::json read_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

inline ScenarioConfig load_config(const std::filesystem::path& path) { return parse_config(read_config_json(path)); }

inline nlohmann::json to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["bath"] = detail::bath_name(cfg.bath);
  j["gamma"] = cfg.gamma;
  j["n"] = cfg.n;
  j["psi"] = cfg.psi;
  j["initial"] = {{cfg.initial.kind == InitialState::Kind::Bell ? "bell" : "x", cfg.initial.values}};
  j["t_end"] = cfg.t_end;
  j["dt"] = cfg.dt;
  j["outputs"] = nlohmann::json::array();
  for (auto k : cfg.outputs) j["outputs"].push_back(detail::output_name(k));
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  j["seed"] = cfg.seed;
  return j;
}

/// Sorted-key, two-space-indented serialisation.
inline std::string canonical(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

struct ScenarioResult {
  Trajectory trajectory;
  EventReport events;
  std::vector<double> extracted;  ///< extraction runs only
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::IoFailure, "cannot write " + p.string());
  return os;
}

inline void finish(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw Error(Errc::IoFailure, "write failed for " + p.string());
}

inline std::vector<double> scaled_times(const Trajectory& traj, double gamma) {
  auto t = traj.times();
  for (double& v : t) v *= gamma;
  return t;
}

inline Trajectory simulate(const ScenarioConfig& cfg) {
  validate(cfg);
  return integrate(cfg.model(), cfg.initial.to_x(), cfg.t_end / cfg.gamma, cfg.dt / cfg.gamma);
}

}  // namespace detail

/// Integrates the scenario and writes trace.csv / trace.jsonl / trace.svg into
/// `out_dir` as requested. An empty `out_dir` skips file output.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir = {}) {
  ScenarioResult res;
  res.trajectory = detail::simulate(cfg);
  res.events = detect_events(res.trajectory);
  if (out_dir.empty()) return res;

  std::filesystem::create_directories(out_dir);
  if (cfg.wants(OutputKind::Csv)) {
    const auto p = out_dir / "trace.csv";
    auto os = detail::open_out(p);
    io::write_csv(os, res.trajectory, cfg.gamma);
    detail::finish(os, p);
    res.files.push_back(p);
  }
  if (cfg.wants(OutputKind::Jsonl)) {
    const auto p = out_dir / "trace.jsonl";
    auto os = detail::open_out(p);
    io::write_jsonl(os, res.trajectory, cfg.gamma);
    detail::finish(os, p);
    res.files.push_back(p);
  }
  if (cfg.wants(OutputKind::Svg)) {
    const auto p = out_dir / "trace.svg";
    auto os = detail::open_out(p);
    std::vector<io::Series> series{{"concurrence", "#1f77b4", {}}, {"MEE", "#d62728", {}}, {"entropy", "#2ca02c", {}}};
    for (const auto& s : res.trajectory.samples) {
      series[0].y.push_back(s.concurrence);
      series[1].y.push_back(s.mee.value_or(NAN));
      series[2].y.push_back(s.entropy);
    }
    const std::string title = std::string(detail::bath_name(cfg.bath)) + " bath, n = " + io::format_double(cfg.n);
    io::write_svg(os, title, "gamma t", detail::scaled_times(res.trajectory, cfg.gamma), series);
    detail::finish(os, p);
    res.files.push_back(p);
  }
  return res;
}

inline constexpr const char* kExtractionHeader = "t,concurrence,extracted";

/// Concurrence and fixed-boost extracted concurrence along the trajectory;
/// writes extraction.csv / extraction.jsonl / extraction.svg.
inline ScenarioResult run_extraction(const ScenarioConfig& cfg, const std::filesystem::path& out_dir = {}) {
  if (!cfg.alpha) detail::invalid("alpha", "required for extraction runs");
  ScenarioResult res;
  res.trajectory = detail::simulate(cfg);
  res.events = detect_events(res.trajectory);
  for (const auto& s : res.trajectory.samples) res.extracted.push_back(partial_extraction(s.x, *cfg.alpha));
  if (out_dir.empty()) return res;

  std::filesystem::create_directories(out_dir);
  const auto t = detail::scaled_times(res.trajectory, cfg.gamma);
  if (cfg.wants(OutputKind::Csv)) {
    const auto p = out_dir / "extraction.csv";
    auto os = detail::open_out(p);
    os << kExtractionHeader << '\n';
    for (std::size_t i = 0; i < t.size(); ++i)
      os << io::format_double(t[i]) << ',' << io::format_double(res.trajectory.samples[i].concurrence) << ','
         << io::format_double(res.extracted[i]) << '\n';
    detail::finish(os, p);
    res.files.push_back(p);
  }
  if (cfg.wants(OutputKind::Jsonl)) {
    const auto p = out_dir / "extraction.jsonl";
    auto os = detail::open_out(p);
    for (std::size_t i = 0; i < t.size(); ++i)
      os << "{\"t\":" << io::format_double(t[i])
         << ",\"concurrence\":" << io::format_double(res.trajectory.samples[i].concurrence)
         << ",\"extracted\":" << io::format_double(res.extracted[i]) << "}\n";
    detail::finish(os, p);
    res.files.push_back(p);
  }
  if (cfg.wants(OutputKind::Svg)) {
    const auto p = out_dir / "extraction.svg";
    auto os = detail::open_out(p);
    std::vector<io::Series> series{{"concurrence", "#1f77b4", {}}, {"extracted", "#d62728", res.extracted}};
    for (const auto& s : res.trajectory.samples) series[0].y.push_back(s.concurrence);
    io::write_svg(os, "extraction, alpha = " + io::format_double(*cfg.alpha), "gamma t", t, series);
    detail::finish(os, p);
    res.files.push_back(p);
  }
  return res;
}

inline std::string event_summary(const EventReport& ev) {
  std::ostringstream os;
  os << "sudden_death_time: "
     << (ev.sudden_death_time ? io::format_double(*ev.sudden_death_time) : std::string("none")) << '\n';
  os << "mee_revival_windows: " << ev.revival_windows.size() << '\n';
  for (const auto& w : ev.revival_windows)
    os << "  [" << io::format_double(w.t_start) << ", " << io::format_double(w.t_end)
       << "] rise=" << io::format_double(w.rise) << '\n';
  return os.str();
}

// --- oracle suite ------------------------------------------------------------

struct OracleCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
      j["checks"].push_back(
          {{"name", c.name}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    return j;
  }
};

struct OracleOptions {
  std::uint64_t seed = 0;
  int count = 100;
  /// Multiplies every tolerance; a negative value forces failure (harness self-check).
  double tolerance_scale = 1.0;
  /// Sample Bell-diagonal states only (d = 0).
  bool bell_diagonal = false;
};

/// Batch validation: closed-form boost vs F minimisation, the filtered
/// concurrence law, and reduced vs full integration.
inline OracleReport run_oracle_suite(const OracleOptions& opt) {
  sample::Rng rng(opt.seed);
  OracleReport report;
  const int count = std::max(opt.count, 1);
  auto check = [&](std::string name, double residual, double tol) {
    const double t = tol * opt.tolerance_scale;
    report.checks.push_back({std::move(name), residual, t, residual <= t});
  };

  double boost = 0.0;
  for (int i = 0; i < count; ++i) {
    XStateParams x;
    if (opt.bell_diagonal) {
      const auto s = sample::bell_diagonal(rng);
      x = {s.c1, s.c2, s.c3, 0.0};
      // The F oracle needs a full-rank state.
      if (!is_physical(x) || (1.0 + x.c - std::abs(x.a - x.b)) < 0.04 || (1.0 - x.c - std::abs(x.a + x.b)) < 0.04) {
        --i;
        continue;
      }
    } else {
      x = sample::x_state(rng, 0.01);
    }
    const auto ob = optimal_boost(x);
    const auto res = minimize_F_oracle(to_correlation(x), rng());
    boost = std::max(boost, std::abs(res.pair.m(3) - ob.alpha));
  }
  check("boost_vs_F_oracle", boost, 1e-6);

  double law = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto rho = sample::density(rng);
    const auto f = sample::filter(rng);
    law = std::max(law, std::abs(filtered_concurrence(rho, f) - concurrence(apply_filter(rho, f))));
  }
  check("filtered_concurrence_law", law, 1e-9);

  double reduced = 0.0;
  const int runs = std::min(count, 3);
  for (int i = 0; i < runs; ++i) {
    const auto x0 = sample::x_state(rng);
    for (const auto& model : {independent_thermal(1.0, 0.05), common_thermal(1.0, 0.05), common_squeezed(1.0, 0.05, 0.0)}) {
      const auto a = integrate(model, x0, 1.0, 1e-2, {.stride = 10});
      const auto b = integrate_full(model, to_density(x0), 1.0, 1e-2, {.stride = 10});
      for (std::size_t k = 0; k < a.samples.size(); ++k) {
        const auto& p = a.samples[k].x;
        const auto& q = b.samples[k].x;
        reduced = std::max({reduced, std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c), std::abs(p.d - q.d)});
      }
    }
  }
  check("reduced_vs_full_integration", reduced, 1e-8);
  return report;
}

}  // namespace mee
