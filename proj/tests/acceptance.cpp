// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "mee/scenario.hpp"
#include "oracle.hpp"

using namespace mee;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    out.ok = false;
    out.detail += " [over time budget " + io::format_double(budget_s) + " s]";
  }
  if (!out.ok) ++failures;
  std::printf("%s  %2d  %-34s %7.2fs  %s\n", out.ok ? "PASS" : "FAIL", id, title, secs, out.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const XStateParams kPsiPlus{1, 1, -1, 0};
const XStateParams kPhiPlus{1, -1, 1, 0};

double max_x_diff(const XStateParams& p, const XStateParams& q) {
  return std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c), std::abs(p.d - q.d)});
}

double analytic_error(double dt) {
  const auto traj = integrate(independent_thermal(1.0, 0.0), kPsiPlus, 5.0, dt, {.stride = 1});
  double err = 0.0;
  for (const auto& s : traj.samples) err = std::max(err, max_x_diff(s.x, analytic_independent(s.t, 1.0, 0.0)));
  return err;
}

std::vector<double> series(const Trajectory& t, bool mee) {
  std::vector<double> out;
  for (const auto& s : t.samples) out.push_back(mee ? s.mee.value_or(NAN) : s.concurrence);
  return out;
}

bool non_increasing(const Trajectory& traj, double t0, double t1, double tol) {
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (s.t < t0 || traj.samples[i - 1].t > t1) continue;
    if (s.concurrence > traj.samples[i - 1].concurrence + tol) return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "concurrence correctness", 1.0, [] {
    double bell = 0.0;
    for (const auto& k : {ket::psi_plus(), ket::psi_minus(), ket::phi_plus(), ket::phi_minus()})
      bell = std::max(bell, std::abs(concurrence(DensityMatrix::pure(k)) - 1.0));
    const double mixed = concurrence(DensityMatrix());
    const Mat4c w = 0.5 * DensityMatrix::pure(ket::psi_plus()).matrix() + 0.5 * Mat4c::Identity() / 4.0;
    const double c = concurrence(DensityMatrix::unchecked(w));
    const double ref = oracle::concurrence(w);
    const bool ok = bell <= 1e-10 && mixed == 0.0 && std::abs(c - 0.25) <= 1e-9 && std::abs(ref - 0.25) <= 1e-9;
    return Outcome{ok, "bell err " + num(bell) + ", mixed " + num(mixed) + ", werner " + num(c) + " (oracle " +
                           num(ref) + ")"};
  });

  criterion(2, "filtered concurrence law", 10.0, [] {
    sample::Rng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto rho = sample::density(rng);
      const auto f = sample::filter(rng);
      worst = std::max(worst, std::abs(filtered_concurrence(rho, f) - concurrence(apply_filter(rho, f))));
    }
    return Outcome{worst <= 1e-9, "max residual " + num(worst) + " over 1000 pairs"};
  });

  criterion(3, "closed-form optimality", 60.0, [] {
    sample::Rng rng(3);
    double boost = 0.0;
    double beat = -INFINITY;
    for (int i = 0; i < 100; ++i) {
      const auto x = sample::x_state(rng, 1e-2);
      const auto res = minimize_F_oracle(to_correlation(x), rng());
      boost = std::max(boost, std::abs(res.pair.m(3) - optimal_boost(x).alpha));
      const double mee = max_extractable_entanglement(x);
      const auto rho = to_density(x);
      for (int k = 0; k < 1000; ++k) beat = std::max(beat, filtered_concurrence(rho, sample::filter(rng)) - mee);
    }
    return Outcome{boost <= 1e-6 && beat <= 1e-8,
                   "alpha vs F-oracle " + num(boost) + ", best random filter - MEE " + num(beat)};
  });

  criterion(4, "analytic trajectory + order", 10.0, [] {
    const double err = analytic_error(1e-3);
    const double ratio = analytic_error(0.1) / analytic_error(0.05);
    const bool ok = err <= 1e-8 && ratio >= 8.0 && ratio <= 32.0;
    return Outcome{ok, "max error " + num(err) + " at dt=1e-3, halving ratio " + num(ratio)};
  });

  criterion(5, "reduced/full equivalence", 30.0, [] {
    double worst = 0.0;
    for (const auto& model : {independent_thermal(1.0, 0.001), common_thermal(1.0, 0.001),
                              common_squeezed(1.0, 0.001, std::numbers::pi)})
      for (const auto& x0 : {kPsiPlus, kPhiPlus}) {
        const auto a = integrate(model, x0, 5.0, 1e-3, {.stride = 25});
        const auto b = integrate_full(model, to_density(x0), 5.0, 1e-3, {.stride = 25});
        for (std::size_t k = 0; k < a.samples.size(); ++k)
          worst = std::max(worst, max_x_diff(a.samples[k].x, b.samples[k].x));
      }
    return Outcome{worst <= 1e-8, "max deviation " + num(worst)};
  });

  criterion(6, "fixed points", 0.0, [] {
    auto gen = [](const BathModel& m, const Vec4c& v) {
      return lindblad_rhs(m, Mat4c(v * v.adjoint())).cwiseAbs().maxCoeff();
    };
    const auto dfs = dfs_states(0.001, std::numbers::pi);
    double worst = gen(independent_thermal(1.0, 0.0), ket::mm());
    worst = std::max(worst, gen(common_thermal(1.0, 0.001), dfs.phi2));
    worst = std::max(worst, gen(common_squeezed(1.0, 0.001, std::numbers::pi), dfs.phi2));
    worst = std::max(worst, gen(common_squeezed(1.0, 0.001, std::numbers::pi), dfs.phi1));
    worst = std::max(worst, gen(common_squeezed(1.0, 0.001, 0.0), dfs_states(0.001, 0.0).phi1));
    double dstar = 0.0;
    for (double n : {0.0, 0.001, 0.5, 3.0}) {
      const double d = -1.0 / (1.0 + 2.0 * n);
      dstar = std::max(dstar, std::abs(x_rhs(independent_thermal(1.0, n), {0, 0, d * d, d}).dd));
      dstar = std::max(dstar, std::abs(analytic_independent(80.0, 1.0, n).d - d));
    }
    return Outcome{worst <= 1e-12 && dstar <= 1e-12, "generator norm " + num(worst) + ", d* residual " + num(dstar)};
  });

  criterion(7, "sudden death, independent baths", 0.0, [] {
    std::string detail;
    bool ok = true;
    for (const auto& x0 : {kPsiPlus, kPhiPlus}) {
      const auto traj = integrate(independent_thermal(1.0, 0.001), x0, 12.0, 1e-3);
      const auto ev = detect_events(traj);
      const auto t = traj.times();
      const auto mee_death = vanishing_time(t, series(traj, true), event_thresholds::kDeath);
      bool dominated = true;
      for (const auto& s : traj.samples) dominated = dominated && *s.mee >= s.concurrence - 1e-9;
      const bool here = ev.sudden_death_time && *ev.sudden_death_time > 0.0 && std::isfinite(*ev.sudden_death_time) &&
                        mee_death && std::abs(*mee_death - *ev.sudden_death_time) <= 2.0 * (t[1] - t[0]) && dominated;
      ok = ok && here;
      detail += "death " + (ev.sudden_death_time ? num(*ev.sudden_death_time) : std::string("none")) + " / MEE " +
                (mee_death ? num(*mee_death) : std::string("none")) + "; ";
    }
    return Outcome{ok, detail};
  });

  criterion(8, "MEE revival, common thermal", 0.0, [] {
    const auto traj = integrate(common_thermal(1.0, 0.001), kPhiPlus, 10.0, 1e-3);
    const auto ev = detect_events(traj);
    for (const auto& w : ev.revival_windows)
      if (non_increasing(traj, w.t_start, w.t_end, 1e-9))
        return Outcome{true, "window [" + num(w.t_start) + ", " + num(w.t_end) + "] rise " + num(w.rise) +
                                 " with concurrence non-increasing"};
    return Outcome{false, std::to_string(ev.revival_windows.size()) + " windows, none with falling concurrence"};
  });

  criterion(9, "revival + purification, squeezed", 0.0, [] {
    // Real squeezing with psi = pi; see README for the phase convention.
    const auto model = common_squeezed(1.0, 0.001, std::numbers::pi);
    const auto traj = integrate(model, kPhiPlus, 30.0, 1e-3);
    const auto t = traj.times();
    const auto c_rev = revival_windows(t, series(traj, false), event_thresholds::kRevival);
    const auto m_rev = detect_events(traj).revival_windows;
    const auto& last = traj.samples.back();
    const bool ok = !c_rev.empty() && !m_rev.empty() && last.entropy <= 1e-3 && last.fidelity_phi1.value_or(0) >= 0.999 &&
                    last.mee.value_or(0) >= 0.999;
    return Outcome{ok, std::to_string(c_rev.size()) + " C / " + std::to_string(m_rev.size()) +
                           " MEE revivals; at gt=30 S=" + num(last.entropy) +
                           " F=" + num(last.fidelity_phi1.value_or(NAN)) + " MEE=" + num(last.mee.value_or(NAN))};
  });

  criterion(10, "finite-boost recovery", 0.0, [] {
    ScenarioConfig cfg;
    cfg.t_end = 3.0;
    cfg.alpha = 9.0;
    const auto res = run_extraction(cfg);
    const double at3 = res.extracted.back();
    const auto x3 = analytic_independent(3.0, 1.0, 0.0);
    const double cap = partial_extraction(x3, boost_limits::kCap);
    const double cap2 = partial_extraction(x3, 2.0 * boost_limits::kCap);
    const double conv = std::abs(cap2 - cap);
    const bool ok = at3 >= 0.9 && conv <= boost_limits::kConvergence && std::abs(1.0 - cap2) <= 1e-6;
    return Outcome{ok, "alpha=9 at gt=3: " + num(at3) + "; cap " + num(cap) + ", doubled-cap change " + num(conv)};
  });

  criterion(11, "deterministic CSV", 0.0, [] {
    const auto cfg = parse_config_text(
        R"({"bath": "squeezed", "n": 0.001, "psi": 3.141592653589793, "initial": {"bell": [1, -1, 1]}, "t_end": 10, "seed": 5})");
    const auto base = std::filesystem::temp_directory_path() / "mee_acceptance";
    std::filesystem::remove_all(base);
    run_scenario(cfg, base / "a");
    run_scenario(cfg, base / "b");
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const auto a = slurp(base / "a" / "trace.csv");
    const auto b = slurp(base / "b" / "trace.csv");
    return Outcome{!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical=" + (a == b ? "yes" : "no")};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
