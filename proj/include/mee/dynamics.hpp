#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mee/baths.hpp"
#include "mee/entanglement.hpp"
#include "mee/error.hpp"
#include "mee/filtering.hpp"
#include "mee/qstate.hpp"

namespace mee {

struct IntegrateOptions {
  /// Record every `stride`-th step; 0 picks a stride giving about `target_samples`.
  std::size_t stride = 0;
  std::size_t target_samples = 2000;
  /// Largest allowed dt * gamma (1 + 2n).
  double stability_limit = 0.1;
  /// Largest tolerated physicality / trace drift.
  double drift_limit = 1e-8;
};

/// Observables at one instant.
struct Sample {
  double t = 0.0;
  bool x_form = true;  ///< false for non-X full-matrix states; x, mee, bell are then unset
  XStateParams x;
  double concurrence = 0.0;
  std::optional<double> mee;
  bool mee_singular = false;
  bool mee_converged = true;
  std::optional<BellDiagonalState> bell;
  std::optional<double> alpha;  ///< unset when singular (infinite boost)
  double entropy = 0.0;
  double purity = 1.0;
  std::optional<double> fidelity_phi1;
};

struct Trajectory {
  BathModel model;
  std::vector<Sample> samples;
  std::vector<Mat4c> states;  ///< full density matrices, integrate_full only

  std::vector<double> times() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.t);
    return out;
  }
};

struct RevivalWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double rise = 0.0;
};

struct EventReport {
  std::optional<double> sudden_death_time;
  std::vector<RevivalWindow> revival_windows;
};

namespace event_thresholds {
inline constexpr double kDeath = 1e-6;
inline constexpr double kRevival = 1e-4;
}  // namespace event_thresholds

namespace detail {

struct StepPlan {
  std::size_t steps = 0;
  double h = 0.0;
  std::size_t stride = 1;
};

inline StepPlan plan_steps(const BathModel& model, double t_end, double dt, const IntegrateOptions& opt) {
  validate(model);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(Errc::NegativeTime, "integrate: t_end must be >= 0");
  StepPlan plan;
  if (t_end == 0.0) return plan;
  if (!(dt > 0.0) || dt > t_end) throw Error(Errc::StepTooLarge, "integrate: need 0 < dt <= t_end");
  if (dt * model.rate_scale() > opt.stability_limit)
    throw Error(Errc::StepTooLarge, "integrate: dt * gamma (1 + 2n) exceeds " + std::to_string(opt.stability_limit));
  plan.steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  plan.steps = std::max<std::size_t>(plan.steps, 1);
  plan.h = t_end / static_cast<double>(plan.steps);
  plan.stride = opt.stride > 0 ? opt.stride
                               : std::max<std::size_t>(1, plan.steps / std::max<std::size_t>(opt.target_samples, 1));
  return plan;
}

inline void fill_x_observables(Sample& s, const BathModel& model) {
  s.concurrence = concurrence_x_state(s.x);
  const auto nf = optimal_normal_form(s.x);
  s.mee = detail::bell_concurrence(nf.bell);
  s.mee_singular = nf.boost.singular;
  s.mee_converged = nf.converged;
  s.bell = nf.bell;
  if (!nf.boost.singular) s.alpha = nf.boost.alpha;
  (void)model;
}

inline void fill_common(Sample& s, const BathModel& model, const DensityMatrix& rho) {
  s.entropy = von_neumann_entropy(rho);
  s.purity = purity(rho);
  if (model.kind == BathKind::CommonSqueezed) s.fidelity_phi1 = fidelity_pure(rho, dfs_states(model.n, model.psi).phi1);
}

inline XStateParams axpy(const XStateParams& x, double h, const XRates& k) {
  return {x.a + h * k.da, x.b + h * k.db, x.c + h * k.dc, x.d + h * k.dd};
}

}  // namespace detail

/// Observables of an X-form state at time t.
inline Sample observe(const BathModel& model, double t, const XStateParams& x) {
  Sample s;
  s.t = t;
  s.x = x;
  detail::fill_x_observables(s, model);
  detail::fill_common(s, model, to_density(x));
  return s;
}

/// Classic fixed-step RK4 on the reduced (a, b, c, d) equations.
inline Trajectory integrate(const BathModel& model, const XStateParams& x0, double t_end, double dt,
                            const IntegrateOptions& opt = {}) {
  require_physical(x0, "integrate");
  const auto plan = detail::plan_steps(model, t_end, dt, opt);
  // Throws NotXForm for complex squeezing before any stepping.
  (void)x_rhs(model, x0);

  Trajectory traj;
  traj.model = model;
  traj.samples.push_back(observe(model, 0.0, x0));

  XStateParams x = x0;
  const double h = plan.h;
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    const XRates k1 = x_rhs_unchecked(model, x);
    const XRates k2 = x_rhs_unchecked(model, detail::axpy(x, 0.5 * h, k1));
    const XRates k3 = x_rhs_unchecked(model, detail::axpy(x, 0.5 * h, k2));
    const XRates k4 = x_rhs_unchecked(model, detail::axpy(x, h, k3));
    x.a += h / 6.0 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da);
    x.b += h / 6.0 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
    x.c += h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
    x.d += h / 6.0 * (k1.dd + 2.0 * k2.dd + 2.0 * k3.dd + k4.dd);

    if (k % plan.stride == 0 || k == plan.steps) {
      if (!is_physical(x, opt.drift_limit))
        throw Error(Errc::PhysicalityLost, "integrate: state left the physical region at step " + std::to_string(k));
      traj.samples.push_back(observe(model, static_cast<double>(k) * h, x));
    }
  }
  return traj;
}

/// RK4 on the full 4x4 master equation; X-form states also get MEE observables.
inline Trajectory integrate_full(const BathModel& model, const DensityMatrix& rho0, double t_end, double dt,
                                 const IntegrateOptions& opt = {}) {
  const auto plan = detail::plan_steps(model, t_end, dt, opt);

  Trajectory traj;
  traj.model = model;
  auto record = [&](double t, const Mat4c& m) {
    if (std::abs(m.trace() - 1.0) > opt.drift_limit || hermiticity_defect(m) > opt.drift_limit)
      throw Error(Errc::PhysicalityLost, "integrate_full: trace or Hermiticity drift");
    const Mat4c herm = 0.5 * (m + m.adjoint());
    if (eig_hermitian4(herm).values(0) < -opt.drift_limit)
      throw Error(Errc::PhysicalityLost, "integrate_full: state lost positivity");
    const auto rho = DensityMatrix::unchecked(herm);
    Sample s;
    s.t = t;
    s.concurrence = concurrence(rho);
    try {
      s.x = extract_x_params(rho);
      detail::fill_x_observables(s, model);
    } catch (const Error& e) {
      if (e.code() != Errc::NotXForm) throw;
      s.x_form = false;
    }
    detail::fill_common(s, model, rho);
    traj.samples.push_back(s);
    traj.states.push_back(m);
  };

  Mat4c rho = rho0.matrix();
  record(0.0, rho);
  const double h = plan.h;
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    const Mat4c k1 = lindblad_rhs(model, rho);
    const Mat4c k2 = lindblad_rhs(model, Mat4c(rho + 0.5 * h * k1));
    const Mat4c k3 = lindblad_rhs(model, Mat4c(rho + 0.5 * h * k2));
    const Mat4c k4 = lindblad_rhs(model, Mat4c(rho + h * k3));
    rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k % plan.stride == 0 || k == plan.steps) record(static_cast<double>(k) * h, rho);
  }
  return traj;
}

/// First time after which `series` stays at or below `eps`, linearly
/// interpolated between the bracketing samples. Unset if the series never
/// rises above `eps` or is still above it at the last sample.
inline std::optional<double> vanishing_time(const std::vector<double>& times, const std::vector<double>& series,
                                            double eps) {
  const std::size_t n = std::min(times.size(), series.size());
  if (n < 2) return std::nullopt;
  std::optional<std::size_t> last_alive;
  for (std::size_t i = 0; i < n; ++i)
    if (series[i] > eps) last_alive = i;
  if (!last_alive || *last_alive + 1 >= n) return std::nullopt;
  const std::size_t i = *last_alive;
  const double y0 = series[i];
  const double y1 = series[i + 1];
  const double frac = (y0 - eps) / (y0 - y1);
  return times[i] + std::clamp(frac, 0.0, 1.0) * (times[i + 1] - times[i]);
}

/// Maximal rising runs that start at a local minimum (possibly a flat
/// plateau entered by a strict decrease) and gain more than `eps`.
inline std::vector<RevivalWindow> revival_windows(const std::vector<double>& times, const std::vector<double>& series,
                                                  double eps, double noise = 1e-10) {
  std::vector<RevivalWindow> out;
  const std::size_t n = std::min(times.size(), series.size());
  bool descended = false;
  std::size_t i = 0;
  while (i + 1 < n) {
    if (series[i + 1] < series[i] - noise) {
      descended = true;
      ++i;
      continue;
    }
    if (series[i + 1] <= series[i] + noise) {
      ++i;
      continue;
    }
    // Rising from index i.
    const std::size_t start = i;
    std::size_t j = i;
    while (j + 1 < n && series[j + 1] >= series[j] - noise) ++j;
    const double rise = series[j] - series[start];
    if (descended && rise > eps) out.push_back({times[start], times[j], rise});
    i = j;
  }
  return out;
}

inline EventReport detect_events(const Trajectory& traj, double eps_death = event_thresholds::kDeath,
                                 double eps_revival = event_thresholds::kRevival) {
  EventReport report;
  if (traj.samples.size() < 2) return report;
  std::vector<double> conc;
  std::vector<double> mee;
  for (const auto& s : traj.samples) {
    conc.push_back(s.concurrence);
    if (s.mee) mee.push_back(*s.mee);
  }
  const auto t = traj.times();
  report.sudden_death_time = vanishing_time(t, conc, eps_death);
  if (mee.size() == t.size()) report.revival_windows = revival_windows(t, mee, eps_revival);
  return report;
}

}  // namespace mee
