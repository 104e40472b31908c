#include "exo/designopt.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "exo/errors.hpp"
#include "exo/spline.hpp"
#include "exo/units.hpp"

namespace exo {

ReferenceTorque interpolate_reference(const Eigen::VectorXd& theta_rad,
                                      const Eigen::VectorXd& tau_nm, int n) {
  if (theta_rad.size() < 4) {
    throw FitError("interpolate_reference: need at least four raw samples");
  }
  if (n < theta_rad.size()) {
    throw FitError("interpolate_reference: resampling below the raw count");
  }
  for (Eigen::Index i = 1; i < theta_rad.size(); ++i) {
    if (!(theta_rad[i] > theta_rad[i - 1])) {
      throw FitError("interpolate_reference: angles must be strictly increasing");
    }
  }
  const CubicSpline spline(theta_rad, tau_nm);
  ReferenceTorque ref;
  ref.raw_theta_rad = theta_rad;
  ref.raw_tau_nm = tau_nm;
  ref.theta_rad = Eigen::VectorXd::LinSpaced(n, theta_rad[0],
                                             theta_rad[theta_rad.size() - 1]);
  ref.tau_nm.resize(n);
  for (int i = 0; i < n; ++i) ref.tau_nm[i] = spline(ref.theta_rad[i]);
  return ref;
}

double size_initial_length(const PlacementParams& p, double theta_sizing_rad) {
  return solve_geometry(p, theta_sizing_rad).length_m;
}

double modeled_torque(const DesignContext& ctx, const PlacementParams& p,
                      double theta_rad) {
  FpamSpec spec = ctx.fpam;
  spec.l0_m = size_initial_length(p, ctx.theta_sizing_rad);
  return torque(spec, ctx.pressure_pa, p, theta_rad, ctx.pressure_policy).first;
}

double objective(const Eigen::Vector4d& x, const ReferenceTorque& ref,
                 const DesignContext& ctx) {
  PlacementParams p{x[0], x[1], x[2], x[3], ctx.rw_m};
  FpamSpec spec = ctx.fpam;
  try {
    p.validate();
    spec.l0_m = size_initial_length(p, ctx.theta_sizing_rad);
  } catch (const GeometryError&) {
    return std::numeric_limits<double>::infinity();
  }
  double deficit = 0.0;
  for (Eigen::Index i = 0; i < ref.theta_rad.size(); ++i) {
    double tau = 0.0;
    try {
      tau = torque(spec, ctx.pressure_pa, p, ref.theta_rad[i],
                   ctx.pressure_policy)
                .first;
    } catch (const GeometryError&) {
      return std::numeric_limits<double>::infinity();
    }
    deficit += std::max(0.0, ref.tau_nm[i] - tau);
  }
  return deficit;
}

namespace {

std::vector<Eigen::Vector4d> seed_grid(const OptimizationProblem& problem) {
  std::array<std::vector<double>, 4> axes;
  for (int i = 0; i < 4; ++i) {
    const double lo = problem.lower[i];
    const double hi = problem.upper[i];
    const double step = problem.grid_step[i];
    if (!(step > 0.0)) throw FitError("optimize_placement: grid step must be positive");
    for (double v = lo; v <= hi + 1e-12; v += step) {
      axes[i].push_back(std::min(v, hi));
    }
  }
  std::vector<Eigen::Vector4d> seeds;
  seeds.reserve(axes[0].size() * axes[1].size() * axes[2].size() *
                axes[3].size());
  for (double d1 : axes[0])
    for (double w1 : axes[1])
      for (double d2 : axes[2])
        for (double w2 : axes[3]) seeds.push_back({d1, w1, d2, w2});
  return seeds;
}

}  // namespace

OptimizationResult optimize_placement(const OptimizationProblem& problem,
                                      const ReferenceTorque& ref,
                                      int threads) {
  for (int i = 0; i < 4; ++i) {
    if (!(problem.lower[i] <= problem.upper[i])) {
      throw FitError("optimize_placement: inverted bounds");
    }
  }
  const std::vector<Eigen::Vector4d> seeds = seed_grid(problem);
  std::vector<SeedTrace> traces(seeds.size());

  auto run_seed = [&](size_t idx) {
    const auto f = [&](const Eigen::VectorXd& x) {
      return objective(Eigen::Vector4d(x), ref, problem.context);
    };
    const NelderMeadResult r = minimize_bounded(
        f, seeds[idx], problem.lower, problem.upper, problem.nm);
    traces[idx] = SeedTrace{seeds[idx], Eigen::Vector4d(r.x), r.f};
  };

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, static_cast<int>(seeds.size())));
  if (n_threads == 1) {
    for (size_t i = 0; i < seeds.size(); ++i) run_seed(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < seeds.size();
             i = next.fetch_add(1)) {
          run_seed(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  size_t best_idx = seeds.size();
  for (size_t i = 0; i < traces.size(); ++i) {
    if (!std::isfinite(traces[i].objective)) continue;
    if (best_idx == seeds.size() ||
        traces[i].objective < traces[best_idx].objective) {
      best_idx = i;
    }
  }
  if (best_idx == seeds.size()) {
    throw InfeasibleError("optimize_placement: every seed was infeasible");
  }

  OptimizationResult result;
  const Eigen::Vector4d& x = traces[best_idx].best;
  result.best = PlacementParams{x[0], x[1], x[2], x[3], problem.context.rw_m};
  result.objective_nm = traces[best_idx].objective;
  result.seeds = std::move(traces);
  return result;
}

double find_min_pressure(const OptimizationProblem& problem,
                         const ReferenceTorque& ref, double p_max_pa,
                         double resolution_pa, double p_min_pa, int threads) {
  auto feasible = [&](double p_pa) {
    OptimizationProblem instance = problem;
    instance.context.pressure_pa = p_pa;
    return optimize_placement(instance, ref, threads).objective_nm <= 0.0;
  };
  if (!feasible(p_max_pa)) {
    throw InfeasibleError(
        "find_min_pressure: reference torque not dominated even at the "
        "maximum pressure");
  }
  if (feasible(p_min_pa)) return p_min_pa;

  double lo = p_min_pa, hi = p_max_pa;
  while (hi - lo > resolution_pa) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double fit_wrist_radius(std::span<const TorqueMeasurement> measured,
                        const FpamSpec& spec, const PlacementParams& placement,
                        const StretchModel* stretch,
                        const WristRadiusScan& scan, PressurePolicy policy) {
  if (measured.empty()) {
    throw FitError("fit_wrist_radius: no measurements");
  }
  const int steps =
      static_cast<int>(std::round((scan.rw_hi_m - scan.rw_lo_m) / scan.step_m));
  double best_rw = scan.rw_lo_m;
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double rw = scan.rw_lo_m + i * scan.step_m;
    PlacementParams p = placement;
    p.rw_m = rw;
    double sse_straight = 0.0, sse_wrapped = 0.0;
    int n_straight = 0, n_wrapped = 0;
    bool valid = true;
    for (const auto& m : measured) {
      try {
        const auto [tau, sol] =
            stretch ? stretched_torque(spec, m.p_pa, p, *stretch, m.theta_rad,
                                       {}, policy)
                    : torque(spec, m.p_pa, p, m.theta_rad, policy);
        const double err = m.tau_nm - tau;
        if (sol.regime == Regime::Wrapped) {
          sse_wrapped += err * err;
          ++n_wrapped;
        } else {
          sse_straight += err * err;
          ++n_straight;
        }
      } catch (const GeometryError&) {
        valid = false;
        break;
      }
    }
    if (!valid) continue;
    double score = 0.0;
    if (n_straight > 0) score += std::sqrt(sse_straight / n_straight);
    if (n_wrapped > 0) score += std::sqrt(sse_wrapped / n_wrapped);
    if (score < best_score) {
      best_score = score;
      best_rw = rw;
    }
  }
  if (!std::isfinite(best_score)) {
    throw GeometryError("fit_wrist_radius: no scanned radius was feasible");
  }
  return best_rw;
}

double predict_rom(const FpamSpec& spec, double p_pa,
                   const PlacementParams& placement, double resolution_rad,
                   PressurePolicy policy) {
  auto tau_at = [&](double theta) {
    return torque(spec, p_pa, placement, theta, policy).first;
  };
  if (!(tau_at(0.0) > 0.0)) {
    throw DomainError("predict_rom: torque must be positive at zero angle");
  }
  const double theta_hi = units::kPi / 2.0;
  const int coarse = 180;  // half-degree scan for the first sign change
  double prev = 0.0;
  for (int i = 1; i <= coarse; ++i) {
    const double theta = theta_hi * i / coarse;
    if (tau_at(theta) <= 0.0) {
      double a = prev, b = theta;
      while (b - a > resolution_rad) {
        const double mid = 0.5 * (a + b);
        (tau_at(mid) > 0.0 ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    prev = theta;
  }
  throw FitError("predict_rom: torque never reaches zero below 90 degrees");
}

}  // namespace exo
