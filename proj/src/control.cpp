#include "exo/control.hpp"

#include <algorithm>
#include <cmath>

#include "exo/errors.hpp"
#include "exo/units.hpp"

namespace exo {

void ControllerConfig::validate() const {
  if (!(gain_kpa_per_deg > 0.0)) {
    throw DomainError("ControllerConfig: gain must be positive");
  }
  if (!(dt_s > 0.0)) throw DomainError("ControllerConfig: dt must be positive");
  if (!(p_min_kpa <= p_init_kpa && p_init_kpa <= p_max_kpa)) {
    throw DomainError("ControllerConfig: initial pressure outside the limits");
  }
  if (regulator_lag_s < 0.0 || settle_window_s < 0.0) {
    throw DomainError("ControllerConfig: negative time constant");
  }
}

void PlantConfig::validate() const {
  if (!(inertia_kg_m2 > 0.0) || !(damping_nms_per_rad > 0.0)) {
    throw DomainError("PlantConfig: inertia and damping must be positive");
  }
  if (stiffness_nm_per_rad < 0.0) {
    throw DomainError("PlantConfig: stiffness must be nonnegative");
  }
  if (!(theta_min_rad < theta_max_rad)) {
    throw DomainError("PlantConfig: empty joint range");
  }
}

PairPressures controller_step(const ControllerConfig& cfg,
                              const PairPressures& state,
                              double theta_desired_deg,
                              double theta_actual_deg) {
  const double error = theta_desired_deg - theta_actual_deg;
  if (error == 0.0) return state;

  PairPressures next = state;
  const double delta = cfg.gain_kpa_per_deg * std::abs(error);
  double* agonist = error > 0.0 ? &next.positive_kpa : &next.negative_kpa;
  double* antagonist = error > 0.0 ? &next.negative_kpa : &next.positive_kpa;

  *agonist += delta;
  // Strictly above the threshold the antagonist releases twice as fast.
  *antagonist -= (*antagonist > cfg.p_threshold_kpa) ? 2.0 * delta : delta;

  next.positive_kpa = std::clamp(next.positive_kpa, cfg.p_min_kpa, cfg.p_max_kpa);
  next.negative_kpa = std::clamp(next.negative_kpa, cfg.p_min_kpa, cfg.p_max_kpa);
  return next;
}

namespace {

double muscle_torque(const PlantConfig& plant, const MuscleUnit& muscle,
                     double p_pa, double theta_rad, bool mirrored) {
  const double eval_theta = mirrored ? -theta_rad : theta_rad;
  double tau = 0.0;
  if (plant.use_stretch) {
    tau = stretched_torque(muscle.fpam, p_pa, muscle.placement, muscle.stretch,
                           eval_theta, {}, PressurePolicy::ClampToRange)
              .first;
  } else {
    tau = torque(muscle.fpam, p_pa, muscle.placement, eval_theta,
                 PressurePolicy::ClampToRange)
              .first;
  }
  return mirrored ? -tau : tau;
}

}  // namespace

PlantState plant_step(const PlantConfig& plant, const DofPair& pair,
                      const PlantState& state, const PairPressures& pressures,
                      double dt_s) {
  if (!(dt_s > 0.0)) throw DomainError("plant_step: dt must be positive");

  const double tau_pos =
      muscle_torque(plant, pair.positive, units::kpa_to_pa(pressures.positive_kpa),
                    state.theta_rad, false);
  const double tau_neg =
      muscle_torque(plant, pair.negative, units::kpa_to_pa(pressures.negative_kpa),
                    state.theta_rad, true);
  const double tau_net = tau_pos + tau_neg -
                         plant.stiffness_nm_per_rad * state.theta_rad -
                         plant.damping_nms_per_rad * state.omega_rad_s;

  PlantState next;
  next.omega_rad_s =
      state.omega_rad_s + dt_s * tau_net / plant.inertia_kg_m2;
  if (std::abs(next.omega_rad_s) > plant.omega_limit_rad_s) {
    throw DomainError("plant_step: angular velocity diverged");
  }
  next.theta_rad = state.theta_rad + dt_s * next.omega_rad_s;
  if (next.theta_rad < plant.theta_min_rad) {
    next.theta_rad = plant.theta_min_rad;
    next.omega_rad_s = 0.0;
  } else if (next.theta_rad > plant.theta_max_rad) {
    next.theta_rad = plant.theta_max_rad;
    next.omega_rad_s = 0.0;
  }
  return next;
}

namespace {

// Linear interpolation with clamped ends.
double desired_at(std::span<const TrajectoryPoint> traj, double t,
                  double TrajectoryPoint::* field) {
  if (t <= traj.front().t_s) return traj.front().*field;
  if (t >= traj.back().t_s) return traj.back().*field;
  size_t hi = 1;
  while (traj[hi].t_s < t) ++hi;
  const auto& a = traj[hi - 1];
  const auto& b = traj[hi];
  const double f = (t - a.t_s) / (b.t_s - a.t_s);
  return a.*field + f * (b.*field - a.*field);
}

}  // namespace

TrackingLog run_tracking(const ControllerConfig& cfg, const PlantConfig& plant,
                         const DofPair& fe, const DofPair& ur,
                         std::span<const TrajectoryPoint> trajectory) {
  cfg.validate();
  plant.validate();
  if (trajectory.empty()) {
    throw DomainError("run_tracking: empty trajectory");
  }
  for (size_t i = 1; i < trajectory.size(); ++i) {
    if (!(trajectory[i].t_s >= trajectory[i - 1].t_s)) {
      throw DomainError("run_tracking: trajectory not time-sorted");
    }
  }

  TrackingLog log;
  PairPressures fe_cmd{cfg.p_init_kpa, cfg.p_init_kpa};
  PairPressures ur_cmd{cfg.p_init_kpa, cfg.p_init_kpa};
  PairPressures fe_act = fe_cmd, ur_act = ur_cmd;
  PlantState fe_state, ur_state;

  const double t_end = trajectory.back().t_s;
  const int n_steps = static_cast<int>(std::floor(t_end / cfg.dt_s));
  log.rows.reserve(n_steps + 1);

  double sum_fe = 0.0, sum_ur = 0.0;
  int n_rms = 0;

  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * cfg.dt_s;
    const double fe_des = desired_at(trajectory, t, &TrajectoryPoint::fe_deg);
    const double ur_des = desired_at(trajectory, t, &TrajectoryPoint::ur_deg);
    const double fe_act_deg = units::rad_to_deg(fe_state.theta_rad);
    const double ur_act_deg = units::rad_to_deg(ur_state.theta_rad);

    fe_cmd = controller_step(cfg, fe_cmd, fe_des, fe_act_deg);
    ur_cmd = controller_step(cfg, ur_cmd, ur_des, ur_act_deg);

    if (cfg.regulator_lag_s > 0.0) {
      const double a = 1.0 - std::exp(-cfg.dt_s / cfg.regulator_lag_s);
      fe_act.positive_kpa += a * (fe_cmd.positive_kpa - fe_act.positive_kpa);
      fe_act.negative_kpa += a * (fe_cmd.negative_kpa - fe_act.negative_kpa);
      ur_act.positive_kpa += a * (ur_cmd.positive_kpa - ur_act.positive_kpa);
      ur_act.negative_kpa += a * (ur_cmd.negative_kpa - ur_act.negative_kpa);
    } else {
      fe_act = fe_cmd;
      ur_act = ur_cmd;
    }

    log.rows.push_back({t, fe_des, fe_act_deg, ur_des, ur_act_deg,
                        fe_act.positive_kpa, fe_act.negative_kpa,
                        ur_act.positive_kpa, ur_act.negative_kpa});

    if (t >= cfg.settle_window_s) {
      sum_fe += (fe_des - fe_act_deg) * (fe_des - fe_act_deg);
      sum_ur += (ur_des - ur_act_deg) * (ur_des - ur_act_deg);
      ++n_rms;
    }

    fe_state = plant_step(plant, fe, fe_state, fe_act, cfg.dt_s);
    ur_state = plant_step(plant, ur, ur_state, ur_act, cfg.dt_s);
  }

  if (n_rms > 0) {
    log.rms_fe_deg = std::sqrt(sum_fe / n_rms);
    log.rms_ur_deg = std::sqrt(sum_ur / n_rms);
  }
  return log;
}

}  // namespace exo
