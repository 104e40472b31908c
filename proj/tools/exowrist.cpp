// Command-line surface of the wrist-exosuit toolkit: data ingestion,
// model fitting, placement optimization and closed-loop simulation.
// Angles are degrees at this boundary; lengths follow --units (cm in paper
// units, m in SI); file schemas are fixed and unit-suffixed.

#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exo/config.hpp"
#include "exo/control.hpp"
#include "exo/csv.hpp"
#include "exo/designopt.hpp"
#include "exo/errors.hpp"
#include "exo/mountstretch.hpp"
#include "exo/tensile.hpp"
#include "exo/units.hpp"
#include "exo/wristgeom.hpp"

namespace {

using namespace exo;

struct GlobalOptions {
  std::string units = "paper";
  unsigned seed = 0;  // reserved
  bool verbose = false;

  double length_to_m(double v) const {
    return units == "paper" ? units::cm_to_m(v) : v;
  }
};

void vlog(const GlobalOptions& g, const std::string& msg) {
  if (g.verbose) std::fprintf(stderr, "%s\n", msg.c_str());
}

TensileDataset read_tensile_csv(const std::string& path) {
  const csv::Table table =
      csv::read_numeric(path, {"pressure_kpa", "epsilon", "force_n"});
  std::map<double, std::vector<TensileSample>> by_pressure;
  for (const auto& row : table.rows) {
    by_pressure[units::kpa_to_pa(row[0])].push_back({row[1], row[2]});
  }
  TensileDataset data;
  for (auto& [p_pa, samples] : by_pressure) {
    data.levels.push_back({p_pa, std::move(samples)});
  }
  data.validate();
  return data;
}

ReferenceTorque read_reference_csv(const std::string& path, int n) {
  const csv::Table table = csv::read_numeric(path, {"theta_deg", "tau_nm"});
  Eigen::VectorXd theta(table.rows.size()), tau(table.rows.size());
  for (size_t i = 0; i < table.rows.size(); ++i) {
    theta[i] = units::deg_to_rad(table.rows[i][0]);
    tau[i] = table.rows[i][1];
  }
  return interpolate_reference(theta, tau, n);
}

std::vector<TrajectoryPoint> read_trajectory_csv(const std::string& path) {
  const csv::Table table =
      csv::read_numeric(path, {"t_s", "theta_fe_deg", "theta_ur_deg"});
  std::vector<TrajectoryPoint> traj;
  traj.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    traj.push_back({row[0], row[1], row[2]});
  }
  return traj;
}

Json placement_result_json(const OptimizationResult& result) {
  Json j;
  j["placement"] = to_json(result.best);
  j["objective_nm"] = result.objective_nm;
  Json seeds = Json::array();
  for (const auto& trace : result.seeds) {
    Json s;
    s["seed_m"] = {trace.seed[0], trace.seed[1], trace.seed[2], trace.seed[3]};
    s["best_m"] = {trace.best[0], trace.best[1], trace.best[2], trace.best[3]};
    s["objective_nm"] = trace.objective;
    seeds.push_back(std::move(s));
  }
  j["seeds"] = seeds;
  return j;
}

void write_trace_csv(const OptimizationResult& result, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.seeds.size());
  for (size_t i = 0; i < result.seeds.size(); ++i) {
    const auto& t = result.seeds[i];
    rows.push_back({std::to_string(i), csv::format_double(t.seed[0]),
                    csv::format_double(t.seed[1]), csv::format_double(t.seed[2]),
                    csv::format_double(t.seed[3]), csv::format_double(t.best[0]),
                    csv::format_double(t.best[1]), csv::format_double(t.best[2]),
                    csv::format_double(t.best[3]),
                    csv::format_double(t.objective)});
  }
  csv::write(path,
             {"seed_index", "seed_d1_m", "seed_w1_m", "seed_d2_m", "seed_w2_m",
              "best_d1_m", "best_w1_m", "best_d2_m", "best_w2_m",
              "objective_nm"},
             rows);
}

int run(int argc, char** argv) {
  CLI::App app{"fPAM wrist exosuit modeling, design optimization and "
               "control simulation"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--units", global.units, "Unit system for CLI values")
      ->check(CLI::IsMember({"paper", "si"}))
      ->capture_default_str();
  app.add_option("--seed", global.seed, "Reserved; no stochastic stage yet");
  app.add_flag("--verbose", global.verbose, "Progress output on stderr");

  // fit-fpam -------------------------------------------------------------
  auto* fit_fpam = app.add_subcommand(
      "fit-fpam", "Fit force curves from tensile data and identify the "
                  "actuator parameters");
  std::string tensile_path;
  double l0 = 0.0, r0 = 0.0, e_mpa = 9.06, t_mm = 0.08;
  double eps0_override = -1.0;
  int smoothing_window = 11;
  fit_fpam->add_option("tensile", tensile_path,
                       "Tensile CSV (pressure_kpa,epsilon,force_n)")
      ->required();
  fit_fpam->add_option("--l0", l0, "Measured fully stretched length "
                                   "(cm in paper units, m in SI)")
      ->required();
  fit_fpam->add_option("--r0", r0, "Measured fully stretched radius "
                                   "(cm in paper units, m in SI)")
      ->required();
  fit_fpam->add_option("--e-mpa", e_mpa, "Fabric elastic modulus, MPa")
      ->capture_default_str();
  fit_fpam->add_option("--t-mm", t_mm, "Fabric thickness, mm")
      ->capture_default_str();
  fit_fpam->add_option("--eps0", eps0_override,
                       "Override eps0 when no zero-pressure level is present");
  fit_fpam->add_option("--smoothing-window", smoothing_window,
                       "Moving-average width, samples")
      ->capture_default_str();
  std::string out_path;
  fit_fpam->add_option("-o,--output", out_path, "Output spec JSON")->required();

  // torque-profile -------------------------------------------------------
  auto* profile = app.add_subcommand(
      "torque-profile", "Sweep the modeled torque over a joint angle range");
  std::string config_path, muscle_name = "flexor";
  double pressure_kpa = 137.0;
  std::string theta_range = "-67.5:90:0.5";
  bool with_stretch = false, clamp_pressure = false;
  profile->add_option("config", config_path, "Exosuit config JSON")->required();
  profile->add_option("--muscle", muscle_name,
                      "flexor | extensor | ulnar | radial")
      ->capture_default_str();
  profile->add_option("--pressure-kpa", pressure_kpa, "Actuation pressure")
      ->capture_default_str();
  profile->add_option("--theta-range", theta_range,
                      "Sweep as lo:hi:step, degrees")
      ->capture_default_str();
  profile->add_flag("--stretch", with_stretch,
                    "Apply the mounting-point stretching correction");
  profile->add_flag("--clamp-pressure", clamp_pressure,
                    "Clamp pressures outside the calibrated range instead of "
                    "failing");
  profile->add_option("-o,--output", out_path, "Output CSV")->required();

  // optimize-placement ---------------------------------------------------
  auto* optimize = app.add_subcommand(
      "optimize-placement",
      "Multi-start placement optimization against a reference torque");
  std::string problem_path, reference_path, trace_path;
  int ref_samples = 140, threads = 0;
  optimize->add_option("problem", problem_path, "Problem JSON")->required();
  optimize->add_option("reference", reference_path,
                       "Reference CSV (theta_deg,tau_nm)")
      ->required();
  optimize->add_option("--samples", ref_samples,
                       "Dense interpolation sample count")
      ->capture_default_str();
  optimize->add_option("--threads", threads, "0 = hardware concurrency")
      ->capture_default_str();
  optimize->add_option("--trace", trace_path, "Per-seed trace CSV");
  optimize->add_option("-o,--output", out_path, "Result JSON")->required();

  // find-min-pressure ----------------------------------------------------
  auto* minp = app.add_subcommand(
      "find-min-pressure", "Smallest pressure whose optimal placement "
                           "dominates the reference torque");
  double p_max_kpa = 400.0, p_resolution_kpa = 1.0;
  minp->add_option("problem", problem_path, "Problem JSON")->required();
  minp->add_option("reference", reference_path,
                   "Reference CSV (theta_deg,tau_nm)")
      ->required();
  minp->add_option("--p-max-kpa", p_max_kpa, "Upper search bound")
      ->capture_default_str();
  minp->add_option("--resolution-kpa", p_resolution_kpa, "Bisection width")
      ->capture_default_str();
  minp->add_option("--samples", ref_samples, "Dense interpolation samples")
      ->capture_default_str();
  minp->add_option("--threads", threads, "0 = hardware concurrency")
      ->capture_default_str();
  minp->add_option("-o,--output", out_path, "Result JSON")->required();

  // fit-stretch ----------------------------------------------------------
  auto* fit_stretch = app.add_subcommand(
      "fit-stretch", "Average per-record stretching coefficients");
  std::string records_path;
  fit_stretch->add_option("records", records_path,
                          "Records CSV (force_n,dx1_m,dx2_m)")
      ->required();
  fit_stretch->add_option("-o,--output", out_path, "Stretch model JSON")
      ->required();

  // fit-wrist-radius -----------------------------------------------------
  auto* fit_rw = app.add_subcommand(
      "fit-wrist-radius", "Exhaustive wrist-radius scan against measured "
                          "torques");
  std::string measured_path;
  bool rw_stretch = false;
  fit_rw->add_option("measured", measured_path,
                     "Measured CSV (pressure_kpa,theta_deg,tau_nm)")
      ->required();
  fit_rw->add_option("config", config_path, "Exosuit config JSON")->required();
  fit_rw->add_option("--muscle", muscle_name,
                     "flexor | extensor | ulnar | radial")
      ->capture_default_str();
  fit_rw->add_flag("--stretch", rw_stretch,
                   "Model torques with the stretching correction applied");
  fit_rw->add_flag("--clamp-pressure", clamp_pressure,
                   "Clamp out-of-range pressures");
  fit_rw->add_option("-o,--output", out_path, "Result JSON")->required();

  // predict-rom ----------------------------------------------------------
  auto* rom = app.add_subcommand(
      "predict-rom", "Joint limits from the torque zero crossing, per muscle");
  rom->add_option("config", config_path, "Exosuit config JSON")->required();
  rom->add_option("--pressure-kpa", pressure_kpa, "Actuation pressure")
      ->capture_default_str();
  rom->add_flag("--clamp-pressure", clamp_pressure,
                "Clamp out-of-range pressures");
  rom->add_option("-o,--output", out_path, "Limits JSON")->required();

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Closed-loop antagonistic tracking simulation");
  std::string trajectory_path;
  simulate->add_option("config", config_path, "Exosuit config JSON")
      ->required();
  simulate->add_option("trajectory", trajectory_path,
                       "Trajectory CSV (t_s,theta_fe_deg,theta_ur_deg)")
      ->required();
  simulate->add_option("-o,--output", out_path, "Log CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const PressurePolicy policy = clamp_pressure ? PressurePolicy::ClampToRange
                                               : PressurePolicy::Strict;

  if (fit_fpam->parsed()) {
    const TensileDataset data = read_tensile_csv(tensile_path);
    FitOptions options;
    options.smoothing_window = smoothing_window;
    const ForceCurveFit fit = fit_force_curves(data, options);
    const FabricConstants fabric{e_mpa * 1.0e6, t_mm * 1.0e-3};
    std::optional<double> eps0;
    if (eps0_override >= 0.0) eps0 = eps0_override;
    const IdentifiedSpec identified =
        identify_spec(fit, global.length_to_m(l0), global.length_to_m(r0),
                      fabric, eps0);
    for (const auto& pr : identified.r0_by_pressure) {
      vlog(global, "p = " + std::to_string(units::pa_to_kpa(pr.p_pa)) +
                       " kPa: r0 = " +
                       std::to_string(units::m_to_cm(pr.r0_m)) + " cm");
    }
    save_json(to_json(identified), out_path);
    return 0;
  }

  if (profile->parsed()) {
    const ExosuitConfig cfg = load_exosuit_config(config_path);
    const MuscleUnit& muscle = cfg.muscle(muscle_name);
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(theta_range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
        !(step > 0.0) || !(hi >= lo)) {
      throw IoError("--theta-range must be lo:hi:step with step > 0");
    }
    const double p_pa = units::kpa_to_pa(pressure_kpa);
    std::vector<std::vector<std::string>> rows;
    for (double deg = lo; deg <= hi + 1e-9; deg += step) {
      const double theta = units::deg_to_rad(deg);
      const auto [tau, sol] =
          with_stretch ? stretched_torque(muscle.fpam, p_pa, muscle.placement,
                                          muscle.stretch, theta, {}, policy)
                       : torque(muscle.fpam, p_pa, muscle.placement, theta,
                                policy);
      rows.push_back({csv::format_double(deg), csv::format_double(tau),
                      regime_name(sol.regime),
                      csv::format_double(sol.length_m),
                      csv::format_double(sol.moment_arm_m)});
    }
    csv::write(out_path,
               {"theta_deg", "torque_nm", "regime", "length_m",
                "moment_arm_m"},
               rows);
    return 0;
  }

  if (optimize->parsed()) {
    const OptimizationProblem problem = load_problem(problem_path);
    const ReferenceTorque ref = read_reference_csv(reference_path, ref_samples);
    const OptimizationResult result = optimize_placement(problem, ref, threads);
    vlog(global, "objective = " + std::to_string(result.objective_nm) + " N*m");
    save_json(placement_result_json(result), out_path);
    if (!trace_path.empty()) write_trace_csv(result, trace_path);
    return 0;
  }

  if (minp->parsed()) {
    OptimizationProblem problem = load_problem(problem_path);
    const ReferenceTorque ref = read_reference_csv(reference_path, ref_samples);
    const double p =
        find_min_pressure(problem, ref, units::kpa_to_pa(p_max_kpa),
                          units::kpa_to_pa(p_resolution_kpa), 0.0, threads);
    problem.context.pressure_pa = p;
    const OptimizationResult at_min = optimize_placement(problem, ref, threads);
    Json j = placement_result_json(at_min);
    j["min_pressure_kpa"] = units::pa_to_kpa(p);
    save_json(j, out_path);
    return 0;
  }

  if (fit_stretch->parsed()) {
    const csv::Table table =
        csv::read_numeric(records_path, {"force_n", "dx1_m", "dx2_m"});
    std::vector<StretchRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      records.push_back({row[0], row[1], row[2]});
    }
    const StretchModel model = fit_coefficients(records);
    save_json(to_json(model), out_path);
    return 0;
  }

  if (fit_rw->parsed()) {
    const ExosuitConfig cfg = load_exosuit_config(config_path);
    const MuscleUnit& muscle = cfg.muscle(muscle_name);
    const csv::Table table = csv::read_numeric(
        measured_path, {"pressure_kpa", "theta_deg", "tau_nm"});
    std::vector<TorqueMeasurement> measured;
    measured.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      measured.push_back(
          {units::kpa_to_pa(row[0]), units::deg_to_rad(row[1]), row[2]});
    }
    const double rw =
        fit_wrist_radius(measured, muscle.fpam, muscle.placement,
                         rw_stretch ? &muscle.stretch : nullptr, {}, policy);
    Json j;
    j["rw_m"] = rw;
    j["rw_cm"] = units::m_to_cm(rw);
    save_json(j, out_path);
    return 0;
  }

  if (rom->parsed()) {
    const ExosuitConfig cfg = load_exosuit_config(config_path);
    const double p_pa = units::kpa_to_pa(pressure_kpa);
    Json j;
    const std::pair<const char*, const MuscleUnit*> muscles[4] = {
        {"flexion_deg", &cfg.flexor},
        {"extension_deg", &cfg.extensor},
        {"ulnar_deg", &cfg.ulnar},
        {"radial_deg", &cfg.radial}};
    for (const auto& [key, m] : muscles) {
      j[key] = units::rad_to_deg(predict_rom(
          m->fpam, p_pa, m->placement, units::deg_to_rad(0.01), policy));
    }
    save_json(j, out_path);
    return 0;
  }

  if (simulate->parsed()) {
    const ExosuitConfig cfg = load_exosuit_config(config_path);
    const std::vector<TrajectoryPoint> traj =
        read_trajectory_csv(trajectory_path);
    const TrackingLog log = run_tracking(cfg.controller, cfg.plant,
                                         cfg.fe_pair(), cfg.ur_pair(), traj);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(log.rows.size());
    for (const auto& r : log.rows) {
      rows.push_back(
          {csv::format_double(r.t_s), csv::format_double(r.fe_des_deg),
           csv::format_double(r.fe_act_deg), csv::format_double(r.ur_des_deg),
           csv::format_double(r.ur_act_deg), csv::format_double(r.p_flex_kpa),
           csv::format_double(r.p_ext_kpa), csv::format_double(r.p_uln_kpa),
           csv::format_double(r.p_rad_kpa)});
    }
    csv::write(out_path,
               {"t_s", "fe_des", "fe_act", "ur_des", "ur_act", "p_flex_kpa",
                "p_ext_kpa", "p_uln_kpa", "p_rad_kpa"},
               rows);
    std::printf("rms_fe_deg=%s rms_ur_deg=%s\n",
                csv::format_double(log.rms_fe_deg).c_str(),
                csv::format_double(log.rms_ur_deg).c_str());
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const exo::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const exo::GeometryError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const exo::InfeasibleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const exo::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const exo::FitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
