#include "frontlab/cli.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontlab/energy.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/io.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/renorm.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/tw_ode.hpp"

namespace frontlab::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Common {
  std::string potential;
  std::optional<double> b;
  std::string out_dir = "frontlab-out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--potential", c.potential, "JSON potential descriptor")->required()->check(CLI::ExistingFile);
  cmd->add_option("--b", c.b, "Override the parameter b of a cubic-family descriptor");
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
}

Potential resolve_potential(const Common& c, Json& descriptor) {
  Potential v = io::load_potential(c.potential);
  if (c.b) {
    if (v.kind_name() != "cubic") throw ConfigError("--b applies only to cubic-family descriptors");
    v = Potential::cubic(*c.b);
  }
  descriptor = io::potential_to_json(v);
  return v;
}

class Outputs {
 public:
  Outputs(const Common& c, std::string command) : dir_(c.out_dir), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    io::atomic_write(dir_ / name, content);
    names_.push_back(name);
  }

  void finish(Json config) {
    const io::RunManifest m = io::make_manifest(command_, std::move(config), names_);
    io::atomic_write(dir_ / (command_ + ".manifest.json"), io::to_json(m).dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::string command_;
  std::vector<std::string> names_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"frontlab: travelling-front analysis for gradient reaction-diffusion systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "frontlab 1.0.0");
  int threads = 0;
  app.add_option("--threads", threads, "Thread count (FRONTLAB_THREADS still caps it)");

  std::function<void()> action;

  // analyze
  Common ca;
  double hyp_radius = 10.0;
  auto* analyze_cmd = app.add_subcommand("analyze", "Spectrum of D^2V(0), linear speed and hypothesis checks");
  add_common(analyze_cmd, ca);
  analyze_cmd->add_option("--radius", hyp_radius, "Sampling radius for the coercivity check")->capture_default_str();
  analyze_cmd->callback([&] {
    action = [&] {
      Json desc;
      const Potential v = resolve_potential(ca, desc);
      Json report = io::to_json(analyze(v));
      report["hypotheses"] = io::to_json(check_hypotheses(v, hyp_radius, 2000));
      Outputs o(ca, "analyze");
      o.write("analyze.json", report.dump(2) + "\n");
      o.finish({{"potential", desc}, {"radius", hyp_radius}});
      out << report.dump(2) << "\n";
    };
  });

  // speed
  Common cs;
  std::vector<double> sp_bracket{1.0, 3.0};
  double sp_tol = 1e-3;
  double sp_threshold = -1.0;
  auto* speed_cmd = app.add_subcommand("speed", "Bisection for the nonlinear invasion speed by energy sign");
  add_common(speed_cmd, cs);
  speed_cmd->add_option("--bracket", sp_bracket, "c_lo c_hi")->expected(2)->capture_default_str();
  speed_cmd->add_option("--tol", sp_tol, "Bisection tolerance")->capture_default_str();
  speed_cmd->add_option("--threshold", sp_threshold, "Energy level certifying negative-infinity evidence")
      ->capture_default_str();
  speed_cmd->callback([&] {
    action = [&] {
      Json desc;
      const Potential v = resolve_potential(cs, desc);
      ClassifyOptions opts;
      opts.neg_threshold = sp_threshold;
      const SpeedEstimate est = estimate_c_nonlin(v, sp_bracket[0], sp_bracket[1], sp_tol, opts);
      Json report = io::to_json(est);
      Outputs o(cs, "speed");
      o.write("speed.json", report.dump(2) + "\n");
      o.write("probes.csv", io::probes_csv(est.probes));
      if (est.witness) o.write("witness.csv", io::profile_csv(*est.witness));
      o.finish({{"potential", desc}, {"bracket", sp_bracket}, {"tol", sp_tol}, {"threshold", sp_threshold}});
      report.erase("witness");
      out << report.dump(2) << "\n";
    };
  });

  // shoot
  Common csh;
  std::vector<double> sh_bracket{2.0, 2.5};
  double sh_tol = 1e-8;
  ShootOptions sh_opts;
  auto* shoot_cmd = app.add_subcommand("shoot", "Pushed front by shooting and bisection on the speed");
  add_common(shoot_cmd, csh);
  shoot_cmd->add_option("--bracket", sh_bracket, "c_lo c_hi")->expected(2)->capture_default_str();
  shoot_cmd->add_option("--tol", sh_tol, "Bisection tolerance")->capture_default_str();
  shoot_cmd->add_option("--direction", sh_opts.direction, "Eigenvector index")->capture_default_str();
  shoot_cmd->add_option("--amplitude", sh_opts.amplitude, "Initial amplitude")->capture_default_str();
  shoot_cmd->add_option("--step", sh_opts.step, "Integration step")->capture_default_str();
  shoot_cmd->callback([&] {
    action = [&] {
      Json desc;
      const Potential v = resolve_potential(csh, desc);
      const PushedSpeed res = find_pushed_speed(v, sh_bracket[0], sh_bracket[1], sh_tol, sh_opts);
      Json report = io::to_json(res.front);
      report["c_low"] = res.c_low;
      report["c_high"] = res.c_high;
      report["evaluations"] = res.evaluations;
      Outputs o(csh, "shoot");
      o.write("front.json", report.dump(2) + "\n");
      o.write("profile.csv", io::profile_csv(res.front.profile));
      o.finish({{"potential", desc},
                {"bracket", sh_bracket},
                {"tol", sh_tol},
                {"direction", sh_opts.direction},
                {"amplitude", sh_opts.amplitude},
                {"step", sh_opts.step}});
      report.erase("profile");
      out << report.dump(2) << "\n";
    };
  });

  // simulate
  Common csim;
  SimConfig sim_cfg;
  double level = 0.5;
  double step_width = 20.0;
  auto* sim_cmd = app.add_subcommand("simulate", "Direct simulation with front tracking");
  add_common(sim_cmd, csim);
  sim_cmd->add_option("--T", sim_cfg.t_end, "Final time")->capture_default_str();
  sim_cmd->add_option("--L", sim_cfg.half_width, "Half width of the domain")->capture_default_str();
  sim_cmd->add_option("--dx", sim_cfg.dx, "Grid spacing")->capture_default_str();
  sim_cmd->add_option("--dt", sim_cfg.dt, "Time step")->capture_default_str();
  sim_cmd->add_option("--snapshot-every", sim_cfg.snapshot_every, "Snapshot cadence")->capture_default_str();
  sim_cmd->add_option("--level", level, "Tracking level")->capture_default_str();
  sim_cmd->add_option("--width", step_width, "Width of the initial step")->capture_default_str();
  sim_cmd->callback([&] {
    action = [&] {
      Json desc;
      sim_cfg.potential = resolve_potential(csim, desc);
      sim_cfg.initial = StepInit{1.0, step_width, {}};
      sim_cfg.watch_level = level;
      const Simulation sim = simulate(sim_cfg);
      const FrontTrack track = track_front(sim, level);
      Json report = io::to_json(track);
      report["contaminated"] = sim.contaminated;
      report["steps"] = sim.steps;
      if (sim.contaminated) warn("the front reached the right boundary layer; enlarge --L");
      Outputs o(csim, "simulate");
      o.write("track.json", report.dump(2) + "\n");
      o.write("track.csv", io::track_csv(track));
      o.write("track.svg", io::svg_polyline(track.times, track.positions));
      o.write("final.csv", io::snapshot_csv(sim.x, sim.d, sim.snapshots.back()));
      o.finish({{"potential", desc},
                {"T", sim_cfg.t_end},
                {"L", sim_cfg.half_width},
                {"dx", sim_cfg.dx},
                {"dt", sim_cfg.dt},
                {"snapshot_every", sim_cfg.snapshot_every},
                {"level", level},
                {"width", step_width}});
      report.erase("times");
      report.erase("positions");
      out << report.dump(2) << "\n";
    };
  });

  // renorm
  Common cr;
  double r_nu = 3.0;
  std::vector<double> r_coeffs;
  double r_amp = 1e-6, r_span = 260.0, r_h = 1e-3, r_horizon = 200.0;
  auto* renorm_cmd = app.add_subcommand("renorm", "Limit-potential trajectory with barrier crossings");
  add_common(renorm_cmd, cr);
  renorm_cmd->add_option("--nu", r_nu, "Perturbation strength")->capture_default_str();
  renorm_cmd->add_option("--coeffs", r_coeffs, "Unit coefficients on the unstable subspace (default: uniform)");
  renorm_cmd->add_option("--amplitude", r_amp, "Initial amplitude")->capture_default_str();
  renorm_cmd->add_option("--span", r_span, "Integration span")->capture_default_str();
  renorm_cmd->add_option("--step", r_h, "Integration step")->capture_default_str();
  renorm_cmd->add_option("--horizon", r_horizon, "Horizon for the limit checks")->capture_default_str();
  renorm_cmd->callback([&] {
    action = [&] {
      Json desc;
      const Potential v = resolve_potential(cr, desc);
      const SpectralReport spec = analyze(v);
      const LimitPotential lp(spec.mu, r_nu);
      std::vector<double> a = r_coeffs;
      if (a.empty()) a.assign(spec.mu.size(), 1.0 / std::sqrt(static_cast<double>(spec.mu.size())));
      const TWState ic = unstable_manifold_ic(spec.mu, r_nu, lp.c_lin(), a, r_amp);
      const BarrierTrajectory traj = integrate_with_barrier(lp, lp.c_lin(), ic, r_span, r_h);
      const LemmaReport rep = verify_lemma32(traj, spec.mu, lp.c_lin(), r_horizon);
      Json crossings = Json::array();
      for (const BarrierCrossing& c : traj.crossings) crossings.push_back(io::to_json(c));
      Json report = {{"nu_status", io::nu_status_name(nu_admissible(lp.c_lin(), spec.mu, r_nu))},
                     {"crossings", crossings},
                     {"checks", io::to_json(rep)}};
      Outputs o(cr, "renorm");
      o.write("crossings.json", crossings.dump(2) + "\n");
      o.write("checks.json", io::to_json(rep).dump(2) + "\n");
      o.write("trajectory.csv", io::trajectory_csv(traj));
      o.finish({{"potential", desc},
                {"nu", r_nu},
                {"coeffs", a},
                {"amplitude", r_amp},
                {"span", r_span},
                {"step", r_h},
                {"horizon", r_horizon}});
      out << report.dump(2) << "\n";
    };
  });

  // perturb-study
  Common cp;
  double p_nu = 2.0;
  int p_n = 6;
  StudyOptions p_opts;
  auto* study_cmd = app.add_subcommand("perturb-study", "Nonlinear speed of the perturbed potentials as eps -> 0");
  add_common(study_cmd, cp);
  study_cmd->add_option("--nu", p_nu, "Perturbation strength")->capture_default_str();
  study_cmd->add_option("--n", p_n, "Largest index n (eps_n = eps0 / 2^n)")->capture_default_str();
  study_cmd->add_option("--eps0", p_opts.eps0, "eps_0")->capture_default_str();
  study_cmd->add_option("--tol", p_opts.tol, "Bisection tolerance per row")->capture_default_str();
  study_cmd->callback([&] {
    action = [&] {
      Json desc;
      const Potential v = resolve_potential(cp, desc);
      const RenormSequence seq = perturbation_sequence_study(v, p_nu, p_n, p_opts);
      Json report = io::to_json(seq);
      Outputs o(cp, "perturb-study");
      o.write("sequence.json", report.dump(2) + "\n");
      o.write("sequence.csv", io::sequence_csv(seq));
      o.finish({{"potential", desc}, {"nu", p_nu}, {"n", p_n}, {"eps0", p_opts.eps0}, {"tol", p_opts.tol}});
      out << io::sequence_csv(seq);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    // --help, --help-all and --version, printed for the subcommand that asked.
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "frontlab: " << e.what() << "\n";
    return kConfig;
  }

  if (threads > 0) parallel::set_threads(threads);
  parallel::configure_from_env();
  try {
    action();
    return kOk;
  } catch (const BracketError& e) {
    err << "frontlab: bracket failure: " << e.what() << "\n";
    return kBracket;
  } catch (const ConfigError& e) {
    err << "frontlab: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericError& e) {
    err << "frontlab: numerical failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "frontlab: configuration error: " << e.what() << "\n";
    return kConfig;
  }
}

}  // namespace frontlab::cli
