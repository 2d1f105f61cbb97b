// Experiment runner for the nested-lattice robust distributed source codec.
//
// Subcommands:
//   simulate      one (theta, mu) point from a config file
//   sweep         the whole ladder, one CSV/JSON row per point
//   theory        closed-form sum-rate and LMMSE formulas
//   lattice-info  geometry dump for a lattice description
//   validate      property suite; exit code counts failed checks

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lrdsc/experiment.hpp"
#include "lrdsc/theory.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::string out;
  std::string format;
  bool unsafe_small_mu = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool need_config = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "experiment config file (JSON)");
  if (need_config) c->required();
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--samples", opts.samples, "override the per-point sample count");
  cmd->add_option("--out", opts.out, "output path (default: config's, else stdout)");
  cmd->add_option("--format", opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--unsafe-small-mu", opts.unsafe_small_mu,
                "allow mu < 8 / degenerate boundary sets (flagged unsupported)");
}

lrdsc::ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  lrdsc::ExperimentConfig cfg = lrdsc::load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.samples) {
    cfg.samples = *opts.samples;
    cfg.samples_ladder.clear();
  }
  if (opts.unsafe_small_mu) cfg.unsafe_small_mu = true;
  if (!opts.out.empty()) cfg.out_path = opts.out;
  if (opts.format == "csv") cfg.format = lrdsc::ExperimentConfig::Format::Csv;
  if (opts.format == "json") cfg.format = lrdsc::ExperimentConfig::Format::Json;
  return cfg;
}

int run_simulate(const CommonOpts& opts, std::optional<double> theta, std::optional<int> mu) {
  auto cfg = load_with_overrides(opts);
  const double th = theta.value_or(cfg.theta_ladder.front());
  const int m = mu.value_or(cfg.mu_ladder.front());
  const std::uint64_t samples = cfg.samples_ladder.empty() ? cfg.samples : cfg.samples_ladder[0];
  const auto row = lrdsc::run_point(cfg, th, m, samples, 0);
  lrdsc::write_outcomes({row}, cfg, cfg.out_path);
  return 0;
}

int run_sweep_cmd(const CommonOpts& opts) {
  auto cfg = load_with_overrides(opts);
  const auto rows = lrdsc::run_sweep(cfg);
  lrdsc::write_outcomes(rows, cfg, cfg.out_path);
  return 0;
}

int run_validate(const CommonOpts& opts) {
  auto cfg = load_with_overrides(opts);
  const auto checks = lrdsc::validate_suite(cfg);
  int failures = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %-28s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failures;
  }
  return failures;
}

int run_theory(double h, double ds, double dc, int grid,
               const std::vector<double>& lmmse_vars) {
  if (!lmmse_vars.empty()) {
    if (lmmse_vars.size() != 5) {
      std::cerr << "--lmmse needs 5 variances: s2x,s2z1,s2z2,s2zp1,s2zp2\n";
      return 2;
    }
    const auto r = lrdsc::lmmse_rates(lmmse_vars[0], lmmse_vars[1], lmmse_vars[2],
                                      lmmse_vars[3], lmmse_vars[4]);
    std::printf("d_s1 = %.12g\nd_s2 = %.12g\nd_c  = %.12g\n", r.d_s1, r.d_s2, r.d_c);
    return 0;
  }
  if (grid <= 1) {
    std::printf("r_md = %.12g\nr_rc = %.12g\ngap  = %.12g\n", lrdsc::r_md(h, ds, dc),
                lrdsc::r_rc(h, ds, dc), lrdsc::r_rc(h, ds, dc) - lrdsc::r_md(h, ds, dc));
    return 0;
  }
  std::printf("h,d_s,d_c,r_md,r_rc\n");
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    const double hh = h * (0.5 + t);
    const double dss = ds * std::pow(10.0, -2.0 * t);
    const double dcc = dc * std::pow(10.0, -3.0 * t);
    std::printf("%.12g,%.12g,%.12g,%.12g,%.12g\n", hh, dss, dcc, lrdsc::r_md(hh, dss, dcc),
                lrdsc::r_rc(hh, dss, dcc));
  }
  return 0;
}

int run_lattice_info(const std::string& kind, int n, double scale,
                     const std::vector<double>& generator) {
  lrdsc::Lattice lat = [&] {
    if (!generator.empty()) {
      if (static_cast<int>(generator.size()) != n * n) {
        throw std::invalid_argument("generator must hold n*n row-major entries");
      }
      lrdsc::Mat rows(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) rows(i, j) = generator[i * n + j];
      }
      return lrdsc::Lattice::from_generator_rows(rows).scaled(scale);
    }
    if (kind == "hexagonal") return lrdsc::Lattice::hexagonal(scale);
    return lrdsc::Lattice::integer_grid(n, scale);
  }();
  const auto g = lat.geometry();
  const auto sep = lrdsc::nonadjacent_separation(lat);
  std::printf("dimension            %d\n", lat.dim());
  std::printf("volume               %.12g\n", g.volume);
  std::printf("covering_radius      %.12g\n", g.covering_radius);
  std::printf("inscribed_radius     %.12g\n", g.inscribed_radius);
  std::printf("second_moment        %.12g\n", g.second_moment);
  std::printf("second_moment_error  %.3g\n", g.second_moment_error);
  std::printf("nonadjacent_sep      %.12g%s\n", sep.value, sep.exact ? "" : " (bound)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-lattice robust distributed source coding experiments"};
  app.require_subcommand(1);

  CommonOpts sim_opts, sweep_opts, val_opts;
  std::optional<double> sim_theta;
  std::optional<int> sim_mu;

  auto* sim = app.add_subcommand("simulate", "run a single (theta, mu) point");
  add_common(sim, sim_opts);
  sim->add_option("--theta", sim_theta, "theta override (default: first ladder entry)");
  sim->add_option("--mu", sim_mu, "mu override (default: first ladder entry)");

  auto* sweep = app.add_subcommand("sweep", "run the whole ladder");
  add_common(sweep, sweep_opts);

  auto* val = app.add_subcommand("validate", "run the property suite");
  add_common(val, val_opts);

  double th_h = 2.0471271918136524, th_ds = 0.01, th_dc = 1e-4;
  int th_grid = 1;
  std::vector<double> lmmse_vars;
  auto* theory = app.add_subcommand("theory", "evaluate closed-form rate formulas");
  theory->add_option("--h-bits", th_h, "differential entropy h(X), bits/sample");
  theory->add_option("--ds", th_ds, "side distortion");
  theory->add_option("--dc", th_dc, "central distortion");
  theory->add_option("--grid", th_grid, "emit a CSV table with this many rows");
  theory->add_option("--lmmse", lmmse_vars,
                     "five variances s2x,s2z1,s2z2,s2zp1,s2zp2 for the LMMSE distortions")
      ->expected(5);

  std::string li_kind = "integer";
  int li_n = 1;
  double li_scale = 1.0;
  std::vector<double> li_generator;
  auto* li = app.add_subcommand("lattice-info", "dump lattice geometry");
  li->add_option("--kind", li_kind, "integer or hexagonal")
      ->check(CLI::IsMember({"integer", "hexagonal", "generic"}));
  li->add_option("--n", li_n, "dimension");
  li->add_option("--scale", li_scale, "scale factor");
  li->add_option("--generator", li_generator, "row-major generator entries (generic)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(sim_opts, sim_theta, sim_mu);
    if (sweep->parsed()) return run_sweep_cmd(sweep_opts);
    if (val->parsed()) return run_validate(val_opts);
    if (theory->parsed()) return run_theory(th_h, th_ds, th_dc, th_grid, lmmse_vars);
    if (li->parsed()) return run_lattice_info(li_kind, li_n, li_scale, li_generator);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
