#include "polystar/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "polystar/chandra.hpp"
#include "polystar/collapse.hpp"
#include "polystar/eos.hpp"
#include "polystar/errors.hpp"
#include "polystar/hfb_bounds.hpp"
#include "polystar/lane_emden.hpp"

namespace polystar::cli {

namespace {

using json = nlohmann::ordered_json;

// Usage-level failure discovered after flag parsing (still exit code 1).
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json config_json(const RunConfig& cfg) {
  return json{{"q", cfg.q},          {"m", cfg.m},
              {"grid_nodes", cfg.grid_nodes}, {"tol", cfg.tol},
              {"seed", cfg.seed},    {"format", cfg.format},
              {"jobs", cfg.jobs}};
}

json meta_json() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return json{{"tool", "polystar"}, {"generated_at", buf}};
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, path, out);
    } else if (value.is_array()) {
      out << path << " = [" << value.size() << " values]\n";
    } else {
      out << path << " = " << value.dump() << '\n';
    }
  }
}

// One header row and one data row: the result's scalar leaves, with the
// resolved config embedded as leading columns.
void csv_scalar_row(const json& report, std::ostream& out) {
  std::vector<std::string> names;
  std::vector<std::string> cells;
  std::function<void(const json&, const std::string&)> walk = [&](const json& j,
                                                                  const std::string& prefix) {
    for (const auto& [key, value] : j.items()) {
      const std::string path = prefix.empty() ? key : prefix + "." + key;
      if (value.is_object())
        walk(value, path);
      else if (!value.is_array()) {
        names.push_back(path);
        cells.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
  };
  walk(report["config"], "config");
  walk(report["result"], "");
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names[i] << (i + 1 < names.size() ? "," : "\n");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void emit_report(const RunConfig& cfg, const json& report, std::ostream& out,
                 const std::function<void(std::ostream&)>& csv_writer = nullptr) {
  if (cfg.format == "json") {
    out << report.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    if (csv_writer)
      csv_writer(out);
    else
      csv_scalar_row(report, out);
  } else {  // plain
    flatten(report, "", out);
  }
}

json wrap(const RunConfig& cfg, json result) {
  json report;
  report["config"] = config_json(cfg);
  if (!cfg.no_meta) report["meta"] = meta_json();
  report["result"] = std::move(result);
  return report;
}

json profile_json(const radial::RadialDensity& rho) {
  return json{{"grid", rho.grid.nodes()}, {"values", rho.values}};
}

void write_profile_file(const std::string& path, const radial::RadialDensity& rho) {
  std::ofstream f(path);
  if (!f) throw usage_error("cannot open profile output file: " + path);
  radial::write_two_column(f, rho);
}

unsigned resolve_jobs(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("POLYSTAR_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::vector<double> parse_fracs(const std::string& text) {
  std::vector<double> fracs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw usage_error("--eps-fracs: cannot parse '" + item + "'");
    }
    if (pos != item.size() || !(v > 0.0) || !(v < 1.0))
      throw usage_error("--eps-fracs: entries must be numbers in (0, 1)");
    fracs.push_back(v);
  }
  if (fracs.empty()) throw usage_error("--eps-fracs: empty list");
  return fracs;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_lane_emden(const RunConfig& cfg, const std::string& profile_out,
                   const std::string& profile_json_out, std::ostream& out) {
  const auto raw = lane_emden::solve_lane_emden(std::min(cfg.tol, 1e-10));
  const auto profile = lane_emden::build_profile(raw, cfg.grid_nodes);
  const eos::ParticleParams p{cfg.q, cfg.m};
  const double tc = lane_emden::tau_c(profile, cfg.q);
  const double lam = lane_emden::lambda_const(profile, p);

  json result{{"xi1", profile.xi1},
              {"mu3", profile.mu3},
              {"sigma_f", profile.sigma_f},
              {"tau_c", tc},
              {"lambda", lam},
              {"two_lambda", 2.0 * lam},
              {"I_43", profile.I_43},
              {"I_23", profile.I_23},
              {"DQQ", profile.DQQ},
              {"support_radius", profile.support_radius},
              {"A", profile.amplitude},
              {"omega", profile.omega}};

  if (!profile_out.empty()) write_profile_file(profile_out, profile.Q);
  if (!profile_json_out.empty()) {
    std::ofstream f(profile_json_out);
    if (!f) throw usage_error("cannot open profile output file: " + profile_json_out);
    json full{{"xi1", profile.xi1},   {"mu3", profile.mu3}, {"sigma_f", profile.sigma_f},
              {"A", profile.amplitude}, {"omega", profile.omega}, {"I_43", profile.I_43},
              {"I_23", profile.I_23}, {"DQQ", profile.DQQ}};
    full.update(profile_json(profile.Q));
    f << full.dump(2) << '\n';
  }
  emit_report(cfg, wrap(cfg, std::move(result)), out);
  return 0;
}

int cmd_chandra(const RunConfig& cfg, double tau, double tau_frac,
                const std::string& profile_out, std::ostream& out) {
  const eos::ParticleParams p{cfg.q, cfg.m};
  const auto& profile = lane_emden::universal_profile();
  const double tc = lane_emden::tau_c(profile, cfg.q);
  double tau_abs = tau;
  if (std::isnan(tau_abs)) tau_abs = tau_frac * tc;

  const auto model = chandra::solve_minimizer(tau_abs, p, cfg.tol, cfg.grid_nodes);
  json result{{"tau", model.tau},
              {"tau_frac", model.tau / tc},
              {"q", cfg.q},
              {"m", cfg.m},
              {"u_c", model.u_c},
              {"mu", model.mu},
              {"R_star", model.surface_radius},
              {"mass", model.mass},
              {"el_residual", model.el_residual},
              {"energy",
               json{{"kinetic", model.energy.kinetic},
                    {"direct", model.energy.direct},
                    {"total", model.energy.total}}}};
  if (cfg.format == "json") result["profile"] = profile_json(model.rho);
  if (!profile_out.empty()) write_profile_file(profile_out, model.rho);
  emit_report(cfg, wrap(cfg, std::move(result)), out);
  return 0;
}

int cmd_collapse(const RunConfig& cfg, const std::string& fracs_text, std::ostream& out) {
  const std::vector<double> fracs = parse_fracs(fracs_text);
  const eos::ParticleParams p{cfg.q, cfg.m};
  const auto& profile = lane_emden::universal_profile();
  const double tc = lane_emden::tau_c(profile, cfg.q);
  const double two_lambda = 2.0 * lane_emden::lambda_const(profile, p);

  std::vector<double> taus;
  taus.reserve(fracs.size());
  for (double f : fracs) taus.push_back(tc - f * tc);
  const auto records = collapse::sweep(taus, p, cfg.jobs, std::min(cfg.tol, 1e-9));

  json rec_array = json::array();
  for (const auto& r : records) {
    json jr{{"tau", r.tau},           {"eps", r.eps},
            {"E", r.E},               {"ratio", r.ratio},
            {"kinetic_scaled", r.kinetic_scaled}, {"d1", r.d1},
            {"d43", r.d43},           {"status", r.ok ? "ok" : "failed"}};
    if (!r.ok) jr["error"] = r.error;
    rec_array.push_back(std::move(jr));
  }
  json result{{"two_lambda", two_lambda}, {"records", std::move(rec_array)}};
  try {
    const auto fit = collapse::fit_two_lambda(records);
    result["fit"] = json{{"intercept", fit.intercept},
                         {"slope", fit.slope},
                         {"r_squared", fit.r_squared}};
  } catch (const std::domain_error&) {
    result["fit"] = nullptr;
  }

  auto csv_writer = [&](std::ostream& os) {
    for (const auto& [key, value] : config_json(cfg).items())
      os << "# config." << key << ' ' << value.dump() << '\n';
    os << "tau,eps,E,ratio,kinetic_scaled,d1,d43,status\n";
    for (const auto& r : records)
      os << fmt(r.tau) << ',' << fmt(r.eps) << ',' << fmt(r.E) << ',' << fmt(r.ratio) << ','
         << fmt(r.kinetic_scaled) << ',' << fmt(r.d1) << ',' << fmt(r.d43) << ','
         << (r.ok ? "ok" : "failed") << '\n';
    if (result["fit"].is_object()) {
      os << "# fit.intercept " << fmt(result["fit"]["intercept"].get<double>()) << '\n';
      os << "# fit.slope " << fmt(result["fit"]["slope"].get<double>()) << '\n';
      os << "# fit.r_squared " << fmt(result["fit"]["r_squared"].get<double>()) << '\n';
      os << "# two_lambda " << fmt(two_lambda) << '\n';
    }
  };
  emit_report(cfg, wrap(cfg, std::move(result)), out, csv_writer);
  return 0;
}

int cmd_hfb_bounds(const RunConfig& cfg, double n_particles, double beta, std::ostream& out) {
  const eos::ParticleParams p{cfg.q, cfg.m};
  const hfb::Sandwich s = hfb::sandwich(n_particles, beta, p);
  json result{{"N", s.n_particles},
              {"beta", s.beta},
              {"tau_N", s.tau_n},
              {"kappa", s.kappa},
              {"eps_ly", s.eps_ly},
              {"kappa_prime", std::isfinite(s.kappa_prime) ? json(s.kappa_prime) : json(nullptr)},
              {"tau_prime", std::isfinite(s.tau_prime) ? json(s.tau_prime) : json(nullptr)},
              {"valid", s.valid},
              {"beta_warning", s.beta_warning},
              {"violated", s.valid ? json(nullptr) : json(s.violated)},
              {"lower", std::isnan(s.lower) ? json(nullptr) : json(s.lower)},
              {"upper", s.upper},
              {"reference", s.reference},
              {"n_hfb_estimate", s.n_hfb_estimate}};
  emit_report(cfg, wrap(cfg, std::move(result)), out);
  return 0;
}

int cmd_hls_check(const RunConfig& cfg, std::size_t samples, std::ostream& out) {
  const eos::ParticleParams p{cfg.q, cfg.m};
  const double tc = lane_emden::tau_c(lane_emden::universal_profile(), cfg.q);
  std::mt19937_64 rng(cfg.seed);
  double min_deficit = std::numeric_limits<double>::infinity();
  double max_deficit = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto rho = random_density(rng);
    const double d = radial::hls_deficit(rho, p, tc);
    min_deficit = std::min(min_deficit, d);
    max_deficit = std::max(max_deficit, d);
    sum += d;
  }
  json result{{"samples", samples},
              {"seed", cfg.seed},
              {"tau_c", tc},
              {"min_deficit", min_deficit},
              {"max_deficit", max_deficit},
              {"mean_deficit", sum / static_cast<double>(samples)}};
  emit_report(cfg, wrap(cfg, std::move(result)), out);
  return 0;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--q", cfg.q, "spin multiplicity (integer >= 1)")
      ->check(CLI::Range(1, 1 << 20));
  sub->add_option("--m", cfg.m, "particle mass (energy units, >= 0)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--grid-nodes", cfg.grid_nodes, "radial grid resolution")
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
  sub->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "seed for randomized checks");
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  sub->add_flag("--no-meta", cfg.no_meta, "omit the timestamp block from reports");
}

}  // namespace

radial::RadialDensity random_density(std::mt19937_64& rng) {
  const radial::RadialGrid grid = radial::RadialGrid::uniform(12.0, 1024);
  std::vector<double> values(grid.size(), 0.0);
  std::uniform_int_distribution<int> n_comp_dist(1, 3);
  std::uniform_int_distribution<int> kind_dist(0, 1);
  std::uniform_real_distribution<double> radius_dist(0.3, 4.0);
  std::uniform_real_distribution<double> scale_dist(0.3, 2.0);
  std::uniform_real_distribution<double> amp_dist(0.05, 1.0);

  const int n_comp = n_comp_dist(rng);
  for (int c = 0; c < n_comp; ++c) {
    const bool ball = kind_dist(rng) == 0;
    const double amp = amp_dist(rng);
    if (ball) {
      const double radius = radius_dist(rng);
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.nodes()[i] <= radius) values[i] += amp;
    } else {
      const double scale = scale_dist(rng);
      for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] += amp * std::exp(-grid.nodes()[i] / scale);
    }
  }
  return radial::RadialDensity(grid, std::move(values));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"polystar: relativistic polytrope collapse toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::function<int()> action;

  // lane-emden
  {
    auto* sub = app.add_subcommand("lane-emden",
                                   "universal blow-up profile and its constants");
    auto pout = std::make_shared<std::string>();
    auto pjson = std::make_shared<std::string>();
    add_common_options(sub, cfg);
    sub->add_option("--profile-out", *pout, "write the profile as two-column text");
    sub->add_option("--profile-json", *pjson, "write the full profile export as JSON");
    sub->callback([&, pout, pjson] {
      action = [&, pout, pjson] { return cmd_lane_emden(cfg, *pout, *pjson, out); };
    });
  }

  // chandra
  {
    auto* sub = app.add_subcommand("chandra", "solve the unit-mass minimizer at coupling tau");
    auto tau = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto tau_frac = std::make_shared<double>(std::numeric_limits<double>::quiet_NaN());
    auto pout = std::make_shared<std::string>();
    add_common_options(sub, cfg);
    auto* otau = sub->add_option("--tau", *tau, "absolute coupling");
    auto* ofrac = sub->add_option("--tau-frac", *tau_frac, "coupling as a fraction of tau_c")
                      ->check(CLI::PositiveNumber);
    otau->excludes(ofrac);
    sub->add_option("--profile-out", *pout, "write the density as two-column text");
    sub->callback([&, tau, tau_frac, pout] {
      action = [&, tau, tau_frac, pout] {
        if (std::isnan(*tau) && std::isnan(*tau_frac))
          throw usage_error("chandra: one of --tau or --tau-frac is required");
        return cmd_chandra(cfg, *tau, *tau_frac, *pout, out);
      };
    });
  }

  // collapse
  {
    auto* sub = app.add_subcommand("collapse", "sweep tau toward tau_c and fit 2*Lambda");
    auto fracs = std::make_shared<std::string>("1e-1,3e-2,1e-2,3e-3,1e-3,3e-4,1e-4");
    auto jobs = std::make_shared<unsigned>(0);
    add_common_options(sub, cfg);
    sub->add_option("--eps-fracs", *fracs, "comma-separated eps/tau_c values in (0,1)");
    sub->add_option("--jobs", *jobs, "parallel solver count (default: logical cores)");
    sub->callback([&, fracs, jobs] {
      action = [&, fracs, jobs] {
        cfg.jobs = resolve_jobs(*jobs);
        return cmd_collapse(cfg, *fracs, out);
      };
    });
  }

  // hfb-bounds
  {
    auto* sub = app.add_subcommand("hfb-bounds",
                                   "explicit energy sandwich at tau_N = tau_c - N^{-beta}");
    auto n = std::make_shared<double>(0.0);
    auto beta = std::make_shared<double>(0.05);
    add_common_options(sub, cfg);
    sub->add_option("--n", *n, "particle number N (>= 1)")
        ->required()
        ->check(CLI::Range(1.0, 1e30));
    sub->add_option("--beta", *beta, "gap exponent in tau_N = tau_c - N^{-beta}")
        ->check(CLI::PositiveNumber);
    sub->callback([&, n, beta] {
      action = [&, n, beta] { return cmd_hfb_bounds(cfg, *n, *beta, out); };
    });
  }

  // hls-check
  {
    auto* sub = app.add_subcommand("hls-check",
                                   "sharp-inequality deficit on random radial densities");
    auto samples = std::make_shared<std::size_t>(100);
    add_common_options(sub, cfg);
    sub->add_option("--samples", *samples, "number of random densities")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    sub->callback([&, samples] {
      action = [&, samples] { return cmd_hls_check(cfg, *samples, out); };
    });
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("polystar");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << "run with --help for usage\n";
    return 1;
  }

  try {
    if (!action) {
      err << "no subcommand selected; run with --help for usage\n";
      return 1;
    }
    cfg.jobs = cfg.jobs == 0 ? resolve_jobs(0) : cfg.jobs;
    return action();
  } catch (const usage_error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const invalid_regime_error& e) {
    err << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    err << e.what() << '\n';
    return 3;
  } catch (const solver_error& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace polystar::cli
