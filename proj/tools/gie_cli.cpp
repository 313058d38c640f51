#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gie.h"

namespace {

int fail(int code) {
  std::cerr << "error: " << gie_last_error() << "\n";
  return code;
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  gie_string_free(s);
  return out;
}

std::vector<const char*> as_ptrs(const std::vector<std::string>& v) {
  std::vector<const char*> p;
  for (const auto& s : v) p.push_back(s.c_str());
  return p;
}

int write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) {
    std::cerr << "error: cannot write output file '" << path << "'\n";
    return 2;
  }
  return 0;
}

struct ConfigArgs {
  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "config file (key = value lines)");
    app->add_option("--preset", preset, "built-in config: headline, sphere");
    app->add_option("--set", sets, "override, key=value (repeatable)");
  }

  int load(gie_config** out) const {
    auto ptrs = as_ptrs(sets);
    int rc;
    if (!preset.empty())
      rc = gie_config_preset(preset.c_str(), ptrs.data(), ptrs.size(), out);
    else if (!config_path.empty())
      rc = gie_config_load(config_path.c_str(), ptrs.data(), ptrs.size(), out);
    else
      rc = gie_config_parse("", ptrs.data(), ptrs.size(), out);
    if (rc != GIE_OK) return rc;
    char* echo = nullptr;
    if (gie_config_echo(*out, &echo) == GIE_OK)
      std::cerr << "# resolved configuration\n" << take_string(echo);
    return GIE_OK;
  }
};

struct AxisArg {
  std::string name;
  double min = 0.0, max = 0.0;
  int points = 2;
  bool log_scale = false;
};

int parse_axis(const std::string& s, AxisArg& out) {
  // name:min:max:points[:log|lin]
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto colon = s.find(':', pos);
    parts.push_back(s.substr(pos, colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() < 4 || parts.size() > 5) {
    std::cerr << "error: axis '" << s
              << "' is not of the form name:min:max:points[:log]\n";
    return 2;
  }
  try {
    out.name = parts[0];
    out.min = std::stod(parts[1]);
    out.max = std::stod(parts[2]);
    out.points = std::stoi(parts[3]);
    out.log_scale = parts.size() == 5 && parts[4] == "log";
    if (parts.size() == 5 && parts[4] != "log" && parts[4] != "lin") {
      std::cerr << "error: axis scale '" << parts[4] << "' must be log or lin\n";
      return 2;
    }
  } catch (const std::exception&) {
    std::cerr << "error: non-numeric field in axis '" << s << "'\n";
    return 2;
  }
  return 0;
}

void print_report(const char* tag, const gie_snr_report& rep) {
  std::printf("%s.signal = %.17g\n", tag, rep.signal);
  std::printf("%s.variance = %.17g\n", tag, rep.variance);
  std::printf("%s.snr = %.17g\n", tag, rep.snr);
  std::printf("%s.regime = %s\n", tag,
              rep.log_domain ? "log-domain" : "exact");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Entanglement-through-gravity estimator: exact Fock oracle, closed-form "
      "SNR engine, spheroid couplings and parameter scans"};
  app.require_subcommand(1);

  // oracle / analytic / compare share the dimensionless parameter set.
  struct {
    uint64_t n = 4;
    double gamma = 0.0, lambda = 0.0;
    double delta = M_PI / 2, mu = 0.0, nu = 0.0;
    uint64_t reps = 2;
    std::string scheme = "one-open";
  } dim;
  auto add_dim = [&](CLI::App* sub, bool with_scheme) {
    sub->add_option("--n", dim.n, "atoms per interferometer");
    sub->add_option("--gamma", dim.gamma, "effective self-phase");
    sub->add_option("--lambda", dim.lambda, "cross-phase");
    sub->add_option("--delta", dim.delta, "open-scheme phase (phi - close)");
    sub->add_option("--mu", dim.mu, "closed-scheme ab phase (close - phi)");
    sub->add_option("--nu", dim.nu, "closed-scheme cd phase (close' - phi')");
    sub->add_option("--reps", dim.reps, "repetitions M");
    if (with_scheme)
      sub->add_option("--scheme", dim.scheme, "one-open or both-closed");
  };

  auto* oracle = app.add_subcommand(
      "oracle", "exact fixed-N Fock simulation (N <= 64)");
  add_dim(oracle, true);
  auto* analytic = app.add_subcommand(
      "analytic", "closed-form signal, variance and SNR");
  add_dim(analytic, true);
  auto* compare = app.add_subcommand(
      "compare", "analytic engine vs Fock oracle, per-quantity diff table");
  add_dim(compare, false);

  ConfigArgs cfg_args;
  std::string out_path, format = "csv", scan_preset;
  std::vector<std::string> axis_strings;
  double density_cap = 1e16, t_total = 0.0, touch_density = 0.0;
  double touch_aspect = 0.0;
  double contour_target = 1.0;
  double suppression_threshold = 0.0;
  double opt_d_over_c = 0.0;

  auto* coupling = app.add_subcommand(
      "coupling", "gravitational coupling constants for a configuration");
  cfg_args.attach(coupling);
  coupling->add_option("--d", "shorthand for --set d_m=VALUE");
  coupling->add_option("--species", "shorthand for --set species=VALUE");
  coupling->add_option("--suppression-threshold", suppression_threshold,
                       "also print the a_s suppression orders vs this "
                       "threshold");
  coupling->add_option("--optimal-ellipticity", opt_d_over_c,
                       "also optimize ellipticity at fixed volume with "
                       "d = VALUE * c");

  auto* scan = app.add_subcommand("scan", "grid scan of effective SNR");
  cfg_args.attach(scan);
  scan->add_option("--scan-preset", scan_preset,
                   "built-in scan: figure3, figure3-contour");
  scan->add_option("--axis", axis_strings,
                   "axis as name:min:max:points[:log], up to 3 (names: d_m, "
                   "time_s, atoms, squeeze_db, a_s_m, reps)");
  scan->add_option("--density-cap", density_cap, "density_ok cap, cm^-3");
  scan->add_option("--t-total", t_total,
                   "total campaign time; sets reps = T/t per point");
  scan->add_option("--touching-density", touch_density,
                   "tie geometry to separation: c = d/2, volume from this "
                   "target density (cm^-3)");
  scan->add_option("--touching-aspect", touch_aspect,
                   "tie geometry to separation at fixed shape: c = d/2, "
                   "a = c/sqrt(1 - e^2) at this ellipticity");
  scan->add_option("--format", format, "csv, json or svg");
  scan->add_option("--out,-o", out_path, "output path (default stdout)");

  auto* contour = app.add_subcommand(
      "contour", "SNR = target contour of a 2-axis scan");
  cfg_args.attach(contour);
  contour->add_option("--scan-preset", scan_preset,
                      "built-in scan: figure3 (d x t plane at 1e16 atoms)");
  contour->add_option("--axis", axis_strings, "axis, exactly 2");
  contour->add_option("--t-total", t_total, "total campaign time");
  contour->add_option("--touching-density", touch_density,
                      "geometry rule target density (cm^-3)");
  contour->add_option("--touching-aspect", touch_aspect,
                      "geometry rule fixed ellipticity");
  contour->add_option("--target", contour_target, "contour level");
  contour->add_option("--out,-o", out_path, "output path (default stdout)");

  std::string run_preset;
  auto* presets = app.add_subcommand("presets", "built-in configurations");
  presets->add_option("--run", run_preset,
                      "evaluate a config preset end-to-end and print the "
                      "full report");

  // Map the coupling shorthands onto --set before loading.
  coupling->callback([&] {
    for (const auto* opt : coupling->get_options()) {
      if (opt->get_name() == "--d" && opt->count())
        cfg_args.sets.push_back("d_m=" + opt->results().back());
      if (opt->get_name() == "--species" && opt->count())
        cfg_args.sets.push_back("species=" + opt->results().back());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (oracle->parsed()) {
    if (dim.n > 64) {
      std::cerr << "error: the oracle is exact and capped at n = 64\n";
      return 2;
    }
    double s = 0.0, v = 0.0, purity = 0.0;
    int rc = dim.scheme == "both-closed"
                 ? gie_oracle_closed((int)dim.n, dim.gamma, dim.lambda, dim.mu,
                                     dim.nu, (long long)dim.reps, &s, &v)
                 : gie_oracle_open((int)dim.n, dim.gamma, dim.lambda, dim.delta,
                                   (long long)dim.reps, &s, &v);
    if (rc != GIE_OK) return fail(rc);
    rc = gie_oracle_purity((int)dim.n, dim.lambda, &purity);
    if (rc != GIE_OK) return fail(rc);
    std::printf("signal = %.17g\n", s);
    std::printf("variance = %.17g\n", v);
    std::printf("snr = %.17g\n", std::fabs(s) / std::sqrt(v));
    std::printf("purity = %.17g\n", purity);
    return 0;
  }

  if (analytic->parsed()) {
    gie_snr_report rep;
    int rc = dim.scheme == "both-closed"
                 ? gie_snr_closed(dim.n, dim.gamma, dim.lambda, dim.mu, dim.nu,
                                  dim.reps, &rep)
                 : gie_snr_open(dim.n, dim.gamma, dim.lambda, dim.delta,
                                dim.reps, &rep);
    if (rc != GIE_OK) return fail(rc);
    print_report("snr", rep);
    double purity = 0.0, renyi2 = 0.0;
    rc = gie_purity(dim.n, dim.lambda, &purity, &renyi2);
    if (rc != GIE_OK) return fail(rc);
    std::printf("purity = %.17g\n", purity);
    std::printf("renyi2 = %.17g\n", renyi2);
    return 0;
  }

  if (compare->parsed()) {
    if (dim.n > 64) {
      std::cerr << "error: comparison needs the exact oracle, n <= 64\n";
      return 2;
    }
    char* table = nullptr;
    int pass = 0;
    int rc = gie_compare((int)dim.n, dim.gamma, dim.lambda, dim.delta, dim.mu,
                         dim.nu, (long long)dim.reps, &table, &pass);
    if (rc != GIE_OK) return fail(rc);
    std::cout << take_string(table);
    std::cout << (pass ? "PASS" : "FAIL")
              << " (tolerance 1e-9 relative / 1e-10 absolute)\n";
    return pass ? 0 : 1;
  }

  if (coupling->parsed()) {
    gie_config* cfg = nullptr;
    int rc = cfg_args.load(&cfg);
    if (rc != GIE_OK) return fail(rc);
    gie_couplings cs;
    rc = gie_couplings_eval(cfg, &cs);
    if (rc != GIE_OK) {
      gie_config_free(cfg);
      return fail(rc);
    }
    std::printf("lambda_prime_cross_J = %.17g\n", cs.lp_cross_j);
    std::printf("abs_lambda_prime_cross_J = %.17g\n", std::fabs(cs.lp_cross_j));
    std::printf("lambda_prime_self_J = %.17g\n", cs.lp_self_j);
    std::printf("kappa_prime_self_J = %.17g\n", cs.kp_self_j);
    std::printf("lambda = %.17g\n", cs.lambda);
    std::printf("lambda_s = %.17g\n", cs.lambda_s);
    std::printf("kappa_s = %.17g\n", cs.kappa_s);
    std::printf("gamma = %.17g\n", cs.gamma);
    if (suppression_threshold > 0.0) {
      double orders = 0.0;
      rc = gie_scattering_suppression(cfg, suppression_threshold, &orders);
      if (rc != GIE_OK) {
        gie_config_free(cfg);
        return fail(rc);
      }
      std::printf("suppression_orders = %.17g\n", orders);
    }
    if (opt_d_over_c > 0.0) {
      char* echo = nullptr;
      gie_config_echo(cfg, &echo);
      std::string text = take_string(echo);
      gie_config_free(cfg);
      auto grab = [&](const std::string& key) {
        auto pos = text.find(key + " = ");
        return std::stod(text.substr(pos + key.size() + 3));
      };
      const double a = grab("a_m");
      const double c = grab("c_m");
      const double m = grab("atom_mass_kg");
      const double volume = 4.0 / 3.0 * M_PI * a * a * c;
      double e_star = 0.0, enh = 0.0, coup = 0.0;
      rc = gie_optimal_ellipticity(opt_d_over_c, volume, m, 0.0, &e_star, &enh,
                                   &coup);
      if (rc != GIE_OK) return fail(rc);
      std::printf("optimal_e = %.17g\n", e_star);
      std::printf("enhancement = %.17g\n", enh);
      std::printf("optimal_coupling_J = %.17g\n", coup);
      return 0;
    }
    gie_config_free(cfg);
    return 0;
  }

  if (scan->parsed() || contour->parsed()) {
    gie_scan* sc = nullptr;
    int rc;
    if (!scan_preset.empty()) {
      std::string name = scan_preset;
      if (contour->parsed() && name == "figure3") name = "figure3-contour";
      rc = gie_scan_preset(name.c_str(), &sc);
      if (rc != GIE_OK) return fail(rc);
    } else {
      gie_config* cfg = nullptr;
      rc = cfg_args.load(&cfg);
      if (rc != GIE_OK) return fail(rc);
      rc = gie_scan_create(cfg, &sc);
      gie_config_free(cfg);
      if (rc != GIE_OK) return fail(rc);
    }
    for (const auto& s : axis_strings) {
      AxisArg ax;
      int arc = parse_axis(s, ax);
      if (arc != 0) {
        gie_scan_free(sc);
        return arc;
      }
      rc = gie_scan_add_axis(sc, ax.name.c_str(), ax.min, ax.max, ax.points,
                             ax.log_scale ? 1 : 0);
      if (rc != GIE_OK) {
        gie_scan_free(sc);
        return fail(rc);
      }
    }
    if (scan->count("--density-cap")) {
      rc = gie_scan_set_density_cap(sc, density_cap);
      if (rc != GIE_OK) {
        gie_scan_free(sc);
        return fail(rc);
      }
    }
    if (t_total > 0.0) {
      rc = gie_scan_set_total_time(sc, t_total);
      if (rc != GIE_OK) {
        gie_scan_free(sc);
        return fail(rc);
      }
    }
    if (touch_density > 0.0) {
      rc = gie_scan_set_touching_density(sc, touch_density);
      if (rc != GIE_OK) {
        gie_scan_free(sc);
        return fail(rc);
      }
    }
    if (touch_aspect > 0.0) {
      rc = gie_scan_set_touching_aspect(sc, touch_aspect);
      if (rc != GIE_OK) {
        gie_scan_free(sc);
        return fail(rc);
      }
    }
    char* data = nullptr;
    if (contour->parsed()) {
      rc = gie_scan_contour(sc, contour_target, &data);
    } else {
      rc = gie_scan_run(sc);
      if (rc == GIE_OK) rc = gie_scan_export(sc, format.c_str(), &data);
    }
    gie_scan_free(sc);
    if (rc != GIE_OK) return fail(rc);
    return write_output(out_path, take_string(data));
  }

  if (presets->parsed()) {
    if (run_preset.empty()) {
      std::printf(
          "config presets\n"
          "  headline   unsqueezed 1e16-atom erbium reference (touching "
          "spheres at 1e12 cm^-3, t = 1e4 s, 1000 reps x 10 setups)\n"
          "  sphere     two erbium unit spheres (a = c = 1 cm); set d_m via "
          "--set\n"
          "scan presets\n"
          "  figure3    d x t x atoms SNR surface (erbium, 35 dB, 5 setups, "
          "T_total = 1e7 s, touching fixed-aspect geometry at e = 0.98)\n"
          "  figure3-contour  the d x t plane of figure3 at 1e16 atoms\n");
      return 0;
    }
    gie_config* cfg = nullptr;
    const char* const* ov = nullptr;
    int rc = gie_config_preset(run_preset.c_str(), ov, 0, &cfg);
    if (rc != GIE_OK) return fail(rc);
    char* echo = nullptr;
    if (gie_config_echo(cfg, &echo) == GIE_OK)
      std::cerr << "# resolved configuration\n" << take_string(echo);
    char* report = nullptr;
    rc = gie_report(cfg, &report);
    gie_config_free(cfg);
    if (rc != GIE_OK) return fail(rc);
    std::cout << take_string(report);
    return 0;
  }

  return 2;
}
