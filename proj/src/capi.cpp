#include "gie.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>

#include "gie/analytic.hpp"
#include "gie/config.hpp"
#include "gie/experiment.hpp"
#include "gie/fock.hpp"
#include "gie/scan.hpp"
#include "gie/spheroid.hpp"

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return GIE_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return GIE_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GIE_ERR_NUMERIC;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gie_snr_report to_c(const gie::analytic::SnrReport& rep) {
  gie_snr_report out;
  out.signal = rep.signal;
  out.variance = rep.variance;
  out.snr = rep.snr;
  out.log_domain =
      rep.regime == gie::analytic::SnrReport::Regime::LogDomainApprox ? 1 : 0;
  return out;
}

std::vector<std::string> to_overrides(const char* const* overrides,
                                      size_t n_overrides) {
  std::vector<std::string> v;
  for (size_t i = 0; i < n_overrides; ++i) {
    if (!overrides[i]) throw std::invalid_argument("null override string");
    v.emplace_back(overrides[i]);
  }
  return v;
}

void check_out(const void* p) {
  if (!p) throw std::invalid_argument("null output pointer");
}

gie::fock::JointState oracle_open_state(int atoms, double gamma, double lambda,
                                        double delta) {
  return gie::fock::paper_evolved_state(atoms, delta, 0.0, gamma, lambda);
}

gie::fock::JointState oracle_closed_state(int atoms, double gamma,
                                          double lambda, double mu, double nu) {
  auto st = gie::fock::paper_evolved_state(atoms, 0.0, 0.0, gamma, lambda);
  gie::fock::close_interferometer(st, gie::fock::Side::AB, -M_PI / 4, mu);
  gie::fock::close_interferometer(st, gie::fock::Side::CD, -M_PI / 4, nu);
  return st;
}

}  // namespace

struct gie_config {
  gie::experiment::ExperimentConfig cfg;
};

struct gie_scan {
  gie::scan::ScanSpec spec;
  gie::scan::ScanResult result;
  bool ran = false;
};

extern "C" {

const char* gie_last_error(void) { return g_last_error.c_str(); }

void gie_string_free(char* s) { std::free(s); }

int gie_snr_open(uint64_t atoms, double gamma, double lambda, double delta,
                 uint64_t reps, gie_snr_report* out) {
  return guarded([&] {
    check_out(out);
    gie::analytic::OpenSchemeParams p{atoms, gamma, lambda, delta, reps};
    *out = to_c(gie::analytic::snr_open(p));
  });
}

int gie_snr_closed(uint64_t atoms, double gamma, double lambda, double mu,
                   double nu, uint64_t reps, gie_snr_report* out) {
  return guarded([&] {
    check_out(out);
    gie::analytic::ClosedSchemeParams p{atoms, gamma, lambda, mu, nu, reps};
    *out = to_c(gie::analytic::snr_closed(p));
  });
}

int gie_purity(uint64_t atoms, double lambda, double* purity, double* renyi2) {
  return guarded([&] {
    check_out(purity);
    auto res = gie::analytic::purity_analytic(atoms, lambda);
    *purity = res.purity;
    if (renyi2) *renyi2 = res.renyi2;
  });
}

int gie_snr_single(uint64_t atoms, double gamma, double delta, uint64_t reps,
                   double* out) {
  return guarded([&] {
    check_out(out);
    *out = gie::analytic::snr_single(atoms, gamma, delta, reps);
  });
}

int gie_oracle_open(int atoms, double gamma, double lambda, double delta,
                    long long reps, double* signal, double* variance) {
  return guarded([&] {
    check_out(signal);
    check_out(variance);
    auto st = oracle_open_state(atoms, gamma, lambda, delta);
    *signal = gie::fock::covariance_S(st, 0.0);
    *variance = gie::fock::estimator_variance_S(st, 0.0, reps);
  });
}

int gie_oracle_closed(int atoms, double gamma, double lambda, double mu,
                      double nu, long long reps, double* signal,
                      double* variance) {
  return guarded([&] {
    check_out(signal);
    check_out(variance);
    auto st = oracle_closed_state(atoms, gamma, lambda, mu, nu);
    gie::fock::SpinOperatorSpec za{gie::fock::Side::AB};
    gie::fock::SpinOperatorSpec zc{gie::fock::Side::CD};
    *signal = gie::fock::covariance_general(st, za, zc);
    *variance = gie::fock::estimator_variance_general(st, za, zc, reps);
  });
}

int gie_oracle_purity(int atoms, double lambda, double* purity) {
  return guarded([&] {
    check_out(purity);
    auto st = gie::fock::paper_evolved_state(atoms, 0.0, 0.0, 0.0, lambda);
    *purity = gie::fock::purity_ab(st);
  });
}

int gie_compare(int atoms, double gamma, double lambda, double delta, double mu,
                double nu, long long reps, char** table, int* pass) {
  return guarded([&] {
    check_out(table);
    check_out(pass);
    struct Row {
      const char* name;
      double analytic, oracle;
    };
    std::vector<Row> rows;

    gie::analytic::OpenSchemeParams po{
        (uint64_t)atoms, gamma, lambda, delta, (uint64_t)reps};
    auto so = oracle_open_state(atoms, gamma, lambda, delta);
    rows.push_back({"signal_open", gie::analytic::signal_open(po),
                    gie::fock::covariance_S(so, 0.0)});
    rows.push_back({"variance_open", gie::analytic::variance_open(po),
                    gie::fock::estimator_variance_S(so, 0.0, reps)});

    gie::analytic::ClosedSchemeParams pc{
        (uint64_t)atoms, gamma, lambda, mu, nu, (uint64_t)reps};
    auto sc = oracle_closed_state(atoms, gamma, lambda, mu, nu);
    gie::fock::SpinOperatorSpec za{gie::fock::Side::AB};
    gie::fock::SpinOperatorSpec zc{gie::fock::Side::CD};
    rows.push_back({"signal_closed", gie::analytic::signal_closed(pc),
                    gie::fock::covariance_general(sc, za, zc)});
    rows.push_back({"variance_closed", gie::analytic::variance_closed(pc),
                    gie::fock::estimator_variance_general(sc, za, zc, reps)});

    auto pur = gie::analytic::purity_analytic(atoms, lambda);
    auto sp = gie::fock::paper_evolved_state(atoms, 0.0, 0.0, 0.0, lambda);
    rows.push_back({"purity", pur.purity, gie::fock::purity_ab(sp)});

    auto ss = gie::fock::paper_evolved_state(atoms, 0.0, 0.0, gamma, 0.0);
    gie::fock::close_interferometer(ss, gie::fock::Side::CD, -M_PI / 4, nu);
    gie::fock::SpinOperatorSpec id{gie::fock::Side::AB};
    double m1 = gie::fock::joint_moment(ss, id, 0, zc, 1);
    double m2 = gie::fock::joint_moment(ss, id, 0, zc, 2);
    double single_oracle =
        std::sqrt((double)reps) * std::fabs(m1) / std::sqrt(m2 - m1 * m1);
    rows.push_back({"snr_single",
                    gie::analytic::snr_single(atoms, gamma, nu, reps),
                    single_oracle});

    bool ok = true;
    std::ostringstream out;
    out << "  quantity         analytic            oracle              "
           "|diff|      status\n";
    for (const auto& r : rows) {
      double diff = std::fabs(r.analytic - r.oracle);
      bool row_ok = diff <= 1e-10 || diff <= 1e-9 * std::fabs(r.oracle);
      ok = ok && row_ok;
      char line[160];
      std::snprintf(line, sizeof line, "  %-15s %18.12e %18.12e %11.3e  %s\n",
                    r.name, r.analytic, r.oracle, diff,
                    row_ok ? "PASS" : "FAIL");
      out << line;
    }
    *pass = ok ? 1 : 0;
    *table = dup_string(out.str());
  });
}

int gie_cross_coupling(double m_atom_kg, double a_m, double c_m, double d_m,
                       double rel_tol, double* value_j, double* abs_err_j) {
  return guarded([&] {
    check_out(value_j);
    gie::spheroid::SpheroidGeometry geom{a_m, c_m, d_m};
    gie::spheroid::QuadratureSpec quad;
    if (rel_tol > 0.0) quad.rel_tol = rel_tol;
    auto res = gie::spheroid::cross_coupling(m_atom_kg, geom, quad);
    *value_j = res.value;
    if (abs_err_j) *abs_err_j = res.abs_err;
  });
}

int gie_self_coupling(double m_atom_kg, double a_m, double c_m,
                      double* value_j) {
  return guarded([&] {
    check_out(value_j);
    *value_j = gie::spheroid::self_coupling(m_atom_kg, a_m, c_m);
  });
}

int gie_optimal_ellipticity(double d_over_c, double volume_m3,
                            double m_atom_kg, double rel_tol, double* e_star,
                            double* enhancement, double* coupling_j) {
  return guarded([&] {
    check_out(e_star);
    gie::spheroid::QuadratureSpec quad;
    if (rel_tol > 0.0) quad.rel_tol = rel_tol;
    auto res =
        gie::spheroid::optimal_ellipticity(d_over_c, volume_m3, m_atom_kg, quad);
    *e_star = res.e_star;
    if (enhancement) *enhancement = res.enhancement;
    if (coupling_j) *coupling_j = res.coupling;
  });
}

int gie_config_parse(const char* text, const char* const* overrides,
                     size_t n_overrides, gie_config** out) {
  return guarded([&] {
    check_out(out);
    auto kv = gie::config::parse_text(text ? text : "");
    gie::config::apply_overrides(kv, to_overrides(overrides, n_overrides));
    *out = new gie_config{gie::config::build(kv)};
  });
}

int gie_config_load(const char* path, const char* const* overrides,
                    size_t n_overrides, gie_config** out) {
  return guarded([&] {
    check_out(out);
    if (!path) throw std::invalid_argument("null config path");
    auto kv = gie::config::parse_file(path);
    gie::config::apply_overrides(kv, to_overrides(overrides, n_overrides));
    *out = new gie_config{gie::config::build(kv)};
  });
}

int gie_config_preset(const char* name, const char* const* overrides,
                      size_t n_overrides, gie_config** out) {
  return guarded([&] {
    check_out(out);
    std::string n = name ? name : "";
    gie::experiment::ExperimentConfig cfg;
    if (n == "headline")
      cfg = gie::experiment::headline_example();
    else if (n == "sphere")
      cfg = gie::experiment::sphere_example(0.02);
    else
      throw std::invalid_argument("unknown config preset '" + n +
                                  "' (use headline or sphere)");
    auto ovs = to_overrides(overrides, n_overrides);
    if (!ovs.empty()) {
      gie::config::KeyValues kv = gie::config::parse_text(
          gie::config::echo(cfg));
      gie::config::apply_overrides(kv, ovs);
      cfg = gie::config::build(kv);
    }
    *out = new gie_config{cfg};
  });
}

void gie_config_free(gie_config* cfg) { delete cfg; }

int gie_config_echo(const gie_config* cfg, char** out) {
  return guarded([&] {
    check_out(out);
    if (!cfg) throw std::invalid_argument("null config handle");
    *out = dup_string(gie::config::echo(cfg->cfg));
  });
}

int gie_couplings_eval(const gie_config* cfg, gie_couplings* out) {
  return guarded([&] {
    check_out(out);
    if (!cfg) throw std::invalid_argument("null config handle");
    auto cs = gie::experiment::dimensionless_couplings(cfg->cfg);
    *out = gie_couplings{cs.lp_cross, cs.lp_self, cs.kp_self, cs.lambda,
                         cs.lambda_s, cs.kappa_s, cs.kappa_d, cs.gamma};
  });
}

int gie_evaluate(const gie_config* cfg, gie_eval* out) {
  return guarded([&] {
    check_out(out);
    if (!cfg) throw std::invalid_argument("null config handle");
    auto res = gie::experiment::effective_snr(cfg->cfg);
    out->base = to_c(res.base);
    out->couplings =
        gie_couplings{res.couplings.lp_cross, res.couplings.lp_self,
                      res.couplings.kp_self,  res.couplings.lambda,
                      res.couplings.lambda_s, res.couplings.kappa_s,
                      res.couplings.kappa_d,  res.couplings.gamma};
    out->gain = res.gain;
    out->snr = res.snr;
    out->density_cm3 = res.density_cm3;
    out->lifetime_s = res.lifetime_s;
    out->density_ok = res.density_cm3 < 1e16 ? 1 : 0;
    out->lifetime_ok = res.lifetime_s >= cfg->cfg.time_s ? 1 : 0;
    out->perturbative_ok = res.perturbative_ok ? 1 : 0;
  });
}

int gie_report(const gie_config* cfg, char** out) {
  return guarded([&] {
    check_out(out);
    if (!cfg) throw std::invalid_argument("null config handle");
    *out = dup_string(gie::experiment::headline_report(cfg->cfg));
  });
}

int gie_scattering_suppression(const gie_config* cfg, double threshold,
                               double* orders) {
  return guarded([&] {
    check_out(orders);
    if (!cfg) throw std::invalid_argument("null config handle");
    *orders = gie::experiment::scattering_suppression(cfg->cfg, threshold);
  });
}

int gie_three_body_lifetime(double n0_cm3, double loss_cm6_s,
                            double decay_factor, double* lifetime_s) {
  return guarded([&] {
    check_out(lifetime_s);
    *lifetime_s =
        gie::experiment::three_body_lifetime(n0_cm3, loss_cm6_s, decay_factor);
  });
}

int gie_scan_create(const gie_config* base, gie_scan** out) {
  return guarded([&] {
    check_out(out);
    if (!base) throw std::invalid_argument("null config handle");
    auto* scan = new gie_scan;
    scan->spec.base = base->cfg;
    *out = scan;
  });
}

int gie_scan_preset(const char* name, gie_scan** out) {
  return guarded([&] {
    check_out(out);
    std::string n = name ? name : "";
    auto* scan = new gie_scan;
    if (n == "figure3") {
      scan->spec = gie::scan::figure3_preset();
    } else if (n == "figure3-contour") {
      scan->spec = gie::scan::figure3_preset();
      scan->spec.base.atoms = 1e16;
      scan->spec.axes.resize(2);
    } else {
      delete scan;
      throw std::invalid_argument("unknown scan preset '" + n +
                                  "' (use figure3 or figure3-contour)");
    }
    *out = scan;
  });
}

void gie_scan_free(gie_scan* scan) { delete scan; }

int gie_scan_add_axis(gie_scan* scan, const char* axis, double min, double max,
                      int points, int log_scale) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    if (!axis) throw std::invalid_argument("null axis name");
    gie::scan::AxisSpec spec{gie::scan::axis_from_name(axis), min, max, points,
                             log_scale != 0};
    spec.validate();
    scan->spec.axes.push_back(spec);
    scan->ran = false;
  });
}

int gie_scan_clear_axes(gie_scan* scan) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    scan->spec.axes.clear();
    scan->ran = false;
  });
}

int gie_scan_set_density_cap(gie_scan* scan, double cap_cm3) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    if (!(cap_cm3 > 0.0))
      throw std::invalid_argument("density cap must be > 0");
    scan->spec.max_density_cm3 = cap_cm3;
    scan->ran = false;
  });
}

int gie_scan_set_total_time(gie_scan* scan, double t_total_s) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    if (t_total_s > 0.0) {
      scan->spec.rep_rule = gie::scan::RepRule::TotalTime;
      scan->spec.t_total_s = t_total_s;
    } else {
      scan->spec.rep_rule = gie::scan::RepRule::Fixed;
    }
    scan->ran = false;
  });
}

int gie_scan_set_touching_density(gie_scan* scan, double n_target_cm3) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    if (n_target_cm3 > 0.0) {
      scan->spec.geom_rule = gie::scan::GeometryRule::TouchingDensity;
      scan->spec.n_target_cm3 = n_target_cm3;
    } else {
      scan->spec.geom_rule = gie::scan::GeometryRule::Fixed;
    }
    scan->ran = false;
  });
}

int gie_scan_set_touching_aspect(gie_scan* scan, double ellipticity) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    if (ellipticity > 0.0) {
      scan->spec.geom_rule = gie::scan::GeometryRule::TouchingAspect;
      scan->spec.aspect_e = ellipticity;
    } else {
      scan->spec.geom_rule = gie::scan::GeometryRule::Fixed;
    }
    scan->ran = false;
  });
}

int gie_scan_run(gie_scan* scan) {
  return guarded([&] {
    if (!scan) throw std::invalid_argument("null scan handle");
    scan->result = gie::scan::run_scan(scan->spec);
    scan->ran = true;
  });
}

int gie_scan_export(const gie_scan* scan, const char* format, char** out) {
  return guarded([&] {
    check_out(out);
    if (!scan) throw std::invalid_argument("null scan handle");
    if (!scan->ran) throw std::invalid_argument("scan has not been run");
    std::string f = format ? format : "";
    if (f == "csv")
      *out = dup_string(gie::scan::export_csv(scan->result));
    else if (f == "json")
      *out = dup_string(gie::scan::export_json(scan->result));
    else if (f == "svg")
      *out = dup_string(gie::scan::export_svg(scan->result, scan->spec));
    else
      throw std::invalid_argument("unknown export format '" + f +
                                  "' (use csv, json or svg)");
  });
}

int gie_scan_contour(const gie_scan* scan, double target, char** csv_out) {
  return guarded([&] {
    check_out(csv_out);
    if (!scan) throw std::invalid_argument("null scan handle");
    auto lines = gie::scan::snr_contour(scan->spec, target);
    std::ostringstream out;
    out << "line,"
        << gie::scan::axis_name(scan->spec.axes[0].axis) << ","
        << gie::scan::axis_name(scan->spec.axes[1].axis) << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (const auto& v : lines[i])
        out << i << "," << v[0] << "," << v[1] << "\n";
    *csv_out = dup_string(out.str());
  });
}

}  // extern "C"
