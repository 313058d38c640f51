#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gie/experiment.hpp"

namespace gie::scan {

// Grid scans of effective SNR over experiment axes, constraint flagging,
// contour extraction and CSV/JSON/SVG export. Grid points are evaluated in
// parallel (GIE_THREADS caps the worker count, 0/unset = auto) with a fixed
// lexicographic row order, so results are independent of the thread count.

enum class Axis { D, T, Atoms, SqueezeDb, ScatteringLength, Reps };

Axis axis_from_name(const std::string& name);
std::string axis_name(Axis axis);

struct AxisSpec {
  Axis axis = Axis::D;
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  bool log_scale = false;

  void validate() const;
  std::vector<double> values() const;
};

enum class RepRule { Fixed, TotalTime };

// TouchingDensity ties the cloud shape to the separation: c = d/2 and the
// volume fixed by a target number density. TouchingAspect keeps the aspect
// ratio instead: c = d/2 and a = c / sqrt(1 - e^2) at a fixed ellipticity,
// so the density scales as N / d^3 and is masked by the cap.
enum class GeometryRule { Fixed, TouchingDensity, TouchingAspect };

struct ScanSpec {
  experiment::ExperimentConfig base;
  std::vector<AxisSpec> axes;  // 1 to 3
  double max_density_cm3 = 1e16;
  RepRule rep_rule = RepRule::Fixed;
  double t_total_s = 0.0;
  GeometryRule geom_rule = GeometryRule::Fixed;
  double n_target_cm3 = 1e12;
  double aspect_e = 0.98;

  void validate() const;
};

struct ScanRow {
  std::vector<double> axis_values;
  double lambda = 0.0;  // magnitude convention, 2|lambda'| t / hbar
  double gamma = 0.0;
  double snr = 0.0;
  double density_cm3 = 0.0;
  double lifetime_s = 0.0;
  bool density_ok = false;
  bool lifetime_ok = false;
  bool perturbative_ok = false;
  std::string error;  // nonempty when the point could not be evaluated
};

struct ScanResult {
  std::vector<std::string> axis_names;
  std::vector<ScanRow> rows;
};

ScanRow evaluate_point(const ScanSpec& spec,
                       const std::vector<double>& axis_values);
ScanResult run_scan(const ScanSpec& spec);

using Polyline = std::vector<std::array<double, 2>>;

// SNR = target contour of a 2-axis scan; vertices are refined by bisection to
// |SNR - target| <= 1e-3 * target.
std::vector<Polyline> snr_contour(const ScanSpec& spec, double target);

// Contour extraction over an arbitrary field (used by snr_contour and by the
// tests with synthetic fields).
std::vector<Polyline> contour_from_field(
    const std::function<double(double, double)>& field, const AxisSpec& ax,
    const AxisSpec& ay, double target, double vertex_rel_tol = 1e-3);

std::string export_csv(const ScanResult& result);
std::string export_json(const ScanResult& result);
ScanResult parse_csv(const std::string& csv);

// Heatmap of log10 SNR for a 2-axis scan; cells failing any constraint are
// hatched. Data values ride along as attributes.
std::string export_svg(const ScanResult& result, const ScanSpec& spec);

// Erbium, 35 dB squeezing, 5 setups, total campaign time 1e7 s, touching
// fixed-aspect geometry at e = 0.98 with the 1e16 cm^-3 density cap doing the
// masking, axes d (40, log) x t (40, log) x N (4, log).
ScanSpec figure3_preset();

}  // namespace gie::scan
