#include "gie/scan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace gie::scan {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("GIE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) n = unsigned(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace

Axis axis_from_name(const std::string& name) {
  if (name == "d_m" || name == "d") return Axis::D;
  if (name == "time_s" || name == "t") return Axis::T;
  if (name == "atoms" || name == "n") return Axis::Atoms;
  if (name == "squeeze_db") return Axis::SqueezeDb;
  if (name == "a_s_m") return Axis::ScatteringLength;
  if (name == "reps" || name == "m") return Axis::Reps;
  throw std::invalid_argument(
      "unknown scan axis '" + name +
      "' (use d_m, time_s, atoms, squeeze_db, a_s_m or reps)");
}

std::string axis_name(Axis axis) {
  switch (axis) {
    case Axis::D: return "d_m";
    case Axis::T: return "time_s";
    case Axis::Atoms: return "atoms";
    case Axis::SqueezeDb: return "squeeze_db";
    case Axis::ScatteringLength: return "a_s_m";
    case Axis::Reps: return "reps";
  }
  throw std::logic_error("bad axis");
}

void AxisSpec::validate() const {
  if (!(min < max)) throw std::invalid_argument("axis needs min < max");
  if (points < 2) throw std::invalid_argument("axis needs at least 2 points");
  if (log_scale && !(min > 0.0))
    throw std::invalid_argument("log-scale axis needs positive bounds");
}

std::vector<double> AxisSpec::values() const {
  validate();
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    double f = double(i) / (points - 1);
    v[i] = log_scale ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                     : min + f * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void ScanSpec::validate() const {
  if (axes.empty() || axes.size() > 3)
    throw std::invalid_argument("scans take 1 to 3 axes");
  for (const auto& ax : axes) ax.validate();
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (axes[i].axis == axes[j].axis)
        throw std::invalid_argument("duplicate scan axis " +
                                    axis_name(axes[i].axis));
  if (rep_rule == RepRule::TotalTime && !(t_total_s > 0.0))
    throw std::invalid_argument("total-time repetition rule needs t_total > 0");
  if (!(max_density_cm3 > 0.0))
    throw std::invalid_argument("density cap must be > 0");
  if (geom_rule == GeometryRule::TouchingDensity && !(n_target_cm3 > 0.0))
    throw std::invalid_argument("touching-density rule needs n_target > 0");
  if (geom_rule == GeometryRule::TouchingAspect &&
      !(aspect_e > 0.0 && aspect_e < 1.0))
    throw std::invalid_argument("touching-aspect rule needs 0 < e < 1");
}

ScanRow evaluate_point(const ScanSpec& spec,
                       const std::vector<double>& axis_values) {
  ScanRow row;
  row.axis_values = axis_values;
  row.lambda = row.gamma = row.snr = row.density_cm3 = row.lifetime_s =
      std::numeric_limits<double>::quiet_NaN();
  try {
    experiment::ExperimentConfig cfg = spec.base;
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
      const double v = axis_values[i];
      switch (spec.axes[i].axis) {
        case Axis::D: cfg.geom.d = v; break;
        case Axis::T: cfg.time_s = v; break;
        case Axis::Atoms: cfg.atoms = std::round(v); break;
        case Axis::SqueezeDb: cfg.squeeze_db = v; break;
        case Axis::ScatteringLength: cfg.a_s_m = v; break;
        case Axis::Reps:
          cfg.reps = std::uint64_t(std::max(2.0, std::round(v)));
          break;
      }
    }
    if (spec.geom_rule == GeometryRule::TouchingDensity) {
      const double c = cfg.geom.d / 2.0;
      const double vol_m3 = cfg.atoms / (spec.n_target_cm3 * 1e6);
      const double a = std::sqrt(vol_m3 / (4.0 / 3.0 * kPi * c));
      if (a < c)
        throw std::invalid_argument(
            "touching-density rule gives a prolate cloud (a < c)");
      cfg.geom = spheroid::SpheroidGeometry{a, c, cfg.geom.d};
    } else if (spec.geom_rule == GeometryRule::TouchingAspect) {
      const double c = cfg.geom.d / 2.0;
      const double a = c / std::sqrt(1.0 - spec.aspect_e * spec.aspect_e);
      cfg.geom = spheroid::SpheroidGeometry{a, c, cfg.geom.d};
    }
    if (spec.rep_rule == RepRule::TotalTime)
      cfg.reps = std::uint64_t(
          std::max(2.0, std::round(spec.t_total_s / cfg.time_s)));
    experiment::EffectiveSnr res = experiment::effective_snr(cfg);
    row.lambda = std::fabs(res.couplings.lambda);
    row.gamma = -res.couplings.gamma;
    row.snr = res.snr;
    row.density_cm3 = res.density_cm3;
    row.lifetime_s = res.lifetime_s;
    row.density_ok = res.density_cm3 < spec.max_density_cm3;
    row.lifetime_ok = res.lifetime_s >= cfg.time_s;
    row.perturbative_ok = res.perturbative_ok;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.density_ok = row.lifetime_ok = row.perturbative_ok = false;
  }
  return row;
}

ScanResult run_scan(const ScanSpec& spec) {
  spec.validate();
  ScanResult result;
  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const auto& ax : spec.axes) {
    result.axis_names.push_back(axis_name(ax.axis));
    axis_values.push_back(ax.values());
    total *= axis_values.back().size();
  }
  result.rows.resize(total);
  const unsigned workers =
      std::min<unsigned>(worker_count(), std::max<std::size_t>(total, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      std::vector<double> point(spec.axes.size());
      std::size_t rem = idx;
      for (std::size_t i = spec.axes.size(); i-- > 0;) {
        point[i] = axis_values[i][rem % axis_values[i].size()];
        rem /= axis_values[i].size();
      }
      result.rows[idx] = evaluate_point(spec, point);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return result;
}

std::vector<Polyline> snr_contour(const ScanSpec& spec, double target) {
  spec.validate();
  if (spec.axes.size() != 2)
    throw std::invalid_argument("contours need exactly 2 axes");
  if (!(target > 0.0)) throw std::invalid_argument("target must be > 0");
  auto field = [&](double x, double y) {
    ScanRow row = evaluate_point(spec, {x, y});
    if (!row.error.empty() || std::isnan(row.snr))
      return std::numeric_limits<double>::quiet_NaN();
    return row.snr;
  };
  return contour_from_field(field, spec.axes[0], spec.axes[1], target);
}

namespace {

struct Crossing {
  double x, y;
};

Crossing refine_edge(const std::function<double(double, double)>& field,
                     double x0, double y0, double x1, double y1, double f0,
                     double f1, double target, double rel_tol) {
  // Bisect along the edge; endpoints bracket the target.
  bool below0 = f0 < target;
  double best_x = 0.5 * (x0 + x1), best_y = 0.5 * (y0 + y1);
  for (int it = 0; it < 80; ++it) {
    double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    double fm = field(xm, ym);
    best_x = xm;
    best_y = ym;
    if (std::isnan(fm)) break;
    if (std::fabs(fm - target) <= rel_tol * target) break;
    if ((fm < target) == below0) {
      x0 = xm;
      y0 = ym;
    } else {
      x1 = xm;
      y1 = ym;
    }
  }
  return Crossing{best_x, best_y};
}

std::string vertex_key(double x, double y) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12e|%.12e", x, y);
  return buf;
}

}  // namespace

std::vector<Polyline> contour_from_field(
    const std::function<double(double, double)>& field, const AxisSpec& ax,
    const AxisSpec& ay, double target, double vertex_rel_tol) {
  const std::vector<double> xs = ax.values();
  const std::vector<double> ys = ay.values();
  std::vector<std::vector<double>> f(xs.size(),
                                     std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) f[i][j] = field(xs[i], ys[j]);

  auto edge_crossing = [&](std::size_t i0, std::size_t j0, std::size_t i1,
                           std::size_t j1, Crossing& out) {
    double f0 = f[i0][j0], f1 = f[i1][j1];
    if (std::isnan(f0) || std::isnan(f1)) return false;
    if ((f0 < target) == (f1 < target)) return false;
    out = refine_edge(field, xs[i0], ys[j0], xs[i1], ys[j1], f0, f1, target,
                      vertex_rel_tol);
    return true;
  };

  // Per-cell segments (marching squares), then chained into polylines.
  std::vector<std::array<Crossing, 2>> segments;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      Crossing cr[4];
      bool has[4];
      has[0] = edge_crossing(i, j, i + 1, j, cr[0]);          // bottom
      has[1] = edge_crossing(i + 1, j, i + 1, j + 1, cr[1]);  // right
      has[2] = edge_crossing(i, j + 1, i + 1, j + 1, cr[2]);  // top
      has[3] = edge_crossing(i, j, i, j + 1, cr[3]);          // left
      std::vector<int> hit;
      for (int k = 0; k < 4; ++k)
        if (has[k]) hit.push_back(k);
      if (hit.size() == 2) {
        segments.push_back({cr[hit[0]], cr[hit[1]]});
      } else if (hit.size() == 4) {
        // Saddle: split by the cell-center value.
        double fc = field(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
        bool corner_low = f[i][j] < target;
        if (!std::isnan(fc) && (fc < target) == corner_low) {
          segments.push_back({cr[0], cr[1]});
          segments.push_back({cr[2], cr[3]});
        } else {
          segments.push_back({cr[0], cr[3]});
          segments.push_back({cr[1], cr[2]});
        }
      }
    }
  }

  std::multimap<std::string, std::size_t> by_vertex;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_vertex.emplace(vertex_key(segments[s][0].x, segments[s][0].y), s);
    by_vertex.emplace(vertex_key(segments[s][1].x, segments[s][1].y), s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    Polyline line{{segments[s][0].x, segments[s][0].y},
                  {segments[s][1].x, segments[s][1].y}};
    auto extend_tail = [&]() {
      bool extended = true;
      while (extended) {
        extended = false;
        auto tail = line.back();
        auto range = by_vertex.equal_range(vertex_key(tail[0], tail[1]));
        for (auto it = range.first; it != range.second; ++it) {
          std::size_t t = it->second;
          if (used[t]) continue;
          used[t] = true;
          const auto& seg = segments[t];
          if (vertex_key(seg[0].x, seg[0].y) == vertex_key(tail[0], tail[1]))
            line.push_back({seg[1].x, seg[1].y});
          else
            line.push_back({seg[0].x, seg[0].y});
          extended = true;
          break;
        }
      }
    };
    extend_tail();
    std::reverse(line.begin(), line.end());
    extend_tail();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string export_csv(const ScanResult& result) {
  std::ostringstream out;
  for (const auto& name : result.axis_names) out << name << ",";
  out << "lambda,gamma,snr,density_cm3,lifetime_s,density_ok,lifetime_ok,"
         "perturbative_ok\n";
  for (const auto& row : result.rows) {
    for (double v : row.axis_values) out << format_double(v) << ",";
    out << format_double(row.lambda) << "," << format_double(row.gamma) << ","
        << format_double(row.snr) << "," << format_double(row.density_cm3)
        << "," << format_double(row.lifetime_s) << ","
        << (row.density_ok ? 1 : 0) << "," << (row.lifetime_ok ? 1 : 0) << ","
        << (row.perturbative_ok ? 1 : 0) << "\n";
  }
  return out.str();
}

ScanResult parse_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty CSV input");
  std::vector<std::string> header;
  {
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) header.push_back(field);
  }
  const std::vector<std::string> fixed = {
      "lambda",     "gamma",       "snr",
      "density_cm3", "lifetime_s", "density_ok",
      "lifetime_ok", "perturbative_ok"};
  if (header.size() < fixed.size())
    throw std::invalid_argument("CSV header too short");
  const std::size_t n_axes = header.size() - fixed.size();
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (header[n_axes + i] != fixed[i])
      throw std::invalid_argument("unexpected CSV column '" +
                                  header[n_axes + i] + "'");
  ScanResult result;
  result.axis_names.assign(header.begin(), header.begin() + n_axes);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != header.size())
      throw std::invalid_argument("CSV row has wrong field count");
    ScanRow row;
    for (std::size_t i = 0; i < n_axes; ++i)
      row.axis_values.push_back(parse_double(fields[i]));
    row.lambda = parse_double(fields[n_axes + 0]);
    row.gamma = parse_double(fields[n_axes + 1]);
    row.snr = parse_double(fields[n_axes + 2]);
    row.density_cm3 = parse_double(fields[n_axes + 3]);
    row.lifetime_s = parse_double(fields[n_axes + 4]);
    row.density_ok = fields[n_axes + 5] == "1";
    row.lifetime_ok = fields[n_axes + 6] == "1";
    row.perturbative_ok = fields[n_axes + 7] == "1";
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string export_json(const ScanResult& result) {
  nlohmann::json j;
  j["axes"] = result.axis_names;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    r["axis_values"] = row.axis_values;
    r["lambda"] = row.lambda;
    r["gamma"] = row.gamma;
    r["snr"] = row.snr;
    r["density_cm3"] = row.density_cm3;
    r["lifetime_s"] = row.lifetime_s;
    r["density_ok"] = row.density_ok;
    r["lifetime_ok"] = row.lifetime_ok;
    r["perturbative_ok"] = row.perturbative_ok;
    if (!row.error.empty()) r["error"] = row.error;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string export_svg(const ScanResult& result, const ScanSpec& spec) {
  if (spec.axes.size() != 2)
    throw std::invalid_argument("SVG heatmaps need a 2-axis scan");
  const int nx = spec.axes[0].points, ny = spec.axes[1].points;
  if (std::size_t(nx) * ny != result.rows.size())
    throw std::invalid_argument("result does not match the scan grid");
  const int cell = 12, margin = 60;
  const int width = margin * 2 + nx * cell, height = margin * 2 + ny * cell;
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (const auto& row : result.rows) {
    if (std::isnan(row.snr) || row.snr <= 0.0) continue;
    double v = std::log10(row.snr);
    if (!seen) { lo = hi = v; seen = true; }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!seen || hi == lo) hi = lo + 1.0;
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<defs><pattern id='mask' width='6' height='6' "
         "patternUnits='userSpaceOnUse'><path d='M0,6 L6,0' stroke='#888' "
         "stroke-width='1'/></pattern></defs>\n";
  for (int i = 0; i < nx; ++i) {
    for (int jy = 0; jy < ny; ++jy) {
      const ScanRow& row = result.rows[std::size_t(i) * ny + jy];
      const int x = margin + i * cell;
      const int y = margin + (ny - 1 - jy) * cell;
      bool masked = !row.error.empty() || !row.density_ok || !row.lifetime_ok;
      std::string fill;
      if (std::isnan(row.snr) || row.snr <= 0.0) {
        fill = "#dddddd";
      } else {
        double t = (std::log10(row.snr) - lo) / (hi - lo);
        int r = int(255 * t), b = int(255 * (1.0 - t));
        fill = "rgb(" + std::to_string(r) + ",64," + std::to_string(b) + ")";
      }
      out << "<rect x='" << x << "' y='" << y << "' width='" << cell
          << "' height='" << cell << "' fill='" << fill << "' data-snr='"
          << format_double(row.snr) << "'/>";
      if (masked)
        out << "<rect x='" << x << "' y='" << y << "' width='" << cell
            << "' height='" << cell << "' fill='url(#mask)'/>";
      out << "\n";
    }
  }
  out << "<text x='" << width / 2 << "' y='" << height - 16
      << "' text-anchor='middle'>" << result.axis_names[0] << "</text>\n"
      << "<text x='16' y='" << height / 2 << "' text-anchor='middle' "
      << "transform='rotate(-90 16 " << height / 2 << ")'>"
      << result.axis_names[1] << "</text>\n</svg>\n";
  return out.str();
}

ScanSpec figure3_preset() {
  ScanSpec spec;
  experiment::ExperimentConfig& cfg = spec.base;
  cfg.species = experiment::species_by_name("erbium");
  cfg.atoms = 1e16;
  cfg.geom = spheroid::SpheroidGeometry{0.14, 0.13, 0.27};
  cfg.time_s = 1e4;
  cfg.reps = 1000;
  cfg.setups = 5;
  cfg.squeeze_db = 35.0;
  cfg.a_s_m = 0.0;
  cfg.scheme = experiment::Scheme::OneOpen;
  cfg.phases = fock::PhaseConfig{kPi / 2.0, 0.0, 0.0, 0.0};
  spec.axes = {
      AxisSpec{Axis::D, 0.01, 0.25, 40, true},
      AxisSpec{Axis::T, 1e2, 1e6, 40, true},
      AxisSpec{Axis::Atoms, 1e13, 1e16, 4, true},
  };
  spec.max_density_cm3 = 1e16;
  spec.rep_rule = RepRule::TotalTime;
  spec.t_total_s = 1e7;
  spec.geom_rule = GeometryRule::TouchingAspect;
  spec.aspect_e = 0.98;
  return spec;
}

}  // namespace gie::scan
