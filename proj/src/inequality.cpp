#include "tch/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tch {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double time_scale(const Params& params) {
  const double j = std::abs(params.coupling_j);
  if (j > 0.0) return j;
  const double mu = std::abs(params.mu);
  return mu > 0.0 ? mu : 1.0;
}

// Refine a sign change of f on [lo, hi] (f(lo) and f(hi) of opposite sign).
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

double peak_signal(const Propagator<double>& prop, double t, PeakSource which) {
  const int n = prop.n_sites();
  const auto ph = prop.phases(t);
  return std::norm(prop.entry_with_phases(which == PeakSource::gnn ? n : 1, n, ph));
}

}  // namespace

double i_ch_from_components(const ChComponents& c) {
  return 0.5 + (kSqrt2 / 4.0) * (c.gnn_abs2 + c.g1n_abs2 + c.re_gnn);
}

ChComponents ch_components(const Propagator<double>& prop, double t) {
  const int n = prop.n_sites();
  const auto ph = prop.phases(t);
  const auto gnn = prop.entry_with_phases(n, n, ph);
  const auto g1n = prop.entry_with_phases(1, n, ph);
  return {std::norm(gnn), std::norm(g1n), gnn.real()};
}

double i_ch_closed_form(double t, const Params& params, Convention convention) {
  return i_ch_from_components(ch_components(Propagator<double>(params, convention), t));
}

double t_star_estimate(const Params& params) {
  const double denom = 3.0 * params.coupling_j * params.coupling_j + params.mu * params.mu;
  if (denom == 0.0) throw std::domain_error("t_star_estimate: J = mu = 0 leaves no time scale");
  return std::sqrt(4.0 - 2.0 * kSqrt2) / std::sqrt(denom);
}

CurvatureEstimate curvature_at_zero(const Params& params, Convention convention, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("curvature_at_zero: step must be positive");
  const Propagator<double> prop(params, convention);
  const auto value = [&](double t) { return i_ch_from_components(ch_components(prop, t)); };
  const double center = value(0.0);

  double d2[3];
  double d1[3];
  double h = step;
  for (int level = 0; level < 3; ++level, h *= 0.5) {
    const double plus = value(h);
    const double minus = value(-h);
    d2[level] = (plus - 2.0 * center + minus) / (h * h);
    d1[level] = (plus - minus) / (2.0 * h);
  }
  const auto richardson = [](const double (&d)[3]) {
    const double r0 = (4.0 * d[1] - d[0]) / 3.0;
    const double r1 = (4.0 * d[2] - d[1]) / 3.0;
    return (16.0 * r1 - r0) / 15.0;
  };
  return {richardson(d2), richardson(d1)};
}

double default_grid_step(const Params& params) { return 1e-3 / time_scale(params); }

std::optional<double> t_star_numeric(const Params& params, Convention convention, double t_upper,
                                     double grid_step) {
  if (!(t_upper > 0.0)) throw std::invalid_argument("t_star_numeric: t_upper must be positive");
  if (grid_step <= 0.0) grid_step = default_grid_step(params);
  const Propagator<double> prop(params, convention);
  const auto excess = [&](double t) { return i_ch_from_components(ch_components(prop, t)) - 1.0; };
  const double tol = 1e-12 / time_scale(params);

  double t_prev = 0.0;
  double f_prev = excess(0.0);
  const auto steps = static_cast<long long>(std::ceil(t_upper / grid_step));
  for (long long i = 1; i <= steps; ++i) {
    const double t = std::min(t_upper, static_cast<double>(i) * grid_step);
    const double f = excess(t);
    if (f == 0.0) return t;
    if ((f > 0.0) != (f_prev > 0.0) && f_prev != 0.0) return bisect(excess, t_prev, t, tol);
    t_prev = t;
    f_prev = f;
  }
  return std::nullopt;
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 1) throw std::invalid_argument("time grid needs at least one step");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / steps;
  if (t_max == 0.0) grid.resize(1);
  return grid;
}

CHCurve sample_curve(const Params& params, Convention convention, std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("sample_curve: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw std::invalid_argument("sample_curve: times must be nonnegative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("sample_curve: times must be strictly increasing");
  }
  const Propagator<double> prop(params, convention);
  CHCurve curve{params, convention, {}};
  curve.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto c = ch_components(prop, t);
    curve.samples.push_back({t, i_ch_from_components(c), c});
  }
  return curve;
}

std::vector<Peak> revival_peaks(const Params& params, Convention convention, double horizon, PeakSource which,
                                const PeakOptions& options) {
  if (!(horizon > 0.0)) throw std::invalid_argument("revival_peaks: horizon must be positive");
  const double step = options.grid_step > 0.0 ? options.grid_step : default_grid_step(params);
  const Propagator<double> prop(params, convention);
  const auto signal = [&](double t) { return peak_signal(prop, t, which); };

  const auto count = static_cast<std::size_t>(std::ceil(horizon / step)) + 1;
  std::vector<double> ts(count);
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    ts[i] = std::min(horizon, static_cast<double>(i) * step);
    values[i] = signal(ts[i]);
  }

  const auto side_min = [&](std::size_t i, int dir) {
    double lowest = values[i];
    for (auto j = static_cast<long long>(i) + dir; j >= 0 && j < static_cast<long long>(count); j += dir) {
      const double v = values[static_cast<std::size_t>(j)];
      if (v > values[i]) break;
      lowest = std::min(lowest, v);
    }
    return lowest;
  };

  std::vector<Peak> peaks;
  if (count > 1 && values[0] > values[1]) {
    const double prominence = values[0] - side_min(0, +1);
    if (prominence >= options.prominence) peaks.push_back({0.0, values[0], prominence});
  }
  for (std::size_t i = 1; i + 1 < count; ++i) {
    if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
    const double prominence = values[i] - std::max(side_min(i, -1), side_min(i, +1));
    if (prominence < options.prominence) continue;
    const double t = golden_max(signal, ts[i - 1], ts[i + 1], std::max(1e-10 * step, 1e-14 * horizon));
    peaks.push_back({t, signal(t), prominence});
  }
  return peaks;
}

std::optional<Peak> first_revival(std::span<const Peak> peaks) {
  const Peak* previous = nullptr;
  for (const auto& peak : peaks) {
    if (peak.t == 0.0) {
      previous = &peak;
      continue;
    }
    if (previous == nullptr || peak.value > previous->value) return peak;
    previous = &peak;
  }
  return std::nullopt;
}

ViolationReport find_violations(const CHCurve& curve, const PeakOptions& peak_options) {
  if (curve.samples.empty()) throw std::invalid_argument("find_violations: empty curve");
  const Propagator<double> prop(curve.params, curve.convention);
  const auto& samples = curve.samples;
  const double tol = 1e-12 / time_scale(curve.params);

  ViolationReport report;
  report.peak_prominence = peak_options.prominence;
  for (std::size_t i = 1; i < samples.size(); ++i)
    report.grid_resolution = std::max(report.grid_resolution, samples[i].t - samples[i - 1].t);

  const auto collect = [&](std::vector<Interval>& out, double level, bool above) {
    const auto outside = [&](double v) { return above ? v > level : v < level; };
    const auto offset = [&](double t) { return i_ch_from_components(ch_components(prop, t)) - level; };
    double start = 0.0;
    bool inside = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const bool now = outside(samples[i].i_ch);
      if (now && !inside) {
        start = i == 0 ? samples[0].t : bisect(offset, samples[i - 1].t, samples[i].t, tol);
        inside = true;
      } else if (!now && inside) {
        out.push_back({start, bisect(offset, samples[i - 1].t, samples[i].t, tol), false});
        inside = false;
      }
    }
    if (inside) out.push_back({start, samples.back().t, true});
  };
  collect(report.violation_intervals, 1.0, true);
  collect(report.negative_intervals, 0.0, false);

  if (samples.front().t == 0.0 && samples.front().i_ch > 1.0 && !report.violation_intervals.empty() &&
      !report.violation_intervals.front().open_end)
    report.t_star_numeric = report.violation_intervals.front().t_end;
  if (curve.params.coupling_j != 0.0 || curve.params.mu != 0.0) report.t_star_estimate = t_star_estimate(curve.params);

  const double horizon = samples.back().t;
  if (horizon > 0.0) {
    report.revival_peaks_gnn = revival_peaks(curve.params, curve.convention, horizon, PeakSource::gnn, peak_options);
    report.revival_peaks_g1n = revival_peaks(curve.params, curve.convention, horizon, PeakSource::g1n, peak_options);
  }
  return report;
}

}  // namespace tch
