#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tch/propagator.hpp"

namespace tch {

using Params = ChainParams<double>;

/// Fixed measurement settings: A1 = σz, A2 = σx on site 1 and
/// B1 = (σz + σx)/√2, B2 = (σz − σx)/√2 on site N.
enum class AliceSetting { a1, a2 };
enum class BobSetting { b1, b2 };

/// The three propagator functionals that the CH argument depends on.
struct ChComponents {
  double gnn_abs2 = 0.0;
  double g1n_abs2 = 0.0;
  double re_gnn = 0.0;
};

/// 1/2 + (√2/4)(|G_NN|² + |G_1N|² + Re G_NN)
double i_ch_from_components(const ChComponents& c);

ChComponents ch_components(const Propagator<double>& prop, double t);
double i_ch_closed_form(double t, const Params& params, Convention convention);

/// Quadratic-expansion estimate √(4 − 2√2) / √(3J² + μ²).
double t_star_estimate(const Params& params);

struct CurvatureEstimate {
  double second_derivative = 0.0;
  double first_derivative = 0.0;
};

/// Central differences at t = 0 with two Richardson levels.
CurvatureEstimate curvature_at_zero(const Params& params, Convention convention, double step);

/// Default sampling step of the grid-then-refine searches: 1e-3 / |J| (or 1e-3 / |μ| when J = 0).
double default_grid_step(const Params& params);

/// Smallest t > 0 with I(t) = 1, or nullopt when there is no crossing in (0, t_upper].
std::optional<double> t_star_numeric(const Params& params, Convention convention, double t_upper,
                                     double grid_step = 0.0);

struct ChSample {
  double t = 0.0;
  double i_ch = 0.0;
  ChComponents components;
};

struct CHCurve {
  Params params;
  Convention convention = Convention::plain;
  std::vector<ChSample> samples;
};

CHCurve sample_curve(const Params& params, Convention convention, std::span<const double> t_grid);

/// Evenly spaced grid t_i = t_max * i / steps, i = 0..steps.
std::vector<double> uniform_grid(double t_max, int steps);

struct Interval {
  double t_start = 0.0;
  double t_end = 0.0;
  bool open_end = false;  // still above the bound at the last sample
};

enum class PeakSource { gnn, g1n };

struct Peak {
  double t = 0.0;
  double value = 0.0;
  double prominence = 0.0;
};

struct PeakOptions {
  double grid_step = 0.0;  // 0 selects default_grid_step
  double prominence = 0.01;
};

/// Local maxima of |G_NN(t)|² or |G_1N(t)|² on [0, horizon] with at least the
/// requested prominence, refined by golden-section search. A maximum at t = 0
/// is reported as the first peak.
std::vector<Peak> revival_peaks(const Params& params, Convention convention, double horizon, PeakSource which,
                                const PeakOptions& options = {});

/// First peak after t = 0 that rises above the peak preceding it, i.e. the
/// first genuine revival rather than a ripple of the initial decay.
std::optional<Peak> first_revival(std::span<const Peak> peaks);

struct ViolationReport {
  std::vector<Interval> violation_intervals;  // I > 1
  std::vector<Interval> negative_intervals;   // I < 0, never expected
  std::optional<double> t_star_numeric;
  std::optional<double> t_star_estimate;
  std::vector<Peak> revival_peaks_gnn;
  std::vector<Peak> revival_peaks_g1n;
  double grid_resolution = 0.0;
  double peak_prominence = 0.0;
};

ViolationReport find_violations(const CHCurve& curve, const PeakOptions& peak_options = {});

}  // namespace tch
