#include "tch/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "table.hpp"
#include "tch/ed/hidden_variable.hpp"
#include "tch/inequality.hpp"

namespace tch::cli {

namespace {

const double kSqrt2 = std::sqrt(2.0);

/// Runs fn(0..count-1) on up to `workers` threads. Each index is written by
/// exactly one worker, so results assembled by index are scheduling-independent.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t n_threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> physical_times(const RunConfig& cfg) {
  auto grid = uniform_grid(*cfg.t_max, *cfg.t_steps);
  for (double& t : grid) t /= cfg.coupling_j;
  return grid;
}

nlohmann::json interval_json(const Interval& iv, double j) {
  return {{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"tJ_start", iv.t_start * j}, {"tJ_end", iv.t_end * j},
          {"open_end", iv.open_end}};
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json peak_json(const std::optional<Peak>& p) {
  if (!p) return nullptr;
  return {{"t", p->t}, {"value", p->value}, {"prominence", p->prominence}};
}

nlohmann::json violation_json(const ViolationReport& r, double j) {
  nlohmann::json out;
  out["violation_intervals"] = nlohmann::json::array();
  for (const auto& iv : r.violation_intervals) out["violation_intervals"].push_back(interval_json(iv, j));
  out["negative_intervals"] = nlohmann::json::array();
  for (const auto& iv : r.negative_intervals) out["negative_intervals"].push_back(interval_json(iv, j));
  out["t_star_numeric"] = optional_json(r.t_star_numeric);
  out["t_star_estimate"] = optional_json(r.t_star_estimate);
  out["first_revival_gnn"] = peak_json(first_revival(r.revival_peaks_gnn));
  out["first_revival_g1n"] = peak_json(first_revival(r.revival_peaks_g1n));
  out["revival_peak_count_gnn"] = r.revival_peaks_gnn.size();
  out["revival_peak_count_g1n"] = r.revival_peaks_g1n.size();
  out["grid_resolution"] = r.grid_resolution;
  out["peak_prominence"] = r.peak_prominence;
  return out;
}

nlohmann::json checks_json(const std::vector<CheckResult>& checks) {
  auto arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"max_deviation", c.max_deviation},
                   {"tolerance", c.tolerance},
                   {"passed", c.passed},
                   {"worst_case", c.worst_case}});
  return arr;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-26s max_dev=%.3e tol=%.0e  %s", c.name.c_str(), c.max_deviation,
                  c.tolerance, c.passed ? "PASS" : "FAIL");
    out << line;
    if (!c.worst_case.empty()) out << "  (" << c.worst_case << ")";
    out << '\n';
  }
}

int exit_code_for(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; }) ? kExitOk
                                                                                                    : kExitVerification;
}

void print_memory_estimate(std::ostream& err, int n) {
  const double mib = static_cast<double>(ed::oracle_memory_estimate_bytes(n)) / (1024.0 * 1024.0);
  char line[128];
  std::snprintf(line, sizeof line, "oracle N=%d: dimension %lld, estimated peak memory %.1f MiB\n", n,
                static_cast<long long>(ed::hilbert_dimension(n)), mib);
  err << line;
}

/// Tracks the largest deviation of one named check across cells.
struct Tracker {
  CheckResult result;
  explicit Tracker(std::string name, double tolerance) { result = {std::move(name), 0.0, tolerance, true, {}}; }
  void update(double deviation, const std::string& where) {
    if (std::isnan(deviation)) deviation = INFINITY;
    if (result.worst_case.empty() || deviation > result.max_deviation) {
      result.max_deviation = deviation;
      result.worst_case = where;
    }
    if (!(deviation <= result.tolerance)) result.passed = false;
  }
};

std::string cell_label(int n, double mu_over_j, double tj) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "N=%d mu/J=%g tJ=%g", n, mu_over_j, tj);
  return buf;
}

// ---------------------------------------------------------------- curve / sweep

const std::vector<std::string> kCurveColumns{"t", "tJ", "tJ_over_N", "i_ch", "gnn_abs2",
                                             "g1n_abs2", "re_gnn", "violation_flag"};

std::vector<Cell> curve_row(const ChSample& s, double j, int n) {
  return {s.t,
          s.t * j,
          s.t * j / n,
          s.i_ch,
          s.components.gnn_abs2,
          s.components.g1n_abs2,
          s.components.re_gnn,
          std::int64_t{s.i_ch > 1.0 ? 1 : 0}};
}

CHCurve parallel_curve(const Params& params, Convention convention, const std::vector<double>& times, int workers) {
  const std::size_t chunks = std::min<std::size_t>(times.size(), static_cast<std::size_t>(std::max(1, workers)));
  const std::size_t per = (times.size() + chunks - 1) / chunks;
  std::vector<CHCurve> parts(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * per;
    const std::size_t end = std::min(times.size(), begin + per);
    if (begin < end)
      parts[c] = sample_curve(params, convention, std::span<const double>(times.data() + begin, end - begin));
  });
  CHCurve curve{params, convention, {}};
  curve.samples.reserve(times.size());
  for (auto& p : parts) curve.samples.insert(curve.samples.end(), p.samples.begin(), p.samples.end());
  return curve;
}

void curve_checks(const CHCurve& curve, std::vector<Tracker>& trackers, double mu_over_j) {
  const int n = curve.params.n_sites;
  const double j = curve.params.coupling_j;
  if (!curve.samples.empty() && curve.samples.front().t == 0.0)
    trackers[0].update(std::abs(curve.samples.front().i_ch - (1.0 + kSqrt2) / 2.0), cell_label(n, mu_over_j, 0.0));
  double below = 0.0;
  double worst_t = 0.0;
  for (const auto& s : curve.samples)
    if (-s.i_ch > below) {
      below = -s.i_ch;
      worst_t = s.t;
    }
  trackers[1].update(below, cell_label(n, mu_over_j, worst_t * j));
}

std::vector<Tracker> curve_trackers() { return {Tracker("initial_value", 1e-12), Tracker("lower_bound", 0.0)}; }

CommandOutcome run_curve(const RunConfig& cfg, const ConventionChoice& choice, std::ostream& out) {
  const Params params{cfg.n_sites, cfg.coupling_j, cfg.mu()};
  params.validate();
  const auto times = physical_times(cfg);
  const auto curve = parallel_curve(params, choice.used, times, cfg.worker_count());
  const auto report = find_violations(curve, PeakOptions{0.0, cfg.peak_prominence});

  Table table{"tch-curve v1", kCurveColumns, {}};
  for (const auto& s : curve.samples) table.rows.push_back(curve_row(s, cfg.coupling_j, cfg.n_sites));
  write_table(cfg.output, cfg.format, table, to_json(cfg), std::string(to_string(choice.used)));

  auto trackers = curve_trackers();
  curve_checks(curve, trackers, cfg.mu_over_j);
  CommandOutcome outcome;
  for (auto& t : trackers) outcome.checks.push_back(t.result);
  outcome.manifest["results"] = violation_json(report, cfg.coupling_j);

  out << "curve: N=" << cfg.n_sites << " mu/J=" << cfg.mu_over_j << " samples=" << curve.samples.size()
      << " violation_intervals=" << report.violation_intervals.size();
  if (report.t_star_numeric) out << " t*=" << format_double(*report.t_star_numeric);
  out << "\nwrote " << cfg.output << '\n';
  return outcome;
}

CommandOutcome run_sweep(const RunConfig& cfg, const ConventionChoice& choice, std::ostream& out) {
  struct Task {
    int n;
    double mu_over_j;
  };
  std::vector<Task> tasks;
  for (int n : cfg.n_list)
    for (double m : cfg.mu_list) tasks.push_back({n, m});
  const auto times = physical_times(cfg);

  std::vector<CHCurve> curves(tasks.size());
  std::vector<ViolationReport> reports(tasks.size());
  parallel_for(tasks.size(), cfg.worker_count(), [&](std::size_t i) {
    const Params params{tasks[i].n, cfg.coupling_j, tasks[i].mu_over_j * cfg.coupling_j};
    params.validate();
    curves[i] = sample_curve(params, choice.used, times);
    reports[i] = find_violations(curves[i], PeakOptions{0.0, cfg.peak_prominence});
  });

  std::vector<std::string> columns{"n_sites", "mu_over_j"};
  columns.insert(columns.end(), kCurveColumns.begin(), kCurveColumns.end());
  Table table{"tch-sweep v1", columns, {}};
  auto trackers = curve_trackers();
  auto cells = nlohmann::json::array();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (const auto& s : curves[i].samples) {
      std::vector<Cell> row{std::int64_t{tasks[i].n}, tasks[i].mu_over_j};
      auto rest = curve_row(s, cfg.coupling_j, tasks[i].n);
      row.insert(row.end(), rest.begin(), rest.end());
      table.rows.push_back(std::move(row));
    }
    curve_checks(curves[i], trackers, tasks[i].mu_over_j);
    auto cell = violation_json(reports[i], cfg.coupling_j);
    cell["n_sites"] = tasks[i].n;
    cell["mu_over_j"] = tasks[i].mu_over_j;
    cells.push_back(std::move(cell));
    out << "sweep: N=" << tasks[i].n << " mu/J=" << tasks[i].mu_over_j
        << " violation_intervals=" << reports[i].violation_intervals.size() << '\n';
  }
  write_table(cfg.output, cfg.format, table, to_json(cfg), std::string(to_string(choice.used)));

  CommandOutcome outcome;
  for (auto& t : trackers) outcome.checks.push_back(t.result);
  outcome.manifest["results"] = {{"cells", cells}};
  out << "wrote " << cfg.output << '\n';
  return outcome;
}

// ---------------------------------------------------------------- verify

enum VerifyCheck {
  kInitialValue,
  kOracleVsClosed,
  kPropagator,
  kVacuumBranch,
  kPairBranch,
  kCoherence,
  kCompleteness,
  kShiftedCh,
  kContractions,
  kConjecture,
  kVerifyCheckCount
};

const char* const kVerifyNames[kVerifyCheckCount] = {
    "initial_value",          "oracle_vs_closed_form", "propagator_consistency",
    "vacuum_branch_constancy", "pair_branch_structure", "coherence_structure",
    "probability_completeness", "shifted_ch_identity",  "vacuum_contractions",
    "edge_pair_conjecture"};
const double kVerifyTolerances[kVerifyCheckCount] = {1e-12, 1e-9, 1e-9, 1e-10, 1e-9, 1e-9, 1e-10, 1e-12, 1e-9, 1e-9};

struct CellDeviations {
  double value[kVerifyCheckCount] = {};
  double worst_tj[kVerifyCheckCount] = {};
  void record(int check, double deviation, double tj) {
    if (std::isnan(deviation)) deviation = INFINITY;
    if (deviation > value[check]) {
      value[check] = deviation;
      worst_tj[check] = tj;
    }
  }
};

CellDeviations verify_cell(const ed::XXChainOracle& oracle, Convention convention, const std::vector<double>& times) {
  CellDeviations d;
  const Params& p = oracle.params();
  const int n = p.n_sites;
  const double j = p.coupling_j;
  const Propagator<double> prop(p, convention);
  d.record(kInitialValue, std::abs(i_ch_closed_form(0.0, p, convention) - (1.0 + kSqrt2) / 2.0), 0.0);
  d.record(kPropagator, ed::propagator_deviation(oracle, convention, times), 0.0);
  d.worst_tj[kPropagator] = NAN;  // aggregated over the grid
  const auto conj = ed::edge_pair_conjecture_check(oracle, times, convention);
  d.record(kConjecture, conj.max_deviation, conj.worst_time * j);

  using tch::AliceSetting;
  using tch::BobSetting;
  for (double t : times) {
    const double tj = t * j;
    const auto c = ch_components(prop, t);
    const double closed = i_ch_from_components(c);
    const double oracle_value = ed::i_ch_oracle(oracle, t);
    d.record(kOracleVsClosed, std::abs(oracle_value - closed), tj);

    const auto prob = [&](AliceSetting a, int oa, BobSetting b, int ob) {
      return ed::conditional_probability(oracle, a, oa, b, ob, t);
    };
    d.record(kVacuumBranch, std::abs(prob(AliceSetting::a1, -1, BobSetting::b1, -1) - (2.0 + kSqrt2) / 8.0), tj);
    d.record(kPairBranch,
             std::abs(prob(AliceSetting::a1, 1, BobSetting::b2, 1) - (2.0 - kSqrt2) / 8.0 -
                      kSqrt2 / 4.0 * (c.gnn_abs2 + c.g1n_abs2)),
             tj);
    d.record(kCoherence,
             std::abs(prob(AliceSetting::a2, 1, BobSetting::b1, 1) - prob(AliceSetting::a2, 1, BobSetting::b2, 1) -
                      kSqrt2 / 4.0 * c.re_gnn),
             tj);
    for (auto a : {AliceSetting::a1, AliceSetting::a2})
      for (auto b : {BobSetting::b1, BobSetting::b2}) {
        double sum = 0.0;
        for (int oa : {1, -1})
          for (int ob : {1, -1}) sum += prob(a, oa, b, ob);
        d.record(kCompleteness, std::abs(sum - 1.0), tj);
      }

    const auto prime = ed::i_ch_prime_oracle(oracle, t);
    d.record(kShiftedCh, std::max(std::abs(oracle_value - prime.value - 1.0),
                                  std::abs(prime.p_alice_a1 - prime.p_alice_a1_via_b2)),
             tj);

    const auto vc = ed::vacuum_contractions(oracle, t);
    const auto ph = prop.phases(t);
    const auto gnn = prop.entry_with_phases(n, n, ph);
    const auto g1n = prop.entry_with_phases(1, n, ph);
    const double contraction_dev =
        std::max({std::abs(vc.number_n - (std::norm(gnn) + std::norm(g1n))), std::abs(vc.sigma_x_pair),
                  std::abs(vc.sigma_x_from_n - std::conj(gnn)), std::abs(vc.sigma_x_from_1 - std::conj(g1n))});
    d.record(kContractions, contraction_dev, tj);
  }
  return d;
}

CommandOutcome run_verify(const RunConfig& cfg, const ConventionChoice& choice, std::ostream& out, std::ostream& err) {
  const auto limits = cfg.oracle_limits();
  for (int n : cfg.n_list) limits.check(n);
  for (int n : cfg.n_list) print_memory_estimate(err, n);

  struct VerifyCell {
    int n;
    double mu_over_j;
  };
  std::vector<VerifyCell> cells;
  for (int n : cfg.n_list)
    for (double m : cfg.mu_list) cells.push_back({n, m});
  const auto times = physical_times(cfg);

  std::vector<CellDeviations> results(cells.size());
  parallel_for(cells.size(), cfg.worker_count(), [&](std::size_t i) {
    const ed::XXChainOracle oracle({cells[i].n, cfg.coupling_j, cells[i].mu_over_j * cfg.coupling_j}, limits);
    results[i] = verify_cell(oracle, choice.used, times);
  });

  std::vector<Tracker> trackers;
  for (int k = 0; k < kVerifyCheckCount; ++k) trackers.emplace_back(kVerifyNames[k], kVerifyTolerances[k]);
  Table table{"tch-verify v1", {"check", "n_sites", "mu_over_j", "max_deviation", "worst_tJ", "tolerance", "passed"}, {}};
  for (int k = 0; k < kVerifyCheckCount; ++k)
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double dev = results[i].value[k];
      const double tj = results[i].worst_tj[k];
      std::string where = cell_label(cells[i].n, cells[i].mu_over_j, std::isnan(tj) ? 0.0 : tj);
      if (std::isnan(tj)) where = where.substr(0, where.rfind(" tJ=")) + " (all times)";
      trackers[k].update(dev, where);
      table.rows.push_back({std::string(kVerifyNames[k]), std::int64_t{cells[i].n}, cells[i].mu_over_j, dev,
                            std::isnan(tj) ? -1.0 : tj, kVerifyTolerances[k],
                            std::int64_t{dev <= kVerifyTolerances[k] ? 1 : 0}});
    }

  CommandOutcome outcome;
  for (auto& t : trackers) outcome.checks.push_back(t.result);
  outcome.manifest["results"] = {{"cells", cells.size()}, {"grid_points", times.size()}};
  out << "verify: convention=" << to_string(choice.used) << " cells=" << cells.size()
      << " grid_points=" << times.size() << '\n';
  print_checks(out, outcome.checks);
  if (!cfg.output.empty()) write_table(cfg.output, cfg.format, table, to_json(cfg), std::string(to_string(choice.used)));
  return outcome;
}

// ---------------------------------------------------------------- conjecture

CommandOutcome run_conjecture(const RunConfig& cfg, const ConventionChoice& choice, std::ostream& out,
                              std::ostream& err) {
  const auto limits = cfg.oracle_limits();
  std::vector<int> sizes;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) sizes.push_back(n);
  for (int n : sizes) limits.check(n);
  for (int n : sizes) print_memory_estimate(err, n);
  const auto times = physical_times(cfg);

  std::vector<ed::ConjectureCheck> checks(sizes.size());
  parallel_for(sizes.size(), cfg.worker_count(), [&](std::size_t i) {
    const ed::XXChainOracle oracle({sizes[i], cfg.coupling_j, cfg.mu()}, limits);
    checks[i] = ed::edge_pair_conjecture_check(oracle, times, choice.used);
  });

  constexpr double kTolerance = 1e-9;
  Tracker tracker("edge_pair_conjecture", kTolerance);
  Table table{"tch-conjecture v1", {"n_sites", "max_deviation", "worst_t", "worst_tJ", "within_tolerance"}, {}};
  auto per_n = nlohmann::json::array();
  out << "conjecture: convention=" << to_string(choice.used) << " mu/J=" << cfg.mu_over_j
      << " grid_points=" << times.size() << '\n';
  for (const auto& c : checks) {
    const bool ok = c.max_deviation <= kTolerance;
    tracker.update(c.max_deviation, cell_label(c.n_sites, cfg.mu_over_j, c.worst_time * cfg.coupling_j));
    table.rows.push_back({std::int64_t{c.n_sites}, c.max_deviation, c.worst_time, c.worst_time * cfg.coupling_j,
                          std::int64_t{ok ? 1 : 0}});
    per_n.push_back({{"n_sites", c.n_sites}, {"max_deviation", c.max_deviation}, {"worst_t", c.worst_time}});
    char line[128];
    std::snprintf(line, sizeof line, "  N=%-3d max_dev=%.3e  %s\n", c.n_sites, c.max_deviation, ok ? "ok" : "EXCEEDS");
    out << line;
  }
  CommandOutcome outcome;
  outcome.checks.push_back(tracker.result);
  outcome.manifest["results"] = {{"per_n", per_n}};
  if (!cfg.output.empty()) write_table(cfg.output, cfg.format, table, to_json(cfg), std::string(to_string(choice.used)));
  return outcome;
}

// ---------------------------------------------------------------- hv

CommandOutcome run_hv(const RunConfig& cfg, std::ostream& out) {
  constexpr double kTolerance = 1e-12;
  Tracker repeated("hv_repeated_identity", kTolerance);
  Tracker causal("hv_causal_identity", kTolerance);
  Tracker example("hv_plus_state_example", kTolerance);
  Table table{"tch-hv v1", {"identity", "instance", "seed", "max_deviation"}, {}};

  std::vector<double> rep_dev(cfg.instances), cau_dev(cfg.instances);
  const auto seed_of = [&](int i, bool is_causal) {
    return cfg.rng_seed + static_cast<std::uint64_t>(is_causal ? cfg.instances + i : i);
  };
  parallel_for(static_cast<std::size_t>(cfg.instances), cfg.worker_count(), [&](std::size_t i) {
    const int idx = static_cast<int>(i);
    const auto r = ed::random_repeated_instance(seed_of(idx, false));
    double worst = 0.0;
    for (int a = 0; a < r.dimension; ++a)
      for (int b = 0; b < r.dimension; ++b) {
        const auto chk = ed::hv_repeated_check(r, a, b);
        worst = std::max(worst, std::abs(chk.direct - chk.hidden_variable));
      }
    rep_dev[i] = worst;
    const auto c = ed::random_causal_instance(seed_of(idx, true));
    worst = 0.0;
    for (int a = 0; a < c.dim_a; ++a)
      for (int b = 0; b < c.dim_b; ++b) {
        const auto chk = ed::hv_causal_check(c, a, b);
        worst = std::max(worst, std::abs(chk.direct - chk.hidden_variable));
      }
    cau_dev[i] = worst;
  });
  for (int i = 0; i < cfg.instances; ++i) {
    repeated.update(rep_dev[i], "seed " + std::to_string(seed_of(i, false)));
    table.rows.push_back({std::string("repeated"), std::int64_t{i}, std::to_string(seed_of(i, false)), rep_dev[i]});
  }
  for (int i = 0; i < cfg.instances; ++i) {
    causal.update(cau_dev[i], "seed " + std::to_string(seed_of(i, true)));
    table.rows.push_back({std::string("causal"), std::int64_t{i}, std::to_string(seed_of(i, true)), cau_dev[i]});
  }

  const auto plus = ed::plus_state_example();
  auto probabilities = nlohmann::json::array();
  out << "hv: instances=" << cfg.instances << " seed=" << cfg.rng_seed << '\n';
  out << "plus-state example (outcome pair: direct, hidden-variable):\n";
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto chk = ed::hv_repeated_check(plus, a, b);
      example.update(std::max(std::abs(chk.direct - 0.25), std::abs(chk.hidden_variable - 0.25)),
                     "outcomes " + std::to_string(a) + "," + std::to_string(b));
      probabilities.push_back({{"outcome_first", a}, {"outcome_second", b}, {"direct", chk.direct},
                               {"hidden_variable", chk.hidden_variable}});
      out << "  (" << a << "," << b << "): " << format_double(chk.direct) << ", "
          << format_double(chk.hidden_variable) << '\n';
    }

  CommandOutcome outcome;
  outcome.checks = {repeated.result, causal.result, example.result};
  outcome.manifest["results"] = {{"plus_state_example", probabilities},
                                 {"seed_scheme", "repeated: rng_seed + i; causal: rng_seed + instances + i"}};
  print_checks(out, outcome.checks);
  if (!cfg.output.empty()) write_table(cfg.output, cfg.format, table, to_json(cfg), "n/a");
  return outcome;
}

nlohmann::json probe_json(const ConventionChoice& choice, const std::string& requested) {
  nlohmann::json j{{"requested", requested}, {"used", std::string(to_string(choice.used))}};
  if (choice.probe) {
    const auto& p = *choice.probe;
    j["probe"] = {{"n_sites", p.probe.n_sites},
                  {"coupling_j", p.probe.coupling_j},
                  {"mu", p.probe.mu},
                  {"deviation_plain", p.deviation_plain},
                  {"deviation_alternating", p.deviation_alternating}};
  } else {
    j["probe"] = nullptr;
  }
  return j;
}

}  // namespace

ConventionChoice choose_convention(const std::string& requested) {
  if (requested != "auto") return {convention_from_string(requested), std::nullopt};
  try {
    const auto r = ed::resolve_convention();
    return {r.selected, r};
  } catch (const std::runtime_error& e) {
    throw VerificationError(std::string("convention probe failed: ") + e.what());
  }
}

CommandOutcome execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const bool needs_convention = cfg.subcommand != "hv";
  ConventionChoice choice;
  if (needs_convention) choice = choose_convention(cfg.convention);

  CommandOutcome outcome;
  if (cfg.subcommand == "curve")
    outcome = run_curve(cfg, choice, out);
  else if (cfg.subcommand == "sweep")
    outcome = run_sweep(cfg, choice, out);
  else if (cfg.subcommand == "verify")
    outcome = run_verify(cfg, choice, out, err);
  else if (cfg.subcommand == "conjecture")
    outcome = run_conjecture(cfg, choice, out, err);
  else if (cfg.subcommand == "hv")
    outcome = run_hv(cfg, out);
  else
    throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");

  outcome.exit_code = exit_code_for(outcome.checks);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  nlohmann::json manifest;
  manifest["tool"] = "tch";
  manifest["version"] = kToolVersion;
  manifest["config"] = to_json(cfg);
  manifest["convention"] = needs_convention ? probe_json(choice, cfg.convention) : nlohmann::json(nullptr);
  manifest["wall_clock_seconds"] = seconds;
  manifest["data_file"] = cfg.output;
  manifest["checks"] = checks_json(outcome.checks);
  manifest["all_checks_passed"] = outcome.exit_code == kExitOk;
  manifest["results"] = outcome.manifest.value("results", nlohmann::json::object());
  outcome.manifest = std::move(manifest);
  if (!cfg.output.empty()) write_json_file(manifest_path_for(cfg.output), outcome.manifest);
  if (outcome.exit_code != kExitOk) {
    for (const auto& c : outcome.checks)
      if (!c.passed) err << "verification failed: " << c.name << " (" << c.worst_case << ")\n";
  }
  return outcome;
}

CommandOutcome replay(const std::string& manifest_path, const std::optional<std::string>& output_override,
                      std::ostream& out, std::ostream& err) {
  std::ifstream file(manifest_path);
  if (!file) throw std::invalid_argument("cannot read manifest '" + manifest_path + "'");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed manifest '" + manifest_path + "': " + e.what());
  }
  RunConfig cfg;
  try {
    cfg = config_from_json(manifest.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("manifest '" + manifest_path + "' has no usable config: " + e.what());
  }
  if (output_override) cfg.output = *output_override;
  cfg.resolve();
  return execute(cfg, out, err);
}

}  // namespace tch::cli
