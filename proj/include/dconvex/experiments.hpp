#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dconvex/convexity.hpp"
#include "dconvex/discrete_bn.hpp"

namespace dconvex {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Runs fn(0..count-1) on `jobs` worker threads. Unit results must not
// depend on scheduling; callers derive per-unit randomness via mix_seed.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

// Same, with the worker's index (0..jobs-1) as the first argument so each
// worker can own mutable scratch state.
void parallel_for_worker(
    std::size_t count, std::size_t jobs,
    const std::function<void(std::size_t, std::size_t)>& fn);

// ---------------------------------------------------------------------------
// hull: one query set against one network.

struct HullRunResult {
  std::vector<std::string> hull_names;
  VertexSet hull;
  double drc_value = 0;
  std::size_t iterations = 0;
  std::size_t absorptions = 0;
  double millis = 0;
};

// Throws MembershipError for unknown vertex names.
HullRunResult run_hull(const Dag& g,
                       const std::vector<std::string>& query_names);

// ---------------------------------------------------------------------------
// drc: the random-graph protocol (50 networks per size, 20 query sets of
// size 2..8 each) and the same query protocol against a fixed network.

struct DrcConfig {
  std::vector<std::size_t> sizes{200, 400, 600, 800};
  double edge_probability = 0.01;
  std::size_t networks_per_size = 50;
  std::size_t query_sets_per_network = 20;
  std::size_t query_min = 2;
  std::size_t query_max = 8;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  double budget_seconds = 0;  // 0 = no budget
};

struct DrcRow {
  std::string network;
  std::size_t n = 0;
  std::size_t edge_count = 0;
  std::size_t net_index = 0;
  std::size_t query_index = 0;
  std::size_t query_size = 0;
  std::size_t hull_size = 0;
  double drc_value = 0;
  double hull_millis = 0;
  std::uint64_t unit_seed = 0;
};

struct DrcScaleSummary {
  std::size_t n = 0;
  double mean_drc = 0;
  std::size_t rows = 0;
};

struct DrcReport {
  DrcConfig config;
  std::vector<DrcRow> rows;
  std::vector<DrcScaleSummary> means;
  bool truncated = false;
};

DrcReport run_drc(const DrcConfig& config);

struct NetworkDrcResult {
  std::string network;
  std::size_t n = 0;
  std::size_t edge_count = 0;
  double mean_drc = 0;
  std::vector<DrcRow> rows;
};

NetworkDrcResult run_drc_network(const Dag& g, const std::string& name,
                                 std::size_t query_sets, std::size_t query_min,
                                 std::size_t query_max, std::uint64_t seed,
                                 std::size_t jobs);

// ---------------------------------------------------------------------------
// compare: global VE vs hull + localize + VE on |Q| = 2 query sets,
// marginal and conditional per query, with per-phase wall times.

struct CompareConfig {
  std::size_t query_sets = 100;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  double tolerance = 1e-9;
  double budget_seconds = 0;
};

struct CompareRow {
  std::string q1, q2;
  std::size_t hull_size = 0;
  double marginal_dev = 0;
  double conditional_dev = 0;
  double global_marginal_ms = 0;
  double global_conditional_ms = 0;
  double hull_ms = 0;
  double localize_ms = 0;
  double local_marginal_ms = 0;
  double local_conditional_ms = 0;
  bool skipped = false;
};

struct CompareReport {
  CompareConfig config;
  std::vector<CompareRow> rows;
  double total_global_ms = 0;  // marginal + conditional over all queries
  double total_local_ms = 0;   // hull + localize + local queries
  double mean_global_ms = 0;
  double mean_local_ms = 0;
  double max_deviation = 0;
  bool tolerance_ok = true;
  bool truncated = false;
};

CompareReport run_compare(const DiscreteBn& bn, const CompareConfig& config);

// ---------------------------------------------------------------------------
// learn-eval: tree-plus-extra-edge networks, hulls of |Q|-sized query sets,
// CPTs refit from forward samples, exact KL against the localized truth.

struct LearnEvalConfig {
  std::vector<std::size_t> scales{20, 40, 60, 80, 100};
  std::vector<double> extra_edge_probs{0.1, 0.05, 0.01, 0.005};
  std::size_t networks_per_scale = 10;
  std::size_t query_sets_per_network = 5;
  std::size_t query_size = 5;
  std::vector<std::size_t> sample_sizes{1000, 5000};
  std::size_t max_parents = 3;
  std::uint32_t cardinality = 2;
  double smoothing = 1.0;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::size_t joint_cap = kDefaultJointCap;
};

struct LearnEvalRow {
  std::size_t n = 0;
  double p_extra = 0;
  std::size_t net_index = 0;
  std::size_t query_index = 0;
  std::size_t sample_size = 0;
  std::size_t hull_size = 0;
  double kl = 0;
  bool skipped = false;  // hull joint above the enumeration cap
};

struct LearnEvalCell {
  std::size_t n = 0;
  double p_extra = 0;
  std::size_t sample_size = 0;
  double mean_kl = 0;
  std::size_t rows = 0;
  std::size_t skipped = 0;
};

struct LearnEvalReport {
  LearnEvalConfig config;
  std::vector<LearnEvalRow> rows;
  std::vector<LearnEvalCell> cells;
};

LearnEvalReport run_learn_eval(const LearnEvalConfig& config);

// ---------------------------------------------------------------------------
// Report serialization. Timing columns are wall-clock and excluded when
// `with_timings` is false; everything else is byte-reproducible from
// (config, seed, tool version).

std::string to_csv(const DrcReport& report, bool with_timings = true);
std::string to_json(const DrcReport& report, bool with_timings = true);
std::string to_csv(const CompareReport& report, bool with_timings = true);
std::string to_json(const CompareReport& report, bool with_timings = true);
std::string to_csv(const LearnEvalReport& report);
std::string to_json(const LearnEvalReport& report);

}  // namespace dconvex
