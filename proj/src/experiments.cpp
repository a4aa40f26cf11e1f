#include "dconvex/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "dconvex/dag_ops.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/random_graphs.hpp"

namespace dconvex {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180: quote fields containing separators, quotes or line breaks.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

constexpr const char* kCrlf = "\r\n";

}  // namespace

void parallel_for_worker(
    std::size_t count, std::size_t jobs,
    const std::function<void(std::size_t, std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(0, i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&](std::size_t worker_id) {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(worker_id, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(jobs, count);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker, t);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  parallel_for_worker(count, jobs,
                      [&fn](std::size_t, std::size_t i) { fn(i); });
}

// ---------------------------------------------------------------------------

HullRunResult run_hull(const Dag& g,
                       const std::vector<std::string>& query_names) {
  VertexSet r(g.vertex_count());
  for (const auto& name : query_names) {
    const auto v = g.index_of(name);
    if (!v) throw MembershipError("unknown vertex name '" + name + "'");
    r.insert(*v);
  }
  const auto start = Clock::now();
  const HullResult hull = cmdsa(g, r);
  HullRunResult out;
  out.millis = ms_since(start);
  out.hull = hull.hull;
  out.drc_value = hull.drc;
  out.iterations = hull.iterations;
  out.absorptions = hull.absorbed.size();
  hull.hull.for_each([&](VertexId v) { out.hull_names.push_back(g.name(v)); });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// One DRC unit: a seeded query set of size query_min..query_max against a
// graph, reporting hull size and wall time.
DrcRow drc_unit(const Dag& g, std::uint64_t unit_seed, std::size_t query_min,
                std::size_t query_max) {
  std::mt19937_64 rng(unit_seed);
  const std::size_t n = g.vertex_count();
  const std::size_t span = query_max - query_min + 1;
  const std::size_t target =
      std::min(n, query_min + static_cast<std::size_t>(
                                  uniform_below(rng, span)));
  VertexSet r(n);
  while (r.size() < target) {
    r.insert(static_cast<VertexId>(uniform_below(rng, n)));
  }
  const auto start = Clock::now();
  const HullResult hull = cmdsa(g, r);
  DrcRow row;
  row.hull_millis = ms_since(start);
  row.n = n;
  row.edge_count = g.edge_count();
  row.query_size = r.size();
  row.hull_size = hull.hull.size();
  row.drc_value = hull.drc;
  row.unit_seed = unit_seed;
  return row;
}

}  // namespace

DrcReport run_drc(const DrcConfig& config) {
  DrcReport report;
  report.config = config;
  const auto start = Clock::now();

  for (std::size_t scale_idx = 0; scale_idx < config.sizes.size();
       ++scale_idx) {
    const std::size_t n = config.sizes[scale_idx];
    for (std::size_t net = 0; net < config.networks_per_size; ++net) {
      if (config.budget_seconds > 0 &&
          ms_since(start) > config.budget_seconds * 1000.0) {
        report.truncated = true;
        break;
      }
      const std::uint64_t net_seed =
          mix_seed(config.seed, scale_idx * 1000003 + net);
      const Dag g = random_dag(n, config.edge_probability, net_seed);

      std::vector<DrcRow> rows(config.query_sets_per_network);
      parallel_for(config.query_sets_per_network, config.jobs,
                   [&](std::size_t q) {
                     rows[q] = drc_unit(g, mix_seed(net_seed, q + 1),
                                        config.query_min, config.query_max);
                     rows[q].network = "random";
                     rows[q].net_index = net;
                     rows[q].query_index = q;
                   });
      for (auto& row : rows) report.rows.push_back(std::move(row));
    }
    if (report.truncated) break;
  }

  for (std::size_t n : config.sizes) {
    DrcScaleSummary summary;
    summary.n = n;
    for (const auto& row : report.rows) {
      if (row.n == n) {
        summary.mean_drc += row.drc_value;
        ++summary.rows;
      }
    }
    if (summary.rows) summary.mean_drc /= static_cast<double>(summary.rows);
    report.means.push_back(summary);
  }
  return report;
}

NetworkDrcResult run_drc_network(const Dag& g, const std::string& name,
                                 std::size_t query_sets, std::size_t query_min,
                                 std::size_t query_max, std::uint64_t seed,
                                 std::size_t jobs) {
  NetworkDrcResult result;
  result.network = name;
  result.n = g.vertex_count();
  result.edge_count = g.edge_count();
  result.rows.resize(query_sets);
  parallel_for(query_sets, jobs, [&](std::size_t q) {
    result.rows[q] = drc_unit(g, mix_seed(seed, q + 1), query_min, query_max);
    result.rows[q].network = name;
    result.rows[q].query_index = q;
  });
  for (const auto& row : result.rows) result.mean_drc += row.drc_value;
  if (query_sets) result.mean_drc /= static_cast<double>(query_sets);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

double max_abs_table_diff(const Factor& a, const Factor& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.table()[i] - b.table()[i]));
  }
  return worst;
}

struct CompareUnit {
  VertexId q1, q2;         // global ids, q1 < q2
  VertexId instantiated;   // one of q1/q2
  std::uint32_t state;
};

CompareUnit draw_compare_unit(const DiscreteBn& bn, std::uint64_t unit_seed) {
  std::mt19937_64 rng(unit_seed);
  const std::size_t n = bn.vertex_count();
  CompareUnit unit;
  unit.q1 = static_cast<VertexId>(uniform_below(rng, n));
  do {
    unit.q2 = static_cast<VertexId>(uniform_below(rng, n));
  } while (unit.q2 == unit.q1);
  if (unit.q2 < unit.q1) std::swap(unit.q1, unit.q2);
  unit.instantiated = uniform_below(rng, 2) ? unit.q2 : unit.q1;
  unit.state = static_cast<std::uint32_t>(
      uniform_below(rng, bn.cardinality(unit.instantiated)));
  return unit;
}

CompareRow compare_unit(const DiscreteBn& bn, const CompareUnit& unit,
                        CptCache* cache) {
  const std::size_t n = bn.vertex_count();
  CompareRow row;
  row.q1 = bn.dag().name(unit.q1);
  row.q2 = bn.dag().name(unit.q2);

  VertexSet q(n);
  q.insert(unit.q1);
  q.insert(unit.q2);
  const VertexId other = unit.instantiated == unit.q1 ? unit.q2 : unit.q1;

  // Global VE: joint marginal of the pair, then the conditional of one
  // given the other's sampled state.
  auto t0 = Clock::now();
  const Factor global_marginal = variable_elimination(bn, q, EvidenceMap{});
  row.global_marginal_ms = ms_since(t0);

  EvidenceMap evidence;
  evidence.set(unit.instantiated, unit.state);
  t0 = Clock::now();
  const Factor global_conditional =
      variable_elimination(bn, VertexSet::of(n, {other}), evidence);
  row.global_conditional_ms = ms_since(t0);

  // Hull route.
  t0 = Clock::now();
  const HullResult hull = cmdsa(bn.dag(), q);
  row.hull_ms = ms_since(t0);
  row.hull_size = hull.hull.size();

  t0 = Clock::now();
  const LocalizedBn local = localize_from_global(bn, hull.hull, cache);
  row.localize_ms = ms_since(t0);

  const std::size_t k = local.bn.vertex_count();
  VertexSet lq(k);
  lq.insert(local.from_original[unit.q1]);
  lq.insert(local.from_original[unit.q2]);
  t0 = Clock::now();
  const Factor local_marginal =
      variable_elimination(local.bn, lq, EvidenceMap{});
  row.local_marginal_ms = ms_since(t0);

  EvidenceMap local_evidence;
  local_evidence.set(local.from_original[unit.instantiated], unit.state);
  t0 = Clock::now();
  const Factor local_conditional = variable_elimination(
      local.bn, VertexSet::of(k, {local.from_original[other]}),
      local_evidence);
  row.local_conditional_ms = ms_since(t0);

  row.marginal_dev = max_abs_table_diff(global_marginal, local_marginal);
  row.conditional_dev =
      max_abs_table_diff(global_conditional, local_conditional);
  return row;
}

}  // namespace

CompareReport run_compare(const DiscreteBn& bn, const CompareConfig& config) {
  CompareReport report;
  report.config = config;
  report.rows.resize(config.query_sets);

  // Warmup: run the first unit untimed so cold-start costs (page faults,
  // allocator growth) stay out of the timing columns.
  if (config.query_sets > 0) {
    CptCache warm_cache;
    compare_unit(bn, draw_compare_unit(bn, mix_seed(config.seed, 1)),
                 &warm_cache);
  }

  const auto start = Clock::now();
  std::atomic<bool> over_budget{false};
  std::vector<CptCache> caches(std::max<std::size_t>(config.jobs, 1));
  parallel_for_worker(
      config.query_sets, config.jobs, [&](std::size_t worker, std::size_t i) {
        const CompareUnit unit =
            draw_compare_unit(bn, mix_seed(config.seed, i + 1));
        if (config.budget_seconds > 0 &&
            ms_since(start) > config.budget_seconds * 1000.0) {
          over_budget = true;
        }
        if (over_budget) {
          CompareRow row;
          row.q1 = bn.dag().name(unit.q1);
          row.q2 = bn.dag().name(unit.q2);
          row.skipped = true;
          report.rows[i] = std::move(row);
          return;
        }
        report.rows[i] = compare_unit(bn, unit, &caches[worker]);
      });

  for (const auto& row : report.rows) {
    if (row.skipped) {
      report.truncated = true;
      continue;
    }
    report.total_global_ms +=
        row.global_marginal_ms + row.global_conditional_ms;
    report.total_local_ms += row.hull_ms + row.localize_ms +
                             row.local_marginal_ms + row.local_conditional_ms;
    report.max_deviation = std::max(
        report.max_deviation, std::max(row.marginal_dev, row.conditional_dev));
  }
  if (config.query_sets) {
    const auto count = static_cast<double>(config.query_sets);
    report.mean_global_ms = report.total_global_ms / count;
    report.mean_local_ms = report.total_local_ms / count;
  }
  report.tolerance_ok = report.max_deviation <= config.tolerance;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct LearnUnitSpec {
  std::size_t scale_idx, p_idx, net_index, query_index;
};

}  // namespace

LearnEvalReport run_learn_eval(const LearnEvalConfig& config) {
  LearnEvalReport report;
  report.config = config;

  std::vector<LearnUnitSpec> units;
  for (std::size_t si = 0; si < config.scales.size(); ++si) {
    for (std::size_t pi = 0; pi < config.extra_edge_probs.size(); ++pi) {
      for (std::size_t net = 0; net < config.networks_per_scale; ++net) {
        for (std::size_t qi = 0; qi < config.query_sets_per_network; ++qi) {
          units.push_back({si, pi, net, qi});
        }
      }
    }
  }

  std::vector<std::vector<LearnEvalRow>> rows(units.size());
  parallel_for(units.size(), config.jobs, [&](std::size_t ui) {
    const LearnUnitSpec spec = units[ui];
    const std::size_t n = config.scales[spec.scale_idx];
    const double p_extra = config.extra_edge_probs[spec.p_idx];
    const std::uint64_t net_seed =
        mix_seed(config.seed, (spec.scale_idx * 101 + spec.p_idx) * 1009 +
                                  spec.net_index);
    const Dag g = random_tree_dag(n, p_extra, config.max_parents, net_seed);
    const DiscreteBn truth = random_cpts(
        g, std::vector<std::uint32_t>(n, config.cardinality),
        mix_seed(net_seed, 7));

    std::mt19937_64 rng(mix_seed(net_seed, spec.query_index + 100));
    VertexSet q(n);
    while (q.size() < std::min<std::size_t>(config.query_size, n)) {
      q.insert(static_cast<VertexId>(uniform_below(rng, n)));
    }
    const VertexSet hull = cmdsa(g, q).hull;

    for (std::size_t sample_size : config.sample_sizes) {
      LearnEvalRow row;
      row.n = n;
      row.p_extra = p_extra;
      row.net_index = spec.net_index;
      row.query_index = spec.query_index;
      row.sample_size = sample_size;
      row.hull_size = hull.size();

      std::size_t hull_states = 1;
      bool too_big = false;
      hull.for_each([&](VertexId v) {
        if (hull_states > config.joint_cap / truth.cardinality(v)) {
          too_big = true;
        } else {
          hull_states *= truth.cardinality(v);
        }
      });
      if (too_big) {
        row.skipped = true;
        rows[ui].push_back(row);
        continue;
      }

      const LocalizedBn truth_local = localize_from_global(truth, hull);
      const Dataset samples = forward_sample(
          truth, sample_size,
          mix_seed(net_seed, spec.query_index * 31 + sample_size));
      const Dataset local_data = samples.select(truth_local.to_original);
      const DiscreteBn fitted =
          mle_fit(truth_local.bn.dag(), truth_local.bn.cardinalities(),
                  local_data, config.smoothing);
      row.kl = kl_divergence(truth_local.bn, fitted, config.joint_cap);
      rows[ui].push_back(row);
    }
  });

  for (auto& unit_rows : rows) {
    for (auto& row : unit_rows) report.rows.push_back(std::move(row));
  }

  for (std::size_t n : config.scales) {
    for (double p : config.extra_edge_probs) {
      for (std::size_t s : config.sample_sizes) {
        LearnEvalCell cell;
        cell.n = n;
        cell.p_extra = p;
        cell.sample_size = s;
        for (const auto& row : report.rows) {
          if (row.n != n || row.p_extra != p || row.sample_size != s) continue;
          if (row.skipped) {
            ++cell.skipped;
            continue;
          }
          cell.mean_kl += row.kl;
          ++cell.rows;
        }
        if (cell.rows) cell.mean_kl /= static_cast<double>(cell.rows);
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json config_json(const DrcConfig& c) {
  return {{"sizes", c.sizes},
          {"edge_probability", c.edge_probability},
          {"networks_per_size", c.networks_per_size},
          {"query_sets_per_network", c.query_sets_per_network},
          {"query_min", c.query_min},
          {"query_max", c.query_max},
          {"seed", c.seed},
          {"jobs", c.jobs},
          {"budget_seconds", c.budget_seconds}};
}

nlohmann::json config_json(const CompareConfig& c) {
  return {{"query_sets", c.query_sets},
          {"seed", c.seed},
          {"jobs", c.jobs},
          {"tolerance", c.tolerance},
          {"budget_seconds", c.budget_seconds}};
}

nlohmann::json config_json(const LearnEvalConfig& c) {
  return {{"scales", c.scales},
          {"extra_edge_probs", c.extra_edge_probs},
          {"networks_per_scale", c.networks_per_scale},
          {"query_sets_per_network", c.query_sets_per_network},
          {"query_size", c.query_size},
          {"sample_sizes", c.sample_sizes},
          {"max_parents", c.max_parents},
          {"cardinality", c.cardinality},
          {"smoothing", c.smoothing},
          {"seed", c.seed},
          {"jobs", c.jobs},
          {"joint_cap", c.joint_cap}};
}

}  // namespace

std::string to_csv(const DrcReport& report, bool with_timings) {
  std::string out = "network,n,edges,net_index,query_index,query_size,"
                    "hull_size,drc,unit_seed";
  if (with_timings) out += ",hull_ms";
  out += kCrlf;
  for (const auto& r : report.rows) {
    out += csv_field(r.network) + "," + std::to_string(r.n) + "," +
           std::to_string(r.edge_count) + "," + std::to_string(r.net_index) +
           "," + std::to_string(r.query_index) + "," +
           std::to_string(r.query_size) + "," + std::to_string(r.hull_size) +
           "," + format_double(r.drc_value) + "," +
           std::to_string(r.unit_seed);
    if (with_timings) out += "," + format_double(r.hull_millis);
    out += kCrlf;
  }
  return out;
}

std::string to_json(const DrcReport& report, bool with_timings) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row = {{"network", r.network},
                          {"n", r.n},
                          {"edges", r.edge_count},
                          {"net_index", r.net_index},
                          {"query_index", r.query_index},
                          {"query_size", r.query_size},
                          {"hull_size", r.hull_size},
                          {"drc", r.drc_value},
                          {"unit_seed", r.unit_seed}};
    if (with_timings) row["hull_ms"] = r.hull_millis;
    rows.push_back(row);
  }
  nlohmann::json means = nlohmann::json::array();
  for (const auto& m : report.means) {
    means.push_back({{"n", m.n}, {"mean_drc", m.mean_drc}, {"rows", m.rows}});
  }
  nlohmann::json j = {{"schema_version", kReportSchemaVersion},
                      {"tool_version", kToolVersion},
                      {"kind", "drc"},
                      {"config", config_json(report.config)},
                      {"rows", rows},
                      {"aggregates", {{"means", means}}},
                      {"truncated", report.truncated}};
  return j.dump(2);
}

std::string to_csv(const CompareReport& report, bool with_timings) {
  std::string out = "q1,q2,hull_size,marginal_dev,conditional_dev,skipped";
  if (with_timings) {
    out += ",global_marginal_ms,global_conditional_ms,hull_ms,localize_ms,"
           "local_marginal_ms,local_conditional_ms";
  }
  out += kCrlf;
  for (const auto& r : report.rows) {
    out += csv_field(r.q1) + "," + csv_field(r.q2) + "," +
           std::to_string(r.hull_size) + "," + format_double(r.marginal_dev) +
           "," + format_double(r.conditional_dev) + "," +
           (r.skipped ? "1" : "0");
    if (with_timings) {
      out += "," + format_double(r.global_marginal_ms) + "," +
             format_double(r.global_conditional_ms) + "," +
             format_double(r.hull_ms) + "," + format_double(r.localize_ms) +
             "," + format_double(r.local_marginal_ms) + "," +
             format_double(r.local_conditional_ms);
    }
    out += kCrlf;
  }
  return out;
}

std::string to_json(const CompareReport& report, bool with_timings) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row = {{"q1", r.q1},
                          {"q2", r.q2},
                          {"hull_size", r.hull_size},
                          {"marginal_dev", r.marginal_dev},
                          {"conditional_dev", r.conditional_dev},
                          {"skipped", r.skipped}};
    if (with_timings) {
      row["global_marginal_ms"] = r.global_marginal_ms;
      row["global_conditional_ms"] = r.global_conditional_ms;
      row["hull_ms"] = r.hull_ms;
      row["localize_ms"] = r.localize_ms;
      row["local_marginal_ms"] = r.local_marginal_ms;
      row["local_conditional_ms"] = r.local_conditional_ms;
    }
    rows.push_back(row);
  }
  nlohmann::json aggregates = {{"max_deviation", report.max_deviation},
                               {"tolerance_ok", report.tolerance_ok}};
  if (with_timings) {
    aggregates["total_global_ms"] = report.total_global_ms;
    aggregates["total_local_ms"] = report.total_local_ms;
    aggregates["mean_global_ms"] = report.mean_global_ms;
    aggregates["mean_local_ms"] = report.mean_local_ms;
  }
  nlohmann::json j = {{"schema_version", kReportSchemaVersion},
                      {"tool_version", kToolVersion},
                      {"kind", "compare"},
                      {"config", config_json(report.config)},
                      {"rows", rows},
                      {"aggregates", aggregates},
                      {"truncated", report.truncated}};
  return j.dump(2);
}

std::string to_csv(const LearnEvalReport& report) {
  std::string out =
      "n,p_extra,net_index,query_index,sample_size,hull_size,kl,skipped";
  out += kCrlf;
  for (const auto& r : report.rows) {
    out += std::to_string(r.n) + "," + format_double(r.p_extra) + "," +
           std::to_string(r.net_index) + "," + std::to_string(r.query_index) +
           "," + std::to_string(r.sample_size) + "," +
           std::to_string(r.hull_size) + "," + format_double(r.kl) + "," +
           (r.skipped ? "1" : "0") + kCrlf;
  }
  return out;
}

std::string to_json(const LearnEvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"p_extra", r.p_extra},
                    {"net_index", r.net_index},
                    {"query_index", r.query_index},
                    {"sample_size", r.sample_size},
                    {"hull_size", r.hull_size},
                    {"kl", r.kl},
                    {"skipped", r.skipped}});
  }
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"n", c.n},
                     {"p_extra", c.p_extra},
                     {"sample_size", c.sample_size},
                     {"mean_kl", c.mean_kl},
                     {"rows", c.rows},
                     {"skipped", c.skipped}});
  }
  nlohmann::json j = {{"schema_version", kReportSchemaVersion},
                      {"tool_version", kToolVersion},
                      {"kind", "learn-eval"},
                      {"config", config_json(report.config)},
                      {"rows", rows},
                      {"aggregates", {{"cells", cells}}}};
  return j.dump(2);
}

}  // namespace dconvex
