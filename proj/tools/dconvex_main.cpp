// dconvex: collapse Bayesian networks onto the minimal localized
// sub-network (the directed convex hull of a query set) and reproduce the
// reduction / inference / parameter-learning experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dconvex/bif.hpp"
#include "dconvex/convexity.hpp"
#include "dconvex/edge_list.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/experiments.hpp"
#include "dconvex/net_json.hpp"
#include "dconvex/random_graphs.hpp"

namespace {

using namespace dconvex;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCorrectness = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw UsageError("cannot write '" + path + "'");
  out << content;
}

std::string infer_format(const std::string& path, const std::string& format) {
  if (!format.empty()) return format;
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".bif") return "bif";
  if (ext == ".json") return "json";
  if (ext == ".edges" || ext == ".txt") return "edges";
  throw UsageError("cannot infer format of '" + path +
                   "'; pass --format bif|json|edges");
}

DiscreteBn load_bn(const std::string& path, const std::string& format) {
  const std::string fmt = infer_format(path, format);
  if (fmt == "bif") return to_discrete_bn(parse_bif(read_file(path)));
  if (fmt == "json") return read_json(read_file(path));
  throw UsageError("format '" + fmt + "' carries no CPTs; use bif or json");
}

Dag load_dag(const std::string& path, const std::string& format) {
  const std::string fmt = infer_format(path, format);
  if (fmt == "edges") return read_edge_list(read_file(path));
  return load_bn(path, fmt).dag();
}

void emit_report(const std::string& out_path, const std::string& report_kind,
                 const std::string& csv, const std::string& json) {
  if (out_path.empty()) return;
  write_file(out_path, report_kind == "json" ? json : csv);
  std::cout << "report written to " << out_path << "\n";
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"structural dimension reduction for Bayesian networks"};
  app.require_subcommand(1);

  std::string net_path, net_format, out_path;
  std::string report_kind = "csv";
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  double budget_secs = 0;

  auto add_common = [&](CLI::App* cmd, bool with_net) {
    if (with_net) {
      cmd->add_option("--net", net_path, "network file");
      cmd->add_option("--format", net_format, "bif|json|edges");
    }
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--jobs", jobs, "worker threads");
    cmd->add_option("--budget-secs", budget_secs, "wall-clock budget");
    cmd->add_option("--out", out_path, "report file");
    cmd->add_option("--report", report_kind, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // hull
  auto* hull_cmd = app.add_subcommand("hull", "d-convex hull of a query set");
  std::string query_csv;
  add_common(hull_cmd, true);
  hull_cmd->add_option("-R,--query", query_csv, "comma-separated vertex names")
      ->required();

  // drc
  auto* drc_cmd =
      app.add_subcommand("drc", "dimension-reduction capability study");
  DrcConfig drc_config;
  add_common(drc_cmd, true);
  drc_cmd->add_option("--sizes", drc_config.sizes, "network sizes")
      ->delimiter(',');
  drc_cmd->add_option("--p", drc_config.edge_probability,
                      "edge connection probability");
  drc_cmd->add_option("--nets", drc_config.networks_per_size,
                      "networks per size");
  drc_cmd->add_option("--queries", drc_config.query_sets_per_network,
                      "query sets per network");
  drc_cmd->add_option("--rmin", drc_config.query_min, "smallest query set");
  drc_cmd->add_option("--rmax", drc_config.query_max, "largest query set");

  // compare
  auto* compare_cmd = app.add_subcommand(
      "compare", "global VE vs hull-localized VE, timing and deviation");
  CompareConfig compare_config;
  add_common(compare_cmd, true);
  compare_cmd->add_option("--queries", compare_config.query_sets,
                          "number of |Q|=2 query sets");
  compare_cmd->add_option("--tolerance", compare_config.tolerance,
                          "max allowed probability deviation");

  // learn-eval
  auto* learn_cmd = app.add_subcommand(
      "learn-eval", "KL of refit hull models against localized truth");
  LearnEvalConfig learn_config;
  add_common(learn_cmd, false);
  learn_cmd->add_option("--scales", learn_config.scales, "network sizes")
      ->delimiter(',');
  learn_cmd->add_option("--p-extra", learn_config.extra_edge_probs,
                        "extra-edge probabilities")
      ->delimiter(',');
  learn_cmd->add_option("--nets", learn_config.networks_per_scale,
                        "networks per scale");
  learn_cmd->add_option("--queries", learn_config.query_sets_per_network,
                        "query sets per network");
  learn_cmd->add_option("--qsize", learn_config.query_size, "query set size");
  learn_cmd->add_option("--samples", learn_config.sample_sizes,
                        "sample sizes")
      ->delimiter(',');
  learn_cmd->add_option("--max-parents", learn_config.max_parents,
                        "in-degree cap");
  learn_cmd->add_option("--cards", learn_config.cardinality,
                        "variable cardinality");
  learn_cmd->add_option("--smoothing", learn_config.smoothing,
                        "additive smoothing");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate seeded networks");
  std::string gen_kind = "random";
  std::size_t gen_n = 20;
  double gen_p = 0.01, gen_p_extra = 0.1;
  std::size_t gen_max_parents = 3;
  std::uint32_t gen_cards = 2;
  std::string gen_format = "json";
  add_common(gen_cmd, false);
  gen_cmd->add_option("--kind", gen_kind, "random|tree")
      ->check(CLI::IsMember({"random", "tree"}));
  gen_cmd->add_option("--n", gen_n, "vertex count");
  gen_cmd->add_option("--p", gen_p, "edge probability (random)");
  gen_cmd->add_option("--p-extra", gen_p_extra, "extra-edge probability (tree)");
  gen_cmd->add_option("--max-parents", gen_max_parents, "in-degree cap (tree)");
  gen_cmd->add_option("--cards", gen_cards, "variable cardinality");
  gen_cmd->add_option("--gen-format", gen_format, "json|bif|edges")
      ->check(CLI::IsMember({"json", "bif", "edges"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (hull_cmd->parsed()) {
    if (net_path.empty()) throw UsageError("hull requires --net");
    const Dag g = load_dag(net_path, net_format);
    const HullRunResult res = run_hull(g, split_names(query_csv));
    std::cout << "hull (" << res.hull_names.size() << " of "
              << g.vertex_count() << "):";
    for (const auto& name : res.hull_names) std::cout << " " << name;
    std::cout << "\ndrc: " << res.drc_value
              << "\niterations: " << res.iterations
              << "\nabsorptions: " << res.absorptions
              << "\ntime-ms: " << res.millis << "\n";
    return kExitOk;
  }

  if (drc_cmd->parsed()) {
    if (!net_path.empty()) {
      const Dag g = load_dag(net_path, net_format);
      const NetworkDrcResult res = run_drc_network(
          g, std::filesystem::path(net_path).stem().string(),
          drc_config.query_sets_per_network, drc_config.query_min,
          drc_config.query_max, seed, jobs);
      std::cout << res.network << ": n=" << res.n << " |E|=" << res.edge_count
                << " mean DRC=" << res.mean_drc << " over " << res.rows.size()
                << " query sets\n";
      DrcReport report;
      report.config = drc_config;
      report.config.seed = seed;
      report.config.jobs = jobs;
      report.rows = res.rows;
      emit_report(out_path, report_kind, to_csv(report), to_json(report));
      return kExitOk;
    }
    drc_config.seed = seed;
    drc_config.jobs = jobs;
    drc_config.budget_seconds = budget_secs;
    const DrcReport report = run_drc(drc_config);
    for (const auto& m : report.means) {
      std::cout << "n=" << m.n << ": mean DRC=" << m.mean_drc << " ("
                << m.rows << " rows)\n";
    }
    if (report.truncated) std::cout << "NOTE: budget exceeded, partial report\n";
    emit_report(out_path, report_kind, to_csv(report), to_json(report));
    return kExitOk;
  }

  if (compare_cmd->parsed()) {
    if (net_path.empty()) throw UsageError("compare requires --net");
    const DiscreteBn bn = load_bn(net_path, net_format);
    compare_config.seed = seed;
    compare_config.jobs = jobs;
    compare_config.budget_seconds = budget_secs;
    const CompareReport report = run_compare(bn, compare_config);
    std::cout << "queries: " << report.rows.size()
              << "\nmax deviation: " << report.max_deviation
              << "\nglobal VE total ms: " << report.total_global_ms
              << " (mean " << report.mean_global_ms << ")"
              << "\ncon+VE total ms: " << report.total_local_ms << " (mean "
              << report.mean_local_ms << ")\n";
    if (report.truncated) std::cout << "NOTE: budget exceeded, partial report\n";
    emit_report(out_path, report_kind, to_csv(report), to_json(report));
    if (!report.tolerance_ok) {
      std::cerr << "correctness failure: deviation " << report.max_deviation
                << " above tolerance " << report.config.tolerance << "\n";
      return kExitCorrectness;
    }
    return kExitOk;
  }

  if (learn_cmd->parsed()) {
    learn_config.seed = seed;
    learn_config.jobs = jobs;
    const LearnEvalReport report = run_learn_eval(learn_config);
    for (const auto& cell : report.cells) {
      std::cout << "n=" << cell.n << " p=" << cell.p_extra
                << " samples=" << cell.sample_size
                << ": mean KL=" << cell.mean_kl << " (" << cell.rows
                << " rows, " << cell.skipped << " skipped)\n";
    }
    emit_report(out_path, report_kind, to_csv(report), to_json(report));
    return kExitOk;
  }

  if (gen_cmd->parsed()) {
    if (out_path.empty()) throw UsageError("gen requires --out");
    const Dag g = gen_kind == "tree"
                      ? random_tree_dag(gen_n, gen_p_extra, gen_max_parents,
                                        seed)
                      : random_dag(gen_n, gen_p, seed);
    if (gen_format == "edges") {
      write_file(out_path, write_edge_list(g));
    } else {
      const DiscreteBn bn = random_cpts(
          g, std::vector<std::uint32_t>(g.vertex_count(), gen_cards),
          mix_seed(seed, 1));
      if (gen_format == "json") {
        write_file(out_path, write_json(bn, "generated"));
      } else {
        write_file(out_path, write_bif(make_document(bn, "generated")));
      }
    }
    std::cout << "wrote " << out_path << " (" << g.vertex_count()
              << " vertices, " << g.edge_count() << " edges)\n";
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MembershipError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
