// mfc: command-line driver for metric forest completion experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfc/analysis.hpp"
#include "mfc/completion.hpp"
#include "mfc/dataset.hpp"
#include "mfc/forest.hpp"
#include "mfc/harness.hpp"
#include "mfc/representatives.hpp"
#include "mfc/verify.hpp"

namespace {

struct DataFlags {
  std::string path;
  std::string format = "vectors";
  std::string metric;
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  bool keep_order = false;

  void attach(CLI::App& cmd, bool required = true) {
    auto* opt = cmd.add_option("--data", path, "Input file");
    if (required) opt->required();
    cmd.add_option("--format", format, "vectors | strings | sets | sequences")->capture_default_str();
    cmd.add_option("--metric", metric, "euclidean | linf | hamming | jaccard | levenshtein (default per format)");
    cmd.add_option("--sample", sample, "Uniform sample size (default: all rows)");
    cmd.add_option("--seed", seed, "Sampling / shuffling seed")->capture_default_str();
    cmd.add_flag("--keep-order", keep_order, "Keep file order (no shuffle); incompatible with --sample");
  }

  mfc::DatasetSpec spec() const {
    mfc::DatasetSpec s;
    s.path = path;
    const auto f = mfc::parse_format(format);
    if (!f) throw mfc::ConfigError("unknown format '" + format + "'");
    s.format = *f;
    if (metric.empty()) {
      switch (*f) {
        case mfc::Format::Vectors: s.metric = mfc::MetricKind::Euclidean; break;
        case mfc::Format::Strings: s.metric = mfc::MetricKind::Levenshtein; break;
        case mfc::Format::Sets: s.metric = mfc::MetricKind::Jaccard; break;
        case mfc::Format::Sequences: s.metric = mfc::MetricKind::Hamming; break;
      }
    } else {
      const auto m = mfc::parse_metric(metric);
      if (!m) throw mfc::ConfigError("unknown metric '" + metric + "'");
      s.metric = *m;
    }
    s.sample_size = sample;
    s.seed = seed;
    return s;
  }

  mfc::MetricSpace load() const {
    auto s = spec();
    if (!keep_order) return mfc::load_dataset(s);
    if (sample) throw mfc::ConfigError("--keep-order cannot be combined with --sample");
    std::ifstream in(s.path, std::ios::binary);
    if (!in) throw mfc::ArgumentError("cannot open dataset '" + s.path + "'");
    if (!mfc::format_supports(s.format, s.metric)) throw mfc::ConfigError("format does not support metric");
    return mfc::MetricSpace(mfc::parse_points(in, s.format), s.metric);
  }
};

template <typename T, typename Reader>
T read_file(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw mfc::ArgumentError("cannot open '" + path + "'");
  return reader(in);
}

template <typename Writer>
void write_file(const std::string& path, Writer writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mfc::ArgumentError("cannot write '" + path + "'");
  writer(out);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Fills options not given on the command line from a key=value file.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mfc::ArgumentError("cannot open config '" + path + "'");
  CLI::ConfigTOML parser;
  for (const auto& item : parser.from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;
    auto* opt = cmd.get_option_no_throw("--" + item.name);
    if (!opt || opt->get_name() == "--config") {
      throw mfc::ConfigError(path + ": unknown key '" + item.name + "'");
    }
    if (opt->count() > 0) continue;
    if (opt->get_items_expected_max() == 1) {
      opt->add_result(CLI::detail::join(item.inputs, ","));
    } else {
      for (const auto& value : item.inputs) opt->add_result(value);
    }
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate metric MSTs by multi-representative forest completion"};
  app.require_subcommand(1);

  // forest
  DataFlags forest_data;
  std::optional<std::size_t> forest_t;
  std::string forest_method = "kcenter";
  std::string forest_out;
  auto* forest_cmd = app.add_subcommand("forest", "Build an initial forest");
  forest_data.attach(*forest_cmd);
  forest_cmd->add_option("--t", forest_t, "Number of components (default floor(sqrt(n)))");
  forest_cmd->add_option("--method", forest_method, "kcenter | kruskal")->capture_default_str();
  forest_cmd->add_option("--out", forest_out, "Forest file")->required();

  // complete
  DataFlags complete_data;
  std::string complete_forest;
  std::string complete_variant = "dp";
  std::size_t complete_b = 0;
  std::string complete_reps_in;
  bool complete_opt = false;
  bool complete_no_timing = false;
  std::string complete_out;
  std::string complete_tree_out;
  std::string complete_reps_out;
  auto* complete_cmd = app.add_subcommand("complete", "Complete a forest with one variant and budget");
  complete_data.attach(*complete_cmd);
  complete_cmd->add_option("--forest", complete_forest, "Forest file")->required();
  complete_cmd->add_option("--variant", complete_variant, "dp | greedy | fixed | given")->capture_default_str();
  complete_cmd->add_option("--b", complete_b, "Extra representative budget")->capture_default_str();
  complete_cmd->add_option("--reps", complete_reps_in, "Representative file (variant 'given')");
  complete_cmd->add_flag("--opt", complete_opt, "Also run the exact completion and report ratios");
  complete_cmd->add_flag("--no-timing", complete_no_timing, "Write elapsed_ms as 0 (byte-reproducible output)");
  complete_cmd->add_option("--out", complete_out, "Results CSV (appended)");
  complete_cmd->add_option("--tree-out", complete_tree_out, "Write the completed tree");
  complete_cmd->add_option("--reps-out", complete_reps_out, "Write the chosen representatives");

  // sweep
  DataFlags sweep_data;
  std::string sweep_synthetic;
  std::size_t sweep_n = 1000;
  std::size_t sweep_dim = 8;
  std::vector<double> sweep_tight;
  std::optional<std::size_t> sweep_t;
  std::string sweep_method = "kcenter";
  std::string sweep_budgets;
  std::string sweep_multiples;
  std::string sweep_variants = "dp,greedy,fixed";
  std::string sweep_seeds;
  bool sweep_no_opt = false;
  bool sweep_no_timing = false;
  std::string sweep_out;
  std::string sweep_summary;
  auto* sweep_cmd = app.add_subcommand("sweep", "Seeds x variants x budgets experiment grid");
  std::string sweep_config;
  sweep_cmd->add_option("--config", sweep_config, "key=value config file (flags win)");
  sweep_data.attach(*sweep_cmd, false);
  sweep_cmd->add_option("--synthetic", sweep_synthetic, "Generate data instead: euclidean | linf | hamming | jaccard | levenshtein");
  sweep_cmd->add_option("--n", sweep_n, "Synthetic point count")->capture_default_str();
  sweep_cmd->add_option("--dim", sweep_dim, "Synthetic dimension / size scale")->capture_default_str();
  sweep_cmd->add_option("--tight", sweep_tight, "Worst-case instance: p ell eps")->expected(3);
  sweep_cmd->add_option("--t", sweep_t, "Number of components (default floor(sqrt(n)))");
  sweep_cmd->add_option("--method", sweep_method, "kcenter | kruskal")->capture_default_str();
  sweep_cmd->add_option("--budgets", sweep_budgets, "Comma-separated absolute budgets");
  sweep_cmd->add_option("--budget-multiples", sweep_multiples, "Comma-separated multiples of t (default 0,2,...,38)");
  sweep_cmd->add_option("--variants", sweep_variants, "Comma-separated subset of dp,greedy,fixed")->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep_seeds, "Comma-separated seeds (default 1..16)");
  sweep_cmd->add_flag("--no-opt", sweep_no_opt, "Skip the exact completion (no ratios)");
  sweep_cmd->add_flag("--no-timing", sweep_no_timing, "Write elapsed_ms as 0 (byte-reproducible output)");
  sweep_cmd->add_option("--out", sweep_out, "Results CSV")->required();
  sweep_cmd->add_option("--summary", sweep_summary, "Per-(algorithm, b) means (default <out>.summary.csv)");

  // verify
  bool verify_mutate = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle property suites");
  verify_cmd->add_flag("--mutate-dp", verify_mutate, "Negative control: reverse the DP tie-break");

  // tight
  std::size_t tight_p = 5;
  std::size_t tight_ell = 3;
  double tight_eps = 0.1;
  std::string tight_prefix;
  auto* tight_cmd = app.add_subcommand("tight", "Emit the worst-case instance (vectors, forest, reps)");
  tight_cmd->add_option("--p", tight_p, "Components")->capture_default_str();
  tight_cmd->add_option("--ell", tight_ell, "Representatives per component")->capture_default_str();
  tight_cmd->add_option("--eps", tight_eps, "Small distance in (0,1)")->capture_default_str();
  tight_cmd->add_option("--prefix", tight_prefix, "Writes <prefix>.vectors, .forest, .reps")->required();

  // oracle-mst
  DataFlags oracle_data;
  std::string oracle_out;
  auto* oracle_cmd = app.add_subcommand("oracle-mst", "Exact MST by Kruskal over all pairs");
  oracle_data.attach(*oracle_cmd);
  oracle_cmd->add_option("--out", oracle_out, "Write the MST edges");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*forest_cmd) {
      const auto space = forest_data.load();
      const std::size_t t = forest_t.value_or(mfc::default_components(space.size()));
      mfc::ForestMethod method;
      if (forest_method == "kcenter") {
        method = mfc::ForestMethod::KCenter;
      } else if (forest_method == "kruskal") {
        method = mfc::ForestMethod::Kruskal;
      } else {
        throw mfc::ConfigError("unknown forest method '" + forest_method + "'");
      }
      const auto forest = mfc::build_forest(space, t, method);
      write_file(forest_out, [&](std::ostream& out) { mfc::write_forest(out, forest); });
      std::printf("n=%zu t=%zu forest_weight=%.12g distance_calls=%llu\n", forest.points(), forest.components(),
                  forest.forest_weight, static_cast<unsigned long long>(space.query_count()));
      return 0;
    }

    if (*complete_cmd) {
      const auto space = complete_data.load();
      const auto forest = read_file<mfc::InitialForest>(complete_forest, mfc::read_forest);
      if (forest.points() != space.size()) throw mfc::ArgumentError("forest does not match the dataset size");
      const auto variant = mfc::parse_variant(complete_variant);
      if (!variant) throw mfc::ConfigError("unknown variant '" + complete_variant + "'");
      std::optional<mfc::RepAssignment> given;
      if (*variant == mfc::Variant::Given) {
        if (complete_reps_in.empty()) throw mfc::ConfigError("variant 'given' needs --reps");
        given = read_file<mfc::RepAssignment>(complete_reps_in, mfc::read_reps);
      }
      const mfc::RunOptions options{!complete_no_timing, mfc::worker_count()};
      auto run = mfc::run_variant(space.with_fresh_counter(), forest, *variant, complete_b,
                                  given ? &*given : nullptr, options.workers);
      std::optional<mfc::CompletionResult> opt;
      if (complete_opt) opt = mfc::mfc_opt(space.with_fresh_counter(), forest, options.workers);
      const std::size_t b = given ? given->extra() : complete_b;
      const auto row = mfc::make_row(complete_variant, b, run.result, run.bound, opt ? &*opt : nullptr,
                                     complete_data.seed, options);
      std::cout << mfc::kResultsHeader << '\n' << mfc::format_row(row) << '\n';
      if (!complete_out.empty()) mfc::append_results({row}, complete_out);
      if (!complete_tree_out.empty()) {
        write_file(complete_tree_out, [&](std::ostream& out) { mfc::write_tree(out, run.result); });
      }
      if (!complete_reps_out.empty()) {
        write_file(complete_reps_out, [&](std::ostream& out) { mfc::write_reps(out, run.reps); });
      }
      return 0;
    }

    if (*sweep_cmd) {
      if (!sweep_config.empty()) apply_config_file(*sweep_cmd, sweep_config);
      mfc::SweepConfig config;
      const int sources = !sweep_data.path.empty() + !sweep_synthetic.empty() + !sweep_tight.empty();
      if (sources != 1) throw mfc::ConfigError("give exactly one of --data, --synthetic, --tight");
      if (!sweep_data.path.empty()) {
        if (sweep_data.keep_order) throw mfc::ConfigError("sweep reshuffles per seed; --keep-order is not supported");
        config.source = mfc::FileSource{sweep_data.spec()};
      } else if (!sweep_synthetic.empty()) {
        const auto m = mfc::parse_metric(sweep_synthetic);
        if (!m) throw mfc::ConfigError("unknown metric '" + sweep_synthetic + "'");
        config.source = mfc::SyntheticSource{*m, sweep_n, sweep_dim};
      } else {
        if (sweep_tight[0] < 1 || sweep_tight[1] < 1) throw mfc::ConfigError("--tight needs p, ell >= 1");
        config.source = mfc::TightSource{static_cast<std::size_t>(sweep_tight[0]),
                                         static_cast<std::size_t>(sweep_tight[1]), sweep_tight[2]};
        config.seeds = {0};
      }
      config.t = sweep_t;
      if (sweep_method == "kruskal") {
        config.method = mfc::ForestMethod::Kruskal;
      } else if (sweep_method != "kcenter") {
        throw mfc::ConfigError("unknown forest method '" + sweep_method + "'");
      }
      if (!sweep_budgets.empty()) {
        config.budgets.emplace();
        for (const auto& s : split_list(sweep_budgets)) config.budgets->push_back(std::stoull(s));
      }
      if (!sweep_multiples.empty()) {
        config.budget_multiples.clear();
        for (const auto& s : split_list(sweep_multiples)) config.budget_multiples.push_back(std::stoull(s));
      }
      config.variants.clear();
      for (const auto& s : split_list(sweep_variants)) {
        const auto v = mfc::parse_variant(s);
        if (!v || *v == mfc::Variant::Given) throw mfc::ConfigError("unknown sweep variant '" + s + "'");
        config.variants.push_back(*v);
      }
      if (!sweep_seeds.empty()) {
        config.seeds.clear();
        for (const auto& s : split_list(sweep_seeds)) config.seeds.push_back(std::stoull(s));
      }
      config.run_opt = !sweep_no_opt;
      config.record_timing = !sweep_no_timing;
      config.workers = mfc::worker_count();
      config.log = &std::cerr;

      const auto result = mfc::run_sweep(config);
      mfc::write_results(result.rows, sweep_out);
      const std::string summary = sweep_summary.empty() ? sweep_out + ".summary.csv" : sweep_summary;
      write_file(summary, [&](std::ostream& out) { mfc::write_summary(out, result.rows); });
      std::printf("%zu rows -> %s, summary -> %s\n", result.rows.size(), sweep_out.c_str(), summary.c_str());
      return 0;
    }

    if (*verify_cmd) {
      const auto reports = mfc::verify::run_all({verify_mutate});
      return mfc::verify::print_reports(std::cout, reports) ? 0 : 1;
    }

    if (*tight_cmd) {
      const auto inst = mfc::tight_instance(tight_p, tight_ell, tight_eps);
      write_file(tight_prefix + ".vectors", [&](std::ostream& out) {
        char buf[32];
        for (const auto& p : inst.space.points()) {
          const auto& coords = std::get<mfc::DenseVector>(p).coords;
          for (std::size_t k = 0; k < coords.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", coords[k]);
            out << (k ? " " : "") << buf;
          }
          out << '\n';
        }
      });
      write_file(tight_prefix + ".forest", [&](std::ostream& out) { mfc::write_forest(out, inst.forest); });
      write_file(tight_prefix + ".reps", [&](std::ostream& out) { mfc::write_reps(out, inst.reps); });
      std::printf("n=%zu dim=%zu forest_weight=%.12g predicted_ratio=%.12g\n", inst.space.size(),
                  std::get<mfc::DenseVector>(inst.space.point(0)).coords.size(), inst.forest.forest_weight,
                  inst.predicted_ratio);
      return 0;
    }

    if (*oracle_cmd) {
      const auto space = oracle_data.load();
      const auto mst = mfc::brute_force_full_mst(space);
      std::printf("n=%zu mst_weight=%.12g distance_calls=%llu\n", space.size(), mst.weight,
                  static_cast<unsigned long long>(space.query_count()));
      if (!oracle_out.empty()) {
        write_file(oracle_out, [&](std::ostream& out) {
          char buf[64];
          for (const auto& e : mst.edges) {
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", e.u, e.v, e.weight);
            out << buf;
          }
        });
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
