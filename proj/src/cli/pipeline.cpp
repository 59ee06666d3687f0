#include <fmt/format.h>

#include "cli/commands.hpp"
#include "cli/serialize.hpp"
#include "crosslink/error.hpp"
#include "crosslink/ingest.hpp"
#include "crosslink/metrics.hpp"
#include "crosslink/ml/chi_square.hpp"
#include "crosslink/ml/dataset.hpp"
#include "crosslink/ml/evaluation.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/synth.hpp"
#include "crosslink/temporal.hpp"

namespace crosslink::cli {
namespace {

using nlohmann::json;

const json& section(const json& config, const char* name) {
  static const json empty = json::object();
  auto it = config.find(name);
  if (it == config.end()) return empty;
  if (!it->is_object()) throw UsageError(fmt::format("config section '{}' must be a table", name));
  return *it;
}

template <typename T>
T value_or(const json& table, const char* key, T fallback) {
  auto it = table.find(key);
  if (it == table.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw UsageError(fmt::format("config key '{}' has the wrong type", key));
  }
}

PathMode path_mode(const std::string& text) {
  if (text == "auto") return PathMode::Auto;
  if (text == "exact") return PathMode::Exact;
  if (text == "sampled") return PathMode::Sampled;
  throw UsageError(fmt::format("metrics.path_mode '{}' is not auto, exact or sampled", text));
}

}  // namespace

void run_pipeline(const json& config, const fs::path& dir, RunManifest& m) {
  const auto seed = value_or<std::uint64_t>(config, "seed", 42);

  // 1. Data: generated unless an existing crawl is named.
  SocialGraph graph;
  if (const auto& input = section(config, "input"); !input.empty()) {
    const auto users = value_or<std::string>(input, "users", "");
    const auto edges = value_or<std::string>(input, "edges", "");
    if (users.empty() || edges.empty()) throw UsageError("input needs both 'users' and 'edges'");
    graph = load_inputs(m, users, edges).graph;
  } else {
    json synth = section(config, "synth");
    if (!synth.contains("seed")) synth["seed"] = seed;
    const auto cfg = synth_config_from_json(synth.dump());
    m.seed("synth", cfg.seed);
    auto data = generate_dataset(cfg);
    for (const auto& line : data.log) m.note(line);
    const auto files = to_files(data);
    emit(m, dir / "users.jsonl", files.users_jsonl);
    emit(m, dir / "edges.tsv", files.edges_tsv);
    graph = std::move(data.graph);
  }

  // 2. Structure.
  const auto& metrics = section(config, "metrics");
  ReportOptions report_options;
  if (auto account = value_or<std::string>(metrics, "account", ""); !account.empty()) report_options.account = account;
  report_options.path_mode = path_mode(value_or<std::string>(metrics, "path_mode", "auto"));
  report_options.exact_limit = value_or<std::size_t>(metrics, "exact_limit", 10000);
  report_options.sample = {value_or<std::size_t>(metrics, "path_sources", 1000),
                           value_or<std::uint64_t>(metrics, "seed", seed)};
  m.seed("path_sample", report_options.sample.seed);
  emit(m, dir / "report.json", dump(to_json(compute_report(graph, report_options))));
  emit(m, dir / "ccdf_in.csv", ccdf_csv(degree_ccdf(graph, Direction::In)));
  emit(m, dir / "ccdf_out.csv", ccdf_csv(degree_ccdf(graph, Direction::Out)));

  if (value_or<bool>(section(config, "timeline"), "enabled", true)) {
    auto first = graph.user(0).registered_at;
    auto last = first;
    for (const auto& u : graph.users()) {
      first = std::min(first, u.registered_at);
      last = std::max(last, u.registered_at);
    }
    emit(m, dir / "timeline.csv", timeline_csv(snapshot_series(graph, first, last)));
    emit(m, dir / "linking_distribution.json", dump(option_shares(linking_distribution(graph))));
  }

  // 3. Influence labels.
  const auto& pr_cfg = section(config, "pagerank");
  PageRankOptions pr_options;
  pr_options.damping = value_or(pr_cfg, "damping", pr_options.damping);
  pr_options.tolerance = value_or(pr_cfg, "tolerance", pr_options.tolerance);
  pr_options.max_iterations = value_or(pr_cfg, "max_iterations", pr_options.max_iterations);
  const auto pr = rank_and_label(graph, pr_options, value_or(pr_cfg, "percentile", 0.01));
  emit(m, dir / "pagerank.csv", pagerank_csv(graph, pr));
  emit(m, dir / "pagerank.json", dump(pagerank_summary(pr)));

  for (auto metric : {CohortMetric::OutDegree, CohortMetric::InDegree, CohortMetric::PageRank}) {
    emit(m, dir / fmt::format("cohorts_{}.csv", to_string(metric)), cohort_csv(cohort_cdf(graph, metric, &pr)));
  }
  emit(m, dir / "composition.json", dump(option_shares(high_pagerank_composition(graph, pr))));

  // 4. Balanced dataset.
  const auto& ds_cfg = section(config, "dataset");
  const auto requested_sizes = value_or<std::vector<std::size_t>>(ds_cfg, "sizes", {8000, 8000, 2000, 2000});
  if (requested_sizes.size() != 4) throw UsageError("dataset.sizes needs four counts");
  const ml::SplitSizes requested{requested_sizes[0], requested_sizes[1], requested_sizes[2], requested_sizes[3]};
  const auto eligible = ml::eligible_users(graph, pr);
  const auto sizes =
      ml::fit_split(requested, eligible.count(InfluenceLabel::High), eligible.count(InfluenceLabel::Low));
  if (sizes != requested) {
    m.note(fmt::format("split scaled to {}/{}-{}/{}", sizes.train_high, sizes.train_low, sizes.test_high,
                       sizes.test_low));
  }
  const auto ds_seed = value_or<std::uint64_t>(ds_cfg, "seed", seed);
  m.seed("dataset", ds_seed);
  const auto split = ml::build_dataset(graph, pr, sizes, ds_seed);
  emit(m, dir / "train.csv", ml::to_csv(split.train));
  emit(m, dir / "test.csv", ml::to_csv(split.test));

  emit(m, dir / "chi2.json",
       dump(to_json(ml::chi_square_rank(split.train, value_or<std::size_t>(section(config, "chi2"), "bins", 10)))));

  // 5. Models.
  const auto& train_cfg = section(config, "train");
  const auto names = value_or<std::vector<std::string>>(
      train_cfg, "algorithms", {"gbt", "random_forest", "decision_tree", "naive_bayes", "logistic_regression"});
  const auto train_seed = value_or<std::uint64_t>(train_cfg, "seed", seed);
  m.seed("train", train_seed);
  const auto& param_tables = section(train_cfg, "params");

  const auto& cv_cfg = section(config, "cv");
  const auto folds = value_or<std::size_t>(cv_cfg, "folds", 0);
  const auto cv_seed = value_or<std::uint64_t>(cv_cfg, "seed", seed);
  if (folds > 0) m.seed("cv", cv_seed);

  ordered_json evaluation;
  ordered_json cross_validation;
  std::string best;
  double best_f1 = -1.0;
  for (const auto& name : names) {
    const auto algorithm = algorithm_or_throw(name);
    const auto params =
        ml::resolve_params(algorithm, params_from_json(param_tables.contains(name) ? param_tables[name] : json()));
    const auto model = ml::train(algorithm, params, split.train, train_seed);
    emit(m, dir / "models" / (name + ".json"), ml::model_to_json(model));
    const auto metrics_test = ml::evaluate(model, split.test);
    auto entry = to_json(metrics_test);
    entry["model_ref"] = ml::model_ref(model);
    evaluation[name] = entry;
    if (metrics_test.f1 > best_f1) {
      best_f1 = metrics_test.f1;
      best = name;
    }
    if (folds > 0) {
      auto cv = to_json(ml::cross_validate(algorithm, params, split.train, folds, cv_seed));
      cross_validation[name] = cv;
    }
  }
  ordered_json eval_doc;
  eval_doc["test_rows"] = split.test.size();
  eval_doc["models"] = evaluation;
  eval_doc["best"] = best;
  emit(m, dir / "evaluation.json", dump(eval_doc));
  if (folds > 0) emit(m, dir / "cv.json", dump(cross_validation));
}

}  // namespace crosslink::cli
