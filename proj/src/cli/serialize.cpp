#include "cli/serialize.hpp"

#include <fmt/format.h>

namespace crosslink::cli {

ordered_json to_json(const GraphReport& r) {
  ordered_json doc;
  doc["nodes"] = r.degrees.nodes;
  doc["edges"] = r.degrees.edges;
  doc["zero_in_degree"] = r.degrees.zero_in_degree;
  doc["zero_out_degree"] = r.degrees.zero_out_degree;
  if (r.account && r.followership) {
    doc["account"] = {{"user_id", *r.account},
                      {"followers", r.followership->followers},
                      {"exclusive_followers", r.followership->exclusive_followers}};
  }
  doc["avg_clustering"] = r.avg_clustering;
  doc["lscc_size"] = r.lscc_size;
  doc["avg_path_length"] = r.avg_path_length ? ordered_json(*r.avg_path_length) : ordered_json();
  doc["path_length_mode"] = r.path_sampled ? "sampled" : "exact";
  doc["path_sources"] = r.path_sources;
  if (r.path_sampled) doc["path_seed"] = r.path_seed;
  return doc;
}

ordered_json option_shares(const PerOption<double>& shares) {
  ordered_json doc;
  for (auto option : kLinkingOptions) doc[std::string(to_string(option))] = shares[index_of(option)];
  return doc;
}

ordered_json to_json(const SnapshotSeries& series) {
  ordered_json rows = ordered_json::array();
  for (const auto& p : series.points) {
    ordered_json counts;
    for (auto option : kLinkingOptions) counts[std::string(to_string(option))] = p.linking_counts[index_of(option)];
    rows.push_back({{"month", p.month.to_string()},
                    {"nodes", p.nodes},
                    {"edges", p.edges},
                    {"avg_degree", p.avg_degree},
                    {"linking_counts", counts}});
  }
  return rows;
}

ordered_json to_json(const ml::EvalMetrics& m) {
  ordered_json doc;
  doc["precision"] = m.precision;
  doc["recall"] = m.recall;
  doc["f1"] = m.f1;
  doc["auc"] = m.auc;
  doc["confusion"] = {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn}, {"fn", m.confusion.fn}};
  ordered_json undefined = ordered_json::array();
  if (m.precision_undefined) undefined.push_back("precision");
  if (m.recall_undefined) undefined.push_back("recall");
  if (m.auc_undefined) undefined.push_back("auc");
  doc["undefined"] = undefined;
  return doc;
}

ordered_json to_json(const ml::CvResult& cv) {
  ordered_json doc;
  doc["folds"] = cv.folds.size();
  doc["mean"] = {{"precision", cv.precision}, {"recall", cv.recall}, {"f1", cv.f1}, {"auc", cv.auc}};
  doc["per_fold"] = ordered_json::array();
  for (const auto& m : cv.folds) doc["per_fold"].push_back(to_json(m));
  return doc;
}

ordered_json to_json(const ml::ParamMap& params) {
  ordered_json doc = ordered_json::object();
  for (const auto& [name, value] : params) doc[name] = value;
  return doc;
}

ordered_json to_json(const ml::GridResult& grid) {
  ordered_json doc;
  doc["best_params"] = to_json(grid.best_params);
  doc["best_mean_f1"] = grid.best_f1;
  doc["evaluated"] = ordered_json::array();
  for (const auto& p : grid.evaluated) doc["evaluated"].push_back({{"params", to_json(p.params)}, {"mean_f1", p.mean_f1}});
  return doc;
}

ordered_json to_json(std::span<const ml::FeatureChiSquare> ranking) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : ranking) rows.push_back({{"feature", r.feature}, {"chi2", r.chi2}});
  return rows;
}

std::string ccdf_csv(std::span<const CcdfPoint> ccdf) {
  std::string out = "degree,ccdf\n";
  for (const auto& p : ccdf) out += fmt::format("{},{}\n", p.degree, p.fraction);
  return out;
}

std::string timeline_csv(const SnapshotSeries& series) {
  std::string out = "month,nodes,edges,avg_degree,n_neither,n_tw,n_fb,n_both\n";
  for (const auto& p : series.points) {
    const auto& c = p.linking_counts;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", p.month.to_string(), p.nodes, p.edges, p.avg_degree,
                       c[index_of(LinkingOption::Neither)], c[index_of(LinkingOption::TWOnly)],
                       c[index_of(LinkingOption::FBOnly)], c[index_of(LinkingOption::Both)]);
  }
  return out;
}

std::string cohort_csv(const CohortCurves& curves) {
  std::string out = "option,x,cdf\n";
  for (auto option : kLinkingOptions) {
    const auto& curve = curves.curves[index_of(option)];
    if (!curve) continue;
    for (const auto& p : *curve) out += fmt::format("{},{},{}\n", to_string(option), p.x, p.cumulative);
  }
  return out;
}

std::string pagerank_csv(const SocialGraph& g, const PageRankResult& pr) {
  std::string out = "user_id,score,label\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    out += fmt::format("{},{},{}\n", g.user(u).user_id, pr.score(u), ml::to_string(pr.label(u)));
  }
  return out;
}

ordered_json pagerank_summary(const PageRankResult& pr) {
  ordered_json doc;
  doc["damping"] = pr.options.damping;
  doc["tolerance"] = pr.options.tolerance;
  doc["iterations"] = pr.rank.iterations;
  doc["residual"] = pr.rank.residual;
  doc["converged"] = pr.rank.converged;
  doc["percentile"] = pr.percentile;
  doc["threshold"] = pr.labeling.threshold;
  doc["high_count"] = pr.labeling.high_count;
  return doc;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace crosslink::cli
