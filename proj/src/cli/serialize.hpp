#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosslink/graph.hpp"
#include "crosslink/metrics.hpp"
#include "crosslink/ml/chi_square.hpp"
#include "crosslink/ml/evaluation.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/temporal.hpp"

namespace crosslink::cli {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const GraphReport& report);
ordered_json to_json(const SnapshotSeries& series);
ordered_json to_json(const ml::EvalMetrics& m);
ordered_json to_json(const ml::CvResult& cv);
ordered_json to_json(const ml::GridResult& grid);
ordered_json to_json(std::span<const ml::FeatureChiSquare> ranking);
ordered_json to_json(const ml::ParamMap& params);
ordered_json option_shares(const PerOption<double>& shares);

/// "degree,ccdf"
std::string ccdf_csv(std::span<const CcdfPoint> ccdf);
/// "month,nodes,edges,avg_degree,n_neither,n_tw,n_fb,n_both"
std::string timeline_csv(const SnapshotSeries& series);
/// "option,x,cdf"; options without users are omitted.
std::string cohort_csv(const CohortCurves& curves);

/// "user_id,score,label" with labels "high" | "low".
std::string pagerank_csv(const SocialGraph& g, const PageRankResult& pr);
ordered_json pagerank_summary(const PageRankResult& pr);

std::string dump(const ordered_json& doc);

}  // namespace crosslink::cli
