#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crosslink/graph.hpp"
#include "crosslink/month.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/user.hpp"

namespace crosslink {

/// Historical reconstruction: users registered after `cutoff` are removed
/// along with every edge touching them. Survivors keep their relative order
/// and their current linking option.
SocialGraph snapshot(const SocialGraph& g, YearMonth cutoff);

struct SnapshotPoint {
  YearMonth month;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double avg_degree = 0.0;  // edges / nodes, 0 for an empty snapshot
  PerOption<std::size_t> linking_counts{};
};

struct SnapshotSeries {
  std::vector<SnapshotPoint> points;
};

/// One snapshot per month in [from, to]. Throws UsageError if from > to.
SnapshotSeries snapshot_series(const SocialGraph& g, YearMonth from, YearMonth to);

PerOption<double> linking_distribution(const SocialGraph& g);

enum class CohortMetric { OutDegree, InDegree, PageRank };

std::string_view to_string(CohortMetric metric);
std::optional<CohortMetric> parse_cohort_metric(std::string_view text);

struct CdfPoint {
  double x = 0.0;
  double cumulative = 0.0;  // fraction of the cohort with value <= x
};

struct CohortCurves {
  CohortMetric metric = CohortMetric::OutDegree;
  /// Empty optional for options without users.
  PerOption<std::optional<std::vector<CdfPoint>>> curves;
  std::vector<std::string> notes;
  /// Filled when PageRank labels were supplied and at least one user is High.
  std::optional<PerOption<double>> composition;
};

/// Empirical per-option CDF evaluated at each distinct observed value.
/// metric == PageRank requires `pr`; throws UsageError otherwise.
CohortCurves cohort_cdf(const SocialGraph& g, CohortMetric metric,
                        const PageRankResult* pr = nullptr);

/// Share of each option among High users. Throws DataError when nobody is High.
PerOption<double> high_pagerank_composition(const SocialGraph& g, const PageRankResult& pr);

}  // namespace crosslink
