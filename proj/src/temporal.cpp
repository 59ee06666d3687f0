#include "crosslink/temporal.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "crosslink/error.hpp"
#include "crosslink/parallel.hpp"

namespace crosslink {

SocialGraph snapshot(const SocialGraph& g, YearMonth cutoff) {
  constexpr NodeId kDropped = std::numeric_limits<NodeId>::max();
  const std::size_t n = g.node_count();
  std::vector<NodeId> remap(n, kDropped);
  std::vector<UserRecord> users;
  for (NodeId u = 0; u < n; ++u) {
    if (g.user(u).registered_at <= cutoff) {
      remap[u] = static_cast<NodeId>(users.size());
      users.push_back(g.user(u));
    }
  }

  // remap is monotone, so the surviving edges stay sorted by (src, dst).
  std::vector<IndexEdge> edges;
  for (NodeId u = 0; u < n; ++u) {
    if (remap[u] == kDropped) continue;
    for (NodeId v : g.successors(u)) {
      if (remap[v] != kDropped) edges.emplace_back(remap[u], remap[v]);
    }
  }
  return SocialGraph(std::move(users), edges);
}

SnapshotSeries snapshot_series(const SocialGraph& g, YearMonth from, YearMonth to) {
  if (to < from) {
    throw UsageError(fmt::format("empty month range {} .. {}", from.to_string(), to.to_string()));
  }
  SnapshotSeries series;
  series.points.resize(static_cast<std::size_t>(months_between(from, to)));
  parallel_for(series.points.size(), [&](std::size_t i) {
    const auto month = YearMonth::from_ordinal(from.ordinal() + static_cast<int>(i));
    const SocialGraph past = snapshot(g, month);
    SnapshotPoint& point = series.points[i];
    point.month = month;
    point.nodes = past.node_count();
    point.edges = past.edge_count();
    point.avg_degree = point.nodes == 0 ? 0.0
                                        : static_cast<double>(point.edges) /
                                              static_cast<double>(point.nodes);
    for (const auto& user : past.users()) ++point.linking_counts[index_of(user.linking_option)];
  });
  return series;
}

PerOption<double> linking_distribution(const SocialGraph& g) {
  if (g.node_count() == 0) throw DataError("empty graph");
  PerOption<std::size_t> counts{};
  for (const auto& user : g.users()) ++counts[index_of(user.linking_option)];
  PerOption<double> fractions{};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(g.node_count());
  }
  return fractions;
}

std::string_view to_string(CohortMetric metric) {
  switch (metric) {
    case CohortMetric::OutDegree: return "out_degree";
    case CohortMetric::InDegree: return "in_degree";
    case CohortMetric::PageRank: return "pagerank";
  }
  return "out_degree";
}

std::optional<CohortMetric> parse_cohort_metric(std::string_view text) {
  for (auto metric : {CohortMetric::OutDegree, CohortMetric::InDegree, CohortMetric::PageRank}) {
    if (to_string(metric) == text) return metric;
  }
  return std::nullopt;
}

PerOption<double> high_pagerank_composition(const SocialGraph& g, const PageRankResult& pr) {
  if (pr.labeling.labels.size() != g.node_count()) {
    throw UsageError("PageRank result was computed on a different graph");
  }
  PerOption<std::size_t> counts{};
  std::size_t high = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (pr.label(u) == InfluenceLabel::High) {
      ++counts[index_of(g.user(u).linking_option)];
      ++high;
    }
  }
  if (high == 0) throw DataError("no high-PageRank users at this percentile");
  PerOption<double> composition{};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    composition[i] = static_cast<double>(counts[i]) / static_cast<double>(high);
  }
  return composition;
}

CohortCurves cohort_cdf(const SocialGraph& g, CohortMetric metric, const PageRankResult* pr) {
  if (metric == CohortMetric::PageRank && pr == nullptr) {
    throw UsageError("pagerank cohorts need a PageRank result");
  }
  if (pr != nullptr && pr->rank.scores.size() != g.node_count()) {
    throw UsageError("PageRank result was computed on a different graph");
  }

  PerOption<std::vector<double>> values;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    double x = 0.0;
    switch (metric) {
      case CohortMetric::OutDegree: x = static_cast<double>(g.out_degree(u)); break;
      case CohortMetric::InDegree: x = static_cast<double>(g.in_degree(u)); break;
      case CohortMetric::PageRank: x = pr->score(u); break;
    }
    values[index_of(g.user(u).linking_option)].push_back(x);
  }

  CohortCurves curves;
  curves.metric = metric;
  for (auto option : kLinkingOptions) {
    auto& xs = values[index_of(option)];
    if (xs.empty()) {
      curves.notes.push_back(fmt::format("option '{}' has no users; curve omitted", to_string(option)));
      continue;
    }
    std::sort(xs.begin(), xs.end());
    std::vector<CdfPoint> curve;
    const auto total = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      // Right-continuous step: emit once per distinct value, after its last copy.
      if (i + 1 == xs.size() || xs[i + 1] != xs[i]) {
        curve.push_back({xs[i], static_cast<double>(i + 1) / total});
      }
    }
    curve.back().cumulative = 1.0;
    curves.curves[index_of(option)] = std::move(curve);
  }

  if (pr != nullptr) {
    if (pr->labeling.high_count > 0) {
      curves.composition = high_pagerank_composition(g, *pr);
    } else {
      curves.notes.push_back("no high-PageRank users; composition omitted");
    }
  }
  return curves;
}

}  // namespace crosslink
