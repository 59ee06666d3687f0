#include "crosslink/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "crosslink/error.hpp"
#include "crosslink/parallel.hpp"
#include "crosslink/rng.hpp"

namespace crosslink {

DegreeSummary degree_summary(const SocialGraph& g) {
  DegreeSummary s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.in_degree(u) == 0) ++s.zero_in_degree;
    if (g.out_degree(u) == 0) ++s.zero_out_degree;
  }
  return s;
}

std::vector<CcdfPoint> degree_ccdf(const SocialGraph& g, Direction direction) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("empty graph");

  std::map<std::size_t, std::size_t> histogram;
  for (NodeId u = 0; u < n; ++u) {
    ++histogram[direction == Direction::In ? g.in_degree(u) : g.out_degree(u)];
  }

  std::vector<CcdfPoint> curve;
  curve.push_back({0, 1.0});
  std::size_t at_least = n;  // nodes with degree >= current key
  for (const auto& [degree, count] : histogram) {
    if (degree > 0) curve.push_back({degree, static_cast<double>(at_least) / static_cast<double>(n)});
    at_least -= count;
  }
  return curve;
}

Followership account_followership(const SocialGraph& g, std::string_view account) {
  auto node = g.find(account);
  if (!node) throw DataError(fmt::format("unknown account '{}'", account));
  Followership f;
  f.followers = g.in_degree(*node);
  for (NodeId follower : g.predecessors(*node)) {
    if (g.out_degree(follower) == 1) ++f.exclusive_followers;
  }
  return f;
}

namespace {

/// Undirected projection: sorted, duplicate-free union of both directions.
CsrIndex undirected_projection(const SocialGraph& g) {
  const std::size_t n = g.node_count();
  CsrIndex und;
  und.offsets.assign(n + 1, 0);
  // Two passes: sizes, then fill.
  auto merge_into = [&](NodeId u, NodeId* dest) {
    auto out = g.successors(u);
    auto in = g.predecessors(u);
    return static_cast<std::size_t>(std::set_union(out.begin(), out.end(), in.begin(), in.end(), dest) -
                                    dest);
  };
  std::vector<NodeId> buffer;
  for (NodeId u = 0; u < n; ++u) {
    buffer.resize(g.out_degree(u) + g.in_degree(u));
    und.offsets[u + 1] = und.offsets[u] + merge_into(u, buffer.data());
  }
  und.targets.resize(und.offsets[n]);
  for (NodeId u = 0; u < n; ++u) merge_into(u, und.targets.data() + und.offsets[u]);
  return und;
}

}  // namespace

std::vector<double> local_clustering(const SocialGraph& g) {
  const std::size_t n = g.node_count();
  const CsrIndex und = undirected_projection(g);

  // Orient every undirected edge from lower to higher (degree, id) rank so
  // each triangle is discovered exactly once.
  auto before = [&](NodeId a, NodeId b) {
    const auto da = und.degree(a);
    const auto db = und.degree(b);
    return da < db || (da == db && a < b);
  };
  CsrIndex forward;
  forward.offsets.assign(n + 1, 0);
  for (NodeId u = 0; u < n; ++u) {
    std::size_t count = 0;
    for (NodeId v : und.neighbors(u)) count += before(u, v) ? 1 : 0;
    forward.offsets[u + 1] = forward.offsets[u] + count;
  }
  forward.targets.resize(forward.offsets[n]);
  for (NodeId u = 0; u < n; ++u) {
    auto* dest = forward.targets.data() + forward.offsets[u];
    for (NodeId v : und.neighbors(u)) {
      if (before(u, v)) *dest++ = v;
    }
  }

  std::vector<std::atomic<std::uint64_t>> triangles(n);
  for (auto& t : triangles) t.store(0, std::memory_order_relaxed);
  const std::size_t workers = std::max<std::size_t>(1, std::min(thread_count(), n));
  parallel_for(workers, [&](std::size_t worker) {
    std::vector<NodeId> mark(n, std::numeric_limits<NodeId>::max());
    for (std::size_t u = worker; u < n; u += workers) {
      const auto uid = static_cast<NodeId>(u);
      for (NodeId v : forward.neighbors(uid)) mark[v] = uid;
      for (NodeId v : forward.neighbors(uid)) {
        for (NodeId w : forward.neighbors(v)) {
          if (mark[w] == uid) {
            triangles[u].fetch_add(1, std::memory_order_relaxed);
            triangles[v].fetch_add(1, std::memory_order_relaxed);
            triangles[w].fetch_add(1, std::memory_order_relaxed);
          }
        }
      }
    }
  });

  std::vector<double> coefficient(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    const double d = static_cast<double>(und.degree(u));
    if (d >= 2) coefficient[u] = 2.0 * static_cast<double>(triangles[u].load()) / (d * (d - 1));
  }
  return coefficient;
}

double avg_clustering(const SocialGraph& g) {
  if (g.node_count() == 0) throw DataError("empty graph");
  const auto coefficient = local_clustering(g);
  double sum = 0.0;
  for (double c : coefficient) sum += c;
  return sum / static_cast<double>(g.node_count());
}

std::vector<std::uint32_t> strongly_connected_components(const SocialGraph& g) {
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<std::uint32_t> component(n, kUnvisited);
  std::vector<NodeId> stack;
  std::vector<bool> on_stack(n, false);

  struct Frame {
    NodeId node;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;
  std::uint32_t components = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& frame = call.back();
      const NodeId u = frame.node;
      auto successors = g.successors(u);
      if (frame.next_edge < successors.size()) {
        const NodeId v = successors[frame.next_edge++];
        if (index[v] == kUnvisited) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
          call.push_back({v, 0});
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }

      if (low[u] == index[u]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components;
        } while (w != u);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const NodeId parent = call.back().node;
        low[parent] = std::min(low[parent], low[u]);
      }
    }
  }
  return component;
}

std::vector<NodeId> largest_scc(const SocialGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const auto component = strongly_connected_components(g);
  const std::uint32_t count = *std::max_element(component.begin(), component.end()) + 1;
  std::vector<std::size_t> size(count, 0);
  for (auto c : component) ++size[c];

  // Scanning nodes in index order, the first component reaching the maximum
  // size is the one containing the smallest node index.
  std::uint32_t best = component[0];
  for (NodeId u = 0; u < n; ++u) {
    if (size[component[u]] > size[best]) best = component[u];
  }
  std::vector<NodeId> members;
  members.reserve(size[best]);
  for (NodeId u = 0; u < n; ++u) {
    if (component[u] == best) members.push_back(u);
  }
  return members;
}

PathLengthResult avg_path_length(const SocialGraph& g, std::span<const NodeId> within,
                                 std::optional<PathSample> sample) {
  const std::size_t m = within.size();
  if (m < 2) throw DataError("average path length needs at least two nodes");

  constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local(g.node_count(), kOutside);
  for (std::size_t i = 0; i < m; ++i) local[within[i]] = static_cast<std::uint32_t>(i);

  std::vector<NodeId> sources(within.begin(), within.end());
  PathLengthResult result;
  if (sample && sample->sources < m) {
    Rng rng(sample->seed);
    for (std::size_t i = 0; i < sample->sources; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
      std::swap(sources[i], sources[j]);
    }
    sources.resize(sample->sources);
    result.sampled = true;
  }
  if (sources.empty()) throw UsageError("path length sample needs at least one source");

  std::vector<std::uint64_t> distance_sum(sources.size(), 0);
  std::vector<std::uint8_t> disconnected(sources.size(), 0);
  const std::size_t workers = std::max<std::size_t>(1, std::min(thread_count(), sources.size()));
  parallel_for(workers, [&](std::size_t worker) {
    std::vector<std::uint32_t> dist(m, kOutside);
    std::vector<NodeId> frontier;
    frontier.reserve(m);
    for (std::size_t s = worker; s < sources.size(); s += workers) {
      std::fill(dist.begin(), dist.end(), kOutside);
      frontier.clear();
      frontier.push_back(sources[s]);
      dist[local[sources[s]]] = 0;
      std::uint64_t total = 0;
      for (std::size_t head = 0; head < frontier.size(); ++head) {
        const NodeId u = frontier[head];
        const std::uint32_t du = dist[local[u]];
        total += du;
        for (NodeId v : g.successors(u)) {
          const std::uint32_t lv = local[v];
          if (lv == kOutside || dist[lv] != kOutside) continue;
          dist[lv] = du + 1;
          frontier.push_back(v);
        }
      }
      distance_sum[s] = total;
      disconnected[s] = frontier.size() != m;
    }
  });

  if (std::any_of(disconnected.begin(), disconnected.end(), [](auto d) { return d != 0; })) {
    throw DataError("node set is not strongly connected (unreachable target during BFS)");
  }
  const auto total = std::accumulate(distance_sum.begin(), distance_sum.end(), std::uint64_t{0});
  result.sources_used = sources.size();
  result.mean = static_cast<double>(total) /
                (static_cast<double>(sources.size()) * static_cast<double>(m - 1));
  return result;
}

GraphReport compute_report(const SocialGraph& g, const ReportOptions& options) {
  if (g.node_count() == 0) throw DataError("empty graph");
  GraphReport report;
  report.degrees = degree_summary(g);
  if (options.account) {
    report.account = options.account;
    report.followership = account_followership(g, *options.account);
  }
  report.avg_clustering = avg_clustering(g);

  const auto lscc = largest_scc(g);
  report.lscc_size = lscc.size();
  if (lscc.size() >= 2) {
    const bool sampled = options.path_mode == PathMode::Sampled ||
                         (options.path_mode == PathMode::Auto && lscc.size() > options.exact_limit);
    const auto paths = avg_path_length(g, lscc, sampled ? std::optional(options.sample) : std::nullopt);
    report.avg_path_length = paths.mean;
    report.path_sampled = paths.sampled;
    report.path_sources = paths.sources_used;
    report.path_seed = sampled ? options.sample.seed : 0;
  }
  return report;
}

}  // namespace crosslink
