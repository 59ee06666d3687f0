#include "crosslink/graph.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "crosslink/error.hpp"

namespace crosslink {

SocialGraph::SocialGraph(std::vector<UserRecord> users, std::span<const IndexEdge> edges)
    : users_(std::move(users)) {
  const std::size_t n = users_.size();
  ids_.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto [it, inserted] = ids_.emplace(users_[u].user_id, static_cast<NodeId>(u));
    if (!inserted) throw DataError(fmt::format("duplicate user_id '{}'", users_[u].user_id));
  }

  out_.offsets.assign(n + 1, 0);
  in_.offsets.assign(n + 1, 0);
  for (const auto& [src, dst] : edges) {
    ++out_.offsets[src + 1];
    ++in_.offsets[dst + 1];
  }
  for (std::size_t u = 0; u < n; ++u) {
    out_.offsets[u + 1] += out_.offsets[u];
    in_.offsets[u + 1] += in_.offsets[u];
  }

  // Edges arrive sorted by (src, dst): out-lists fill in order, and each
  // in-list receives its sources in ascending order too.
  out_.targets.resize(edges.size());
  in_.targets.resize(edges.size());
  std::vector<std::uint64_t> in_cursor(in_.offsets.begin(), in_.offsets.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [src, dst] = edges[e];
    out_.targets[e] = dst;
    in_.targets[in_cursor[dst]++] = src;
  }
}

std::optional<NodeId> SocialGraph::find(std::string_view user_id) const {
  auto it = ids_.find(std::string(user_id));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<IdEdge> SocialGraph::edge_list() const {
  std::vector<IdEdge> edges;
  edges.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : successors(u)) edges.emplace_back(users_[u].user_id, users_[v].user_id);
  }
  return edges;
}

GraphBuild build_graph_from_indices(std::vector<UserRecord> users, std::vector<IndexEdge> edges) {
  BuildStats stats;
  stats.input_edges = edges.size();

  const auto loops = std::remove_if(edges.begin(), edges.end(),
                                    [](const IndexEdge& e) { return e.first == e.second; });
  stats.self_loops_dropped = static_cast<std::size_t>(edges.end() - loops);
  edges.erase(loops, edges.end());

  std::sort(edges.begin(), edges.end());
  const auto dups = std::unique(edges.begin(), edges.end());
  stats.duplicates_collapsed = static_cast<std::size_t>(edges.end() - dups);
  edges.erase(dups, edges.end());

  return {SocialGraph(std::move(users), edges), stats};
}

GraphBuild build_graph(std::vector<UserRecord> users, std::span<const IdEdge> edges) {
  std::unordered_map<std::string_view, NodeId> ids;
  ids.reserve(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!ids.emplace(users[u].user_id, static_cast<NodeId>(u)).second) {
      throw DataError(fmt::format("duplicate user_id '{}'", users[u].user_id));
    }
  }

  auto resolve = [&](const std::string& id) {
    auto it = ids.find(id);
    if (it == ids.end()) throw DataError(fmt::format("edge references unknown user_id '{}'", id));
    return it->second;
  };

  std::vector<IndexEdge> resolved;
  resolved.reserve(edges.size());
  for (const auto& [src, dst] : edges) resolved.emplace_back(resolve(src), resolve(dst));
  ids.clear();  // views into `users`, which is about to move
  return build_graph_from_indices(std::move(users), std::move(resolved));
}

}  // namespace crosslink
