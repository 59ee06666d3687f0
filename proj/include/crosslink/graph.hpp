#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crosslink/user.hpp"

namespace crosslink {

using NodeId = std::uint32_t;
using IdEdge = std::pair<std::string, std::string>;
using IndexEdge = std::pair<NodeId, NodeId>;

/// Compressed sparse row index: neighbors of u are
/// targets[offsets[u] .. offsets[u+1]), sorted ascending.
struct CsrIndex {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }

  friend bool operator==(const CsrIndex&, const CsrIndex&) = default;
};

/// Immutable directed follow graph. An edge u -> v means u follows v.
///
/// Node indices are dense and assigned in first-seen order of the user list
/// handed to the constructor. Both directions are stored so follower and
/// followee scans are equally cheap.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// Builds from already-resolved index edges. Self-loops and duplicates
  /// must already be gone; edges must be sorted by (src, dst).
  SocialGraph(std::vector<UserRecord> users, std::span<const IndexEdge> sorted_unique_edges);

  std::size_t node_count() const { return users_.size(); }
  std::size_t edge_count() const { return out_.targets.size(); }

  std::span<const NodeId> successors(NodeId u) const { return out_.neighbors(u); }
  std::span<const NodeId> predecessors(NodeId u) const { return in_.neighbors(u); }
  std::size_t out_degree(NodeId u) const { return out_.degree(u); }
  std::size_t in_degree(NodeId u) const { return in_.degree(u); }

  const CsrIndex& out_index() const { return out_; }
  const CsrIndex& in_index() const { return in_; }

  const UserRecord& user(NodeId u) const { return users_[u]; }
  std::span<const UserRecord> users() const { return users_; }
  std::optional<NodeId> find(std::string_view user_id) const;

  /// Edges as user-id pairs in (src, dst) index order.
  std::vector<IdEdge> edge_list() const;

  /// CSR arrays and attributes equal (the id map is derived from them).
  friend bool operator==(const SocialGraph& a, const SocialGraph& b) {
    return a.users_ == b.users_ && a.out_ == b.out_ && a.in_ == b.in_;
  }

 private:
  std::vector<UserRecord> users_;
  CsrIndex out_;
  CsrIndex in_;
  std::unordered_map<std::string, NodeId> ids_;
};

struct BuildStats {
  std::size_t input_edges = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

struct GraphBuild {
  SocialGraph graph;
  BuildStats stats;
};

/// Resolves user ids, drops self-loops, collapses duplicate edges.
/// Throws DataError on a duplicate user id or an edge naming an unknown id.
GraphBuild build_graph(std::vector<UserRecord> users, std::span<const IdEdge> edges);

/// Same as build_graph for index-resolved edges in any order, possibly with
/// loops and duplicates. Indices must be < users.size().
GraphBuild build_graph_from_indices(std::vector<UserRecord> users, std::vector<IndexEdge> edges);

}  // namespace crosslink
