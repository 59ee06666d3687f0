#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "crosslink/graph.hpp"
#include "crosslink/user.hpp"

namespace crosslink {

struct UserIngest {
  std::vector<UserRecord> users;
  std::size_t skipped = 0;
};

struct EdgeIngest {
  std::vector<IdEdge> edges;
  std::size_t skipped = 0;
};

/// users.jsonl: one JSON object per line. Malformed lines are skipped and
/// counted; a duplicate user_id or an unreadable file throws DataError.
UserIngest ingest_users(const std::filesystem::path& path);
UserIngest ingest_users(std::istream& in);

/// edges.tsv: "src<TAB>dst" per line, no header. Lines without exactly one
/// TAB (or with an empty side) are skipped and counted.
EdgeIngest ingest_edges(const std::filesystem::path& path);
EdgeIngest ingest_edges(std::istream& in);

/// The "twitter" object of a user line. Counts must be non-negative
/// integers; bio is 0/1 or a bool and defaults to 0.
std::optional<FeatureVector> feature_vector_from_json(const nlohmann::json& obj);
nlohmann::ordered_json feature_vector_to_json(const FeatureVector& f);

/// Serializers producing the same formats, used for round-trips and by the
/// synthetic generator.
std::string user_to_json_line(const UserRecord& user);
std::string users_to_jsonl(std::span<const UserRecord> users);
std::string edges_to_tsv(std::span<const IdEdge> edges);

/// Reads users + edges and builds the graph in one step.
GraphBuild load_graph(const std::filesystem::path& users_path,
                      const std::filesystem::path& edges_path);

}  // namespace crosslink
