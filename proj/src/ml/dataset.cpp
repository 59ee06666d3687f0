#include "crosslink/ml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "crosslink/error.hpp"
#include "crosslink/rng.hpp"

namespace crosslink::ml {

FeatureVector extract_features(const UserRecord& user) {
  if (!has_twitter(user.linking_option) || !user.twitter_features) {
    throw DataError("user not Twitter-linked");
  }
  return *user.twitter_features;
}

std::size_t LabeledDataset::count(InfluenceLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const LabeledRow& r) { return r.label == label; }));
}

std::vector<Features> LabeledDataset::feature_matrix() const {
  std::vector<Features> x;
  x.reserve(rows.size());
  for (const auto& r : rows) x.push_back(r.features.as_array());
  return x;
}

std::vector<InfluenceLabel> LabeledDataset::labels() const {
  std::vector<InfluenceLabel> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(r.label);
  return y;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices,
                                      std::string note) const {
  LabeledDataset out;
  out.provenance = std::move(note);
  out.rows.reserve(indices.size());
  for (auto i : indices) out.rows.push_back(rows[i]);
  return out;
}

SplitSizes fit_split(const SplitSizes& requested, std::size_t available_high,
                     std::size_t available_low) {
  const std::size_t need_high = requested.train_high + requested.test_high;
  const std::size_t need_low = requested.train_low + requested.test_low;
  double factor = 1.0;
  if (need_high > available_high) {
    factor = std::min(factor, static_cast<double>(available_high) / static_cast<double>(need_high));
  }
  if (need_low > available_low) {
    factor = std::min(factor, static_cast<double>(available_low) / static_cast<double>(need_low));
  }
  if (factor >= 1.0) return requested;
  auto scale = [&](std::size_t count) {
    return static_cast<std::size_t>(static_cast<double>(count) * factor);
  };
  return {scale(requested.train_high), scale(requested.train_low), scale(requested.test_high),
          scale(requested.test_low)};
}

LabeledDataset eligible_users(const SocialGraph& g, const PageRankResult& pr) {
  if (pr.labeling.labels.size() != g.node_count()) {
    throw UsageError("PageRank result was computed on a different graph");
  }
  LabeledDataset ds;
  ds.provenance = "eligible";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto& user = g.user(u);
    if (!has_twitter(user.linking_option) || !user.twitter_features) continue;
    ds.rows.push_back({user.user_id, *user.twitter_features, pr.label(u)});
  }
  return ds;
}

DatasetSplit build_dataset(const SocialGraph& g, const PageRankResult& pr, const SplitSizes& sizes,
                           std::uint64_t seed) {
  const LabeledDataset pool = eligible_users(g, pr);
  std::vector<std::size_t> high;
  std::vector<std::size_t> low;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (pool.rows[i].label == InfluenceLabel::High ? high : low).push_back(i);
  }
  const std::size_t need_high = sizes.train_high + sizes.test_high;
  const std::size_t need_low = sizes.train_low + sizes.test_low;
  if (need_high > high.size() || need_low > low.size()) {
    throw DataError(fmt::format(
        "not enough eligible users: need {} high / {} low, available {} high / {} low", need_high,
        need_low, high.size(), low.size()));
  }

  Rng rng(seed);
  rng.shuffle(std::span(high));
  rng.shuffle(std::span(low));

  auto take = [](const std::vector<std::size_t>& from, std::size_t offset, std::size_t count,
                 std::vector<std::size_t>& into) {
    into.insert(into.end(), from.begin() + static_cast<std::ptrdiff_t>(offset),
                from.begin() + static_cast<std::ptrdiff_t>(offset + count));
  };
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  take(high, 0, sizes.train_high, train_rows);
  take(low, 0, sizes.train_low, train_rows);
  take(high, sizes.train_high, sizes.test_high, test_rows);
  take(low, sizes.train_low, sizes.test_low, test_rows);
  rng.shuffle(std::span(train_rows));
  rng.shuffle(std::span(test_rows));

  return {pool.subset(train_rows, fmt::format("train seed={} high={} low={}", seed,
                                              sizes.train_high, sizes.train_low)),
          pool.subset(test_rows, fmt::format("test seed={} high={} low={}", seed, sizes.test_high,
                                             sizes.test_low))};
}

std::string_view to_string(InfluenceLabel label) {
  return label == InfluenceLabel::High ? "high" : "low";
}

std::string to_csv(const LabeledDataset& ds) {
  std::string out = "user_id,followings,followers,tweets,likes,lists,bio,label\n";
  for (const auto& r : ds.rows) {
    const auto& f = r.features;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.user_id, f.followings, f.followers, f.tweets,
                       f.likes, f.lists, f.bio, to_string(r.label));
  }
  return out;
}

namespace {

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw DataError(fmt::format("dataset line {}: bad count '{}'", line_no, field));
  }
  return value;
}

}  // namespace

LabeledDataset dataset_from_csv(std::istream& in, std::string provenance) {
  LabeledDataset ds;
  ds.provenance = std::move(provenance);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("user_id,")) continue;

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 8 || fields[0].empty()) {
      throw DataError(fmt::format("dataset line {}: expected 8 fields", line_no));
    }
    LabeledRow row;
    row.user_id = std::string(fields[0]);
    row.features.followings = parse_count(fields[1], line_no);
    row.features.followers = parse_count(fields[2], line_no);
    row.features.tweets = parse_count(fields[3], line_no);
    row.features.likes = parse_count(fields[4], line_no);
    row.features.lists = parse_count(fields[5], line_no);
    const auto bio = parse_count(fields[6], line_no);
    if (bio > 1) throw DataError(fmt::format("dataset line {}: bio must be 0 or 1", line_no));
    row.features.bio = static_cast<std::uint8_t>(bio);
    if (fields[7] == "high") {
      row.label = InfluenceLabel::High;
    } else if (fields[7] == "low") {
      row.label = InfluenceLabel::Low;
    } else {
      throw DataError(fmt::format("dataset line {}: label must be high or low", line_no));
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

LabeledDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path));
  return dataset_from_csv(in, path);
}

}  // namespace crosslink::ml
