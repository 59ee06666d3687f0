#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "crosslink");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return crosslink::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / fmt::format("crosslink_cli_test_{}", name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kSmallPipeline = R"(seed = 11

[synth]
n_users = 3000

[metrics]
path_mode = "sampled"
path_sources = 50

[pagerank]
tolerance = 1e-10
percentile = 0.05

[dataset]
sizes = [60, 60, 20, 20]

[train]
algorithms = ["gbt", "random_forest", "logistic_regression"]

[train.params.gbt]
n_rounds = 20

[train.params.random_forest]
n_trees = 20

[cv]
folds = 3
)";

}  // namespace

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run({"--version"}) == 0);
  CHECK(run({"no-such-command"}) == 1);
  CHECK(run({}) == 1);
  CHECK(run({"metrics", "--bogus"}) == 1);
  CHECK(run({"metrics", "--users", (dir / "missing").string(), "--edges", (dir / "missing").string()}) == 1);
  CHECK(run({"timeline", "--users", "x", "--edges", "y", "--format", "xml"}) == 1);

  spit(dir / "u.jsonl", R"({"user_id": "a", "registered_at": "2013-01", "linking_option": "neither"})" "\n");
  spit(dir / "e.tsv", "a\tghost\n");
  CHECK(run({"--manifest", (dir / "m.json").string(), "metrics", "--users", (dir / "u.jsonl").string(),
             "--edges", (dir / "e.tsv").string()}) == 2);
  const auto manifest = nlohmann::json::parse(slurp(dir / "m.json"));
  CHECK(manifest["command"] == "metrics");
  CHECK(manifest["inputs"].size() == 2);
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("wall_time_seconds"));

  CHECK(run({"train", "--train", (dir / "u.jsonl").string(), "--algorithm", "svm"}) == 1);
}

TEST_CASE("stage by stage") {
  const auto dir = scratch("stages");
  const auto d = [&](const char* name) { return (dir / name).string(); };
  REQUIRE(run({"generate", "--n-users", "3000", "--seed", "5", "--out-dir", dir.string()}) == 0);
  CHECK(fs::exists(dir / "users.jsonl"));
  CHECK(fs::exists(dir / "edges.tsv"));
  CHECK(fs::exists(dir / "manifest.json"));

  const std::vector<std::string> in{"--users", d("users.jsonl"), "--edges", d("edges.tsv")};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), in.begin(), in.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  CHECK(run(with({"ingest-check"}, {"--out", d("ingest.json")})) == 0);
  CHECK(run(with({"metrics"}, {"--path-mode", "sampled", "--path-sources", "20", "--out", d("report.json"),
                               "--ccdf-dir", dir.string()})) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report.contains("avg_clustering"));
  CHECK(slurp(dir / "ccdf_in.csv").starts_with("degree,ccdf\n"));

  CHECK(run(with({"pagerank"}, {"--percentile", "0.05", "--out", d("pr.csv"), "--summary", d("pr.json")})) == 0);
  CHECK(slurp(dir / "pr.csv").starts_with("user_id,score,label\n"));
  CHECK(run(with({"timeline"}, {"--from", "2014-01", "--to", "2014-03", "--out", d("t.csv")})) == 0);
  const auto timeline = slurp(dir / "t.csv");
  CHECK(timeline.starts_with("month,nodes,edges,avg_degree,n_neither,n_tw,n_fb,n_both\n"));
  CHECK(std::count(timeline.begin(), timeline.end(), '\n') == 4);
  CHECK(run(with({"timeline"}, {"--from", "2014-05", "--to", "2014-03"})) == 1);
  CHECK(run(with({"cohorts"}, {"--metric", "pagerank", "--percentile", "0.05", "--out", d("c.csv"),
                               "--composition-out", d("comp.json")})) == 0);
  CHECK(slurp(dir / "c.csv").starts_with("option,x,cdf\n"));

  CHECK(run(with({"dataset"}, {"--percentile", "0.05", "--sizes", "50,50,20,20", "--train-out", d("train.csv"),
                               "--test-out", d("test.csv")})) == 0);
  CHECK(run(with({"dataset"}, {"--percentile", "0.05", "--sizes", "50000,50,20,20", "--strict", "--train-out",
                               d("x.csv"), "--test-out", d("y.csv")})) == 2);
  CHECK(run({"chi2", "--dataset", d("train.csv"), "--out", d("chi2.json")}) == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "chi2.json")).size() == 6);

  CHECK(run({"train", "--train", d("train.csv"), "--algorithm", "gbt", "--param", "n_rounds=10", "--out",
             d("gbt.json")}) == 0);
  CHECK(run({"train", "--train", d("train.csv"), "--algorithm", "gbt", "--param", "subsample=2"}) == 1);
  CHECK(run({"eval", "--model", d("gbt.json"), "--test", d("test.csv"), "--out", d("eval.json")}) == 0);
  const auto eval = nlohmann::json::parse(slurp(dir / "eval.json"));
  CHECK(eval["f1"].get<double>() >= 0.0);
  CHECK(run({"cv", "--dataset", d("train.csv"), "--algorithm", "naive_bayes", "--folds", "5", "--out",
             d("cv.json")}) == 0);
  CHECK(run({"cv", "--dataset", d("train.csv"), "--algorithm", "naive_bayes", "--folds", "1"}) == 1);
  CHECK(run({"gridsearch", "--dataset", d("train.csv"), "--algorithm", "random_forest", "--param", "n_trees=5",
             "--grid", "max_depth=2,4", "--folds", "3", "--out", d("grid.json")}) == 0);

  spit(dir / "friends.json", R"({"for_user": "me", "friends": [
    {"friend_id": "a", "features": {"followings": 10, "followers": 5000, "tweets": 900, "likes": 400, "lists": 80, "bio": 1}},
    {"friend_id": "b", "features": {"followings": 10, "followers": 3, "tweets": 9, "likes": 4, "lists": 0, "bio": 0}}]})");
  CHECK(run({"recommend", "--model", d("gbt.json"), "--input", d("friends.json"), "--top-k", "1", "--out",
             d("rec.json")}) == 0);
  const auto rec = nlohmann::json::parse(slurp(dir / "rec.json"));
  CHECK(rec["entries"].size() == 1);
  CHECK(rec["model_ref"].get<std::string>().starts_with("gbt/v1/"));
  spit(dir / "bad.json", R"({"for_user": "me"})");
  CHECK(run({"recommend", "--model", d("gbt.json"), "--input", d("bad.json")}) == 2);
}

TEST_CASE("pipeline outputs do not depend on the thread count") {
  const auto dir = scratch("pipeline");
  spit(dir / "small.toml", kSmallPipeline);
  REQUIRE(run({"--threads", "1", "pipeline", "--config", (dir / "small.toml").string(), "--out-dir",
               (dir / "t1").string()}) == 0);
  REQUIRE(run({"--threads", "4", "pipeline", "--config", (dir / "small.toml").string(), "--out-dir",
               (dir / "t4").string()}) == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "t1")) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    const auto rel = fs::relative(entry.path(), dir / "t1");
    CAPTURE(rel.string());
    CHECK(slurp(entry.path()) == slurp(dir / "t4" / rel));
    ++compared;
  }
  CHECK(compared >= 20);
  const auto eval = nlohmann::json::parse(slurp(dir / "t1" / "evaluation.json"));
  CHECK(eval["models"].size() == 3);
  CHECK(fs::exists(dir / "t1" / "cv.json"));
}
