#include "crosslink/cli.hpp"

#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/commands.hpp"
#include "cli/serialize.hpp"
#include "cli/support.hpp"
#include "crosslink/attraction.hpp"
#include "crosslink/error.hpp"
#include "crosslink/ingest.hpp"
#include "crosslink/metrics.hpp"
#include "crosslink/ml/chi_square.hpp"
#include "crosslink/ml/dataset.hpp"
#include "crosslink/ml/evaluation.hpp"
#include "crosslink/ml/model.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/parallel.hpp"
#include "crosslink/synth.hpp"
#include "crosslink/temporal.hpp"

namespace crosslink::cli {

GraphBuild load_inputs(RunManifest& manifest, const fs::path& users, const fs::path& edges) {
  manifest.input(users);
  manifest.input(edges);
  auto u = ingest_users(users);
  auto e = ingest_edges(edges);
  if (u.skipped) manifest.note(fmt::format("{}: skipped {} malformed lines", users.string(), u.skipped));
  if (e.skipped) manifest.note(fmt::format("{}: skipped {} malformed lines", edges.string(), e.skipped));
  auto build = build_graph(std::move(u.users), e.edges);
  if (build.stats.self_loops_dropped) manifest.note(fmt::format("dropped {} self-loops", build.stats.self_loops_dropped));
  if (build.stats.duplicates_collapsed) {
    manifest.note(fmt::format("collapsed {} duplicate edges", build.stats.duplicates_collapsed));
  }
  return build;
}

namespace {

using Action = std::function<void(RunManifest&)>;

struct GraphInputs {
  std::string users;
  std::string edges;

  void add(CLI::App* cmd) {
    cmd->add_option("--users", users, "users.jsonl")->required()->check(CLI::ExistingFile);
    cmd->add_option("--edges", edges, "edges.tsv")->required()->check(CLI::ExistingFile);
  }
};

struct PageRankFlags {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
  double percentile = 0.01;

  void add(CLI::App* cmd) {
    cmd->add_option("--damping", damping, "Damping factor")->capture_default_str();
    cmd->add_option("--tol,--tolerance", tolerance, "L1 convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter,--max-iterations", max_iterations)->capture_default_str();
    cmd->add_option("--percentile", percentile, "Top fraction labeled High")->capture_default_str();
  }
  PageRankResult run(const SocialGraph& g) const {
    PageRankOptions options;
    options.damping = damping;
    options.tolerance = tolerance;
    options.max_iterations = max_iterations;
    return rank_and_label(g, options, percentile);
  }
};

std::optional<fs::path> optional_path(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return fs::path(text);
}

void add_generate(CLI::App& app, Action& action) {
  struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_users;
    std::string out_dir;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("generate", "Write a synthetic users.jsonl + edges.tsv pair");
  cmd->add_option("--config", f->config, "TOML or JSON generator config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f->seed, "Overrides the config seed");
  cmd->add_option("--n-users", f->n_users, "Overrides the config user count");
  cmd->add_option("--out-dir", f->out_dir)->required();
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      SynthConfig cfg;
      if (!f->config.empty()) {
        m.input(f->config);
        auto doc = load_config(f->config);
        cfg = synth_config_from_json(doc.contains("synth") ? doc["synth"].dump() : doc.dump());
      }
      if (f->seed) cfg.seed = *f->seed;
      if (f->n_users) cfg.n_users = *f->n_users;
      m.seed("synth", cfg.seed);
      const fs::path dir(f->out_dir);
      m.set_default_path(dir / "manifest.json");
      const auto data = generate_dataset(cfg);
      const auto files = to_files(data);
      std::string planted;
      for (NodeId u = 0; u < data.graph.node_count(); ++u) {
        if (data.planted[u]) planted += data.graph.user(u).user_id + "\n";
      }
      ordered_json info;
      info["config"] = ordered_json::parse(synth_config_to_json(cfg));
      info["nodes"] = data.graph.node_count();
      info["edges"] = data.graph.edge_count();
      info["duplicates_collapsed"] = data.build.duplicates_collapsed;
      info["self_loops_dropped"] = data.build.self_loops_dropped;
      info["log"] = data.log;
      for (const auto& line : data.log) m.note(line);
      emit(m, dir / "users.jsonl", files.users_jsonl);
      emit(m, dir / "edges.tsv", files.edges_tsv);
      emit(m, dir / "planted.txt", planted);
      emit(m, dir / "generation.json", dump(info));
    };
  });
}

void add_ingest_check(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("ingest-check", "Validate a users/edges pair and report what ingest repairs");
  f->in.add(cmd);
  cmd->add_option("--out", f->out, "Report path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      m.input(f->in.users);
      m.input(f->in.edges);
      auto users = ingest_users(fs::path(f->in.users));
      auto edges = ingest_edges(fs::path(f->in.edges));
      const auto user_lines_skipped = users.skipped;
      const auto edge_lines_skipped = edges.skipped;
      auto build = build_graph(std::move(users.users), edges.edges);
      ordered_json doc;
      doc["users"] = build.graph.node_count();
      doc["user_lines_skipped"] = user_lines_skipped;
      doc["edge_lines_read"] = build.stats.input_edges;
      doc["edge_lines_skipped"] = edge_lines_skipped;
      doc["self_loops_dropped"] = build.stats.self_loops_dropped;
      doc["duplicates_collapsed"] = build.stats.duplicates_collapsed;
      doc["edges"] = build.graph.edge_count();
      doc["linking_distribution"] = option_shares(linking_distribution(build.graph));
      emit(m, optional_path(f->out), dump(doc));
    };
  });
}

void add_metrics(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    std::string account;
    std::string path_mode = "auto";
    std::size_t exact_limit = 10000;
    std::size_t path_sources = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string ccdf_dir;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("metrics", "Degree, clustering, LSCC and path-length report");
  f->in.add(cmd);
  cmd->add_option("--account", f->account, "Report followers of this user id");
  cmd->add_option("--path-mode", f->path_mode, "auto | exact | sampled")
      ->check(CLI::IsMember({"auto", "exact", "sampled"}))
      ->capture_default_str();
  cmd->add_option("--exact-limit", f->exact_limit, "Largest LSCC measured exactly in auto mode")
      ->capture_default_str();
  cmd->add_option("--path-sources", f->path_sources, "BFS sources when sampling")->capture_default_str();
  cmd->add_option("--seed", f->seed, "Path-source sampling seed")->capture_default_str();
  cmd->add_option("--out", f->out, "Report path (default stdout)");
  cmd->add_option("--ccdf-dir", f->ccdf_dir, "Also write ccdf_in.csv and ccdf_out.csv here");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      auto build = load_inputs(m, f->in.users, f->in.edges);
      ReportOptions options;
      if (!f->account.empty()) options.account = f->account;
      options.path_mode = f->path_mode == "exact"     ? PathMode::Exact
                          : f->path_mode == "sampled" ? PathMode::Sampled
                                                      : PathMode::Auto;
      options.exact_limit = f->exact_limit;
      options.sample = {f->path_sources, f->seed};
      m.seed("path_sample", f->seed);
      emit(m, optional_path(f->out), dump(to_json(compute_report(build.graph, options))));
      if (!f->ccdf_dir.empty()) {
        emit(m, fs::path(f->ccdf_dir) / "ccdf_in.csv", ccdf_csv(degree_ccdf(build.graph, Direction::In)));
        emit(m, fs::path(f->ccdf_dir) / "ccdf_out.csv", ccdf_csv(degree_ccdf(build.graph, Direction::Out)));
      }
    };
  });
}

void add_pagerank(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    PageRankFlags pr;
    std::string out;
    std::string summary;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("pagerank", "PageRank scores and top-percentile influence labels");
  f->in.add(cmd);
  f->pr.add(cmd);
  cmd->add_option("--out", f->out, "CSV user_id,score,label (default stdout)");
  cmd->add_option("--summary", f->summary, "JSON convergence + threshold summary");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      auto build = load_inputs(m, f->in.users, f->in.edges);
      const auto pr = f->pr.run(build.graph);
      if (!pr.rank.converged) m.note(fmt::format("not converged after {} iterations", pr.rank.iterations));
      emit(m, optional_path(f->out), pagerank_csv(build.graph, pr));
      if (!f->summary.empty()) emit(m, fs::path(f->summary), dump(pagerank_summary(pr)));
      (f->out.empty() ? std::cerr : std::cout)
          << fmt::format("threshold {} high {} iterations {}\n", pr.labeling.threshold, pr.labeling.high_count,
                         pr.rank.iterations);
    };
  });
}

void add_timeline(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    std::string from;
    std::string to;
    std::string format = "csv";
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("timeline", "Monthly snapshot sizes, average degree and linking mix");
  f->in.add(cmd);
  cmd->add_option("--from", f->from, "First month YYYY-MM (default: earliest registration)");
  cmd->add_option("--to", f->to, "Last month YYYY-MM (default: latest registration)");
  cmd->add_option("--format", f->format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", f->out, "Output path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      auto build = load_inputs(m, f->in.users, f->in.edges);
      const auto& g = build.graph;
      if (g.node_count() == 0) throw DataError("empty graph");
      auto first = g.user(0).registered_at;
      auto last = first;
      for (const auto& u : g.users()) {
        first = std::min(first, u.registered_at);
        last = std::max(last, u.registered_at);
      }
      const auto parse = [](const std::string& text) {
        auto month = YearMonth::parse(text);
        if (!month) throw UsageError(fmt::format("bad month '{}', expected YYYY-MM", text));
        return *month;
      };
      const auto from = f->from.empty() ? first : parse(f->from);
      const auto to = f->to.empty() ? last : parse(f->to);
      const auto series = snapshot_series(g, from, to);
      if (f->format == "csv") {
        emit(m, optional_path(f->out), timeline_csv(series));
      } else {
        ordered_json doc;
        doc["snapshots"] = to_json(series);
        doc["linking_distribution"] = option_shares(linking_distribution(g));
        emit(m, optional_path(f->out), dump(doc));
      }
    };
  });
}

void add_cohorts(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    std::string metric = "pagerank";
    PageRankFlags pr;
    std::string out;
    std::string composition_out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("cohorts", "Per-linking-option CDF curves");
  f->in.add(cmd);
  cmd->add_option("--metric", f->metric, "out_degree | in_degree | pagerank")
      ->check(CLI::IsMember({"out_degree", "in_degree", "pagerank"}))
      ->capture_default_str();
  f->pr.add(cmd);
  cmd->add_option("--out", f->out, "CSV option,x,cdf (default stdout)");
  cmd->add_option("--composition-out", f->composition_out, "JSON of High-PageRank share per option");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      auto build = load_inputs(m, f->in.users, f->in.edges);
      const auto metric = *parse_cohort_metric(f->metric);
      std::optional<PageRankResult> pr;
      if (metric == CohortMetric::PageRank) pr = f->pr.run(build.graph);
      const auto curves = cohort_cdf(build.graph, metric, pr ? &*pr : nullptr);
      for (const auto& note : curves.notes) m.note(note);
      emit(m, optional_path(f->out), cohort_csv(curves));
      if (!f->composition_out.empty()) {
        if (!pr) pr = f->pr.run(build.graph);
        emit(m, fs::path(f->composition_out), dump(option_shares(high_pagerank_composition(build.graph, *pr))));
      }
    };
  });
}

void add_dataset(CLI::App& app, Action& action) {
  struct Flags {
    GraphInputs in;
    PageRankFlags pr;
    std::vector<std::size_t> sizes{8000, 8000, 2000, 2000};
    bool strict = false;
    std::uint64_t seed = 0;
    std::string train_out;
    std::string test_out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("dataset", "Balanced High/Low train and test CSVs of Twitter-linked users");
  f->in.add(cmd);
  f->pr.add(cmd);
  cmd->add_option("--sizes", f->sizes, "train_high train_low test_high test_low")
      ->expected(4)
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_flag("--strict", f->strict, "Fail instead of scaling the split down");
  cmd->add_option("--seed", f->seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--train-out", f->train_out)->required();
  cmd->add_option("--test-out", f->test_out)->required();
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      auto build = load_inputs(m, f->in.users, f->in.edges);
      const auto pr = f->pr.run(build.graph);
      ml::SplitSizes sizes{f->sizes[0], f->sizes[1], f->sizes[2], f->sizes[3]};
      if (!f->strict) {
        const auto all = ml::eligible_users(build.graph, pr);
        const auto fitted = ml::fit_split(sizes, all.count(InfluenceLabel::High), all.count(InfluenceLabel::Low));
        if (fitted != sizes) {
          m.note(fmt::format("split scaled to {}/{}-{}/{}", fitted.train_high, fitted.train_low,
                             fitted.test_high, fitted.test_low));
        }
        sizes = fitted;
      }
      m.seed("dataset", f->seed);
      const auto split = ml::build_dataset(build.graph, pr, sizes, f->seed);
      emit(m, fs::path(f->train_out), ml::to_csv(split.train));
      emit(m, fs::path(f->test_out), ml::to_csv(split.test));
    };
  });
}

void add_chi2(CLI::App& app, Action& action) {
  struct Flags {
    std::string dataset;
    std::size_t bins = 10;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("chi2", "Rank the six features by chi-square against the label");
  cmd->add_option("--dataset", f->dataset, "Labeled CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--bins", f->bins, "Equal-frequency bins per numeric feature")->capture_default_str();
  cmd->add_option("--out", f->out, "JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      m.input(f->dataset);
      const auto ds = ml::read_dataset(f->dataset);
      const auto ranking = ml::chi_square_rank(ds, f->bins);
      emit(m, optional_path(f->out), dump(to_json(ranking)));
    };
  });
}

struct ModelFlags {
  std::string algorithm = "gbt";
  std::vector<std::string> params;
  std::string params_file;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--algorithm", algorithm,
                    "gbt | random_forest | decision_tree | naive_bayes | logistic_regression")
        ->capture_default_str();
    cmd->add_option("--param", params, "name=value, repeatable");
    cmd->add_option("--params-file", params_file, "TOML/JSON table of parameters")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Training seed")->capture_default_str();
  }
  ml::ParamMap resolve(RunManifest& m) const {
    ml::ParamMap overrides;
    if (!params_file.empty()) {
      m.input(params_file);
      overrides = params_from_json(load_config(params_file));
    }
    for (const auto& [name, value] : parse_params(params)) overrides[name] = value;
    return ml::resolve_params(algorithm_or_throw(algorithm), overrides);
  }
};

void add_train(CLI::App& app, Action& action) {
  struct Flags {
    ModelFlags model;
    std::string train;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("train", "Fit a classifier and save it as JSON");
  f->model.add(cmd);
  cmd->add_option("--train", f->train, "Labeled CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f->out, "Model JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      const auto params = f->model.resolve(m);
      m.input(f->train);
      m.seed("train", f->model.seed);
      const auto ds = ml::read_dataset(f->train);
      const auto model = ml::train(algorithm_or_throw(f->model.algorithm), params, ds, f->model.seed);
      m.note("model_ref " + ml::model_ref(model));
      emit(m, optional_path(f->out), ml::model_to_json(model));
    };
  });
}

void add_eval(CLI::App& app, Action& action) {
  struct Flags {
    std::string model;
    std::string test;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("eval", "Precision, recall, F1 and AUC of a saved model");
  cmd->add_option("--model", f->model)->required()->check(CLI::ExistingFile);
  cmd->add_option("--test", f->test, "Labeled CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f->out, "JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      m.input(f->model);
      m.input(f->test);
      const auto model = ml::model_from_json(read_file(f->model));
      auto doc = to_json(ml::evaluate(model, ml::read_dataset(f->test)));
      doc["model_ref"] = ml::model_ref(model);
      emit(m, optional_path(f->out), dump(doc));
    };
  });
}

void add_cv(CLI::App& app, Action& action) {
  struct Flags {
    ModelFlags model;
    std::string dataset;
    std::size_t folds = 10;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("cv", "k-fold cross-validation");
  f->model.add(cmd);
  cmd->add_option("--dataset", f->dataset, "Labeled CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--folds", f->folds)->capture_default_str();
  cmd->add_option("--out", f->out, "JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      const auto params = f->model.resolve(m);
      m.input(f->dataset);
      m.seed("cv", f->model.seed);
      const auto ds = ml::read_dataset(f->dataset);
      auto doc = to_json(ml::cross_validate(algorithm_or_throw(f->model.algorithm), params, ds, f->folds,
                                            f->model.seed));
      doc["algorithm"] = f->model.algorithm;
      doc["params"] = to_json(params);
      emit(m, optional_path(f->out), dump(doc));
    };
  });
}

void add_gridsearch(CLI::App& app, Action& action) {
  struct Flags {
    ModelFlags model;
    std::string dataset;
    std::vector<std::string> grid;
    std::size_t folds = 10;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("gridsearch", "Exhaustive parameter sweep scored by mean CV F1");
  f->model.add(cmd);
  cmd->add_option("--dataset", f->dataset, "Labeled CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--grid", f->grid, "name=v1,v2,... repeatable")->required();
  cmd->add_option("--folds", f->folds)->capture_default_str();
  cmd->add_option("--out", f->out, "JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      const auto base = f->model.resolve(m);
      m.input(f->dataset);
      m.seed("cv", f->model.seed);
      const auto ds = ml::read_dataset(f->dataset);
      auto doc = to_json(ml::grid_search(algorithm_or_throw(f->model.algorithm), base, parse_grid(f->grid), ds,
                                         f->folds, f->model.seed));
      doc["algorithm"] = f->model.algorithm;
      emit(m, optional_path(f->out), dump(doc));
    };
  });
}

void add_recommend(CLI::App& app, Action& action) {
  struct Flags {
    std::string model;
    std::string input;
    std::optional<std::size_t> top_k;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("recommend", "Rank a user's friends for invitation, predicted High first");
  cmd->add_option("--model", f->model)->required()->check(CLI::ExistingFile);
  cmd->add_option("--input", f->input, "{for_user, friends: [{friend_id, features}]}")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--top-k", f->top_k, "Keep the first k entries");
  cmd->add_option("--out", f->out, "JSON path (default stdout)");
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      m.input(f->model);
      m.input(f->input);
      const auto model = ml::model_from_json(read_file(f->model));
      const auto request = recommend_request_from_json(read_file(f->input));
      const auto list = recommend(request.for_user, request.friends, model, f->top_k);
      emit(m, optional_path(f->out), recommendation_to_json(list));
    };
  });
}

void add_pipeline(CLI::App& app, Action& action) {
  struct Flags {
    std::string config;
    std::string out_dir;
  };
  auto f = std::make_shared<Flags>();
  auto* cmd = app.add_subcommand("pipeline", "Full experiment: generate, metrics, pagerank, train, eval");
  cmd->add_option("--config", f->config, "TOML or JSON pipeline config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", f->out_dir)->required();
  cmd->callback([f, &action] {
    action = [f](RunManifest& m) {
      m.input(f->config);
      const fs::path dir(f->out_dir);
      m.set_default_path(dir / "manifest.json");
      run_pipeline(load_config(f->config), dir, m);
    };
  });
}

void record_flags(RunManifest& m, const CLI::App& cmd) {
  for (const auto* opt : cmd.get_options()) {
    if (opt->count() == 0) continue;
    m.flag(opt->get_single_name(), opt->results());
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Cross-site linking analysis for social graphs", "crosslink"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  std::size_t threads = 0;
  std::string manifest_path;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--manifest", manifest_path, "Where to write the run manifest");

  Action action;
  add_generate(app, action);
  add_ingest_check(app, action);
  add_metrics(app, action);
  add_pagerank(app, action);
  add_timeline(app, action);
  add_cohorts(app, action);
  add_dataset(app, action);
  add_chi2(app, action);
  add_train(app, action);
  add_eval(app, action);
  add_cv(app, action);
  add_gridsearch(app, action);
  add_recommend(app, action);
  add_pipeline(app, action);

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto subs = app.get_subcommands([&](const CLI::App* c) { return c->get_name() == name; });
    if (subs.empty()) {
      std::cerr << "error: unknown subcommand '" << name << "'\n\n" << app.help();
      return 1;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const auto* sub = app.get_subcommands().front();
  RunManifest manifest(sub->get_name());
  record_flags(manifest, app);
  record_flags(manifest, *sub);
  set_thread_count(threads);

  int code = 0;
  try {
    action(manifest);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest.note(std::string("usage error: ") + e.what());
    code = 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest.note(std::string("data error: ") + e.what());
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest.note(std::string("error: ") + e.what());
    code = 2;
  }

  const std::string doc = manifest.to_json();
  try {
    if (!manifest_path.empty()) {
      write_file(manifest_path, doc);
    } else if (manifest.default_path()) {
      write_file(*manifest.default_path(), doc);
    } else {
      std::cerr << doc;
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

}  // namespace crosslink::cli
