// Copyright 2026 The sgdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sgdiff command-line driver.
//
// Exit status: 0 success, 2 invalid configuration or input, 3 runtime or
// numerical failure (including a failed verify suite).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sgdiff/checkpoint.hpp"
#include "sgdiff/config.hpp"
#include "sgdiff/datasets.hpp"
#include "sgdiff/error.hpp"
#include "sgdiff/metrics.hpp"
#include "sgdiff/noise.hpp"
#include "sgdiff/sampler.hpp"
#include "sgdiff/training.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using sgdiff::Json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<int> steps;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<int> n_nodes;
  std::optional<std::string> profile;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--lambda", f.lambda, "query fraction in (0, 1]");
  cmd->add_option("--steps", f.steps, "inference steps S (sample, eval)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--n-nodes", f.n_nodes, "fixed node count for generated graphs");
  cmd->add_option("--dataset-profile", f.profile, "er, sbm, planar, ego, protein, qm9, ...");
}

// Flags win over file values.
sgdiff::RunConfig resolve(const CommonFlags& f, bool fix_data_nodes) {
  sgdiff::RunConfig c = f.config.empty() ? sgdiff::RunConfig{} : sgdiff::load_run_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.steps) c.sampling.steps = *f.steps;
  if (f.out) c.out = *f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.profile) c.data.profile = *f.profile;
  if (f.n_nodes) {
    c.sampling.n_nodes = *f.n_nodes;
    if (fix_data_nodes) c.data.n_min = c.data.n_max = *f.n_nodes;
  }
  c.validate();
  return c;
}

std::uint64_t prepare_output(const sgdiff::RunConfig& c) {
  fs::create_directories(c.out);
  const Json j = sgdiff::to_json(c);
  std::ofstream(fs::path(c.out) / "config.json") << j.dump(2) << '\n';
  // The output location and thread count do not change results.
  Json keyed = j;
  keyed.erase("out");
  keyed.erase("workers");
  return sgdiff::config_hash(keyed);
}

std::vector<sgdiff::SparseGraph> generate_profile(const sgdiff::RunConfig& c, sgdiff::Rng& rng) {
  if (c.data.profile == "er")
    return sgdiff::gen_er(c.data.count, c.data.n_min, c.data.n_max, c.data.p, rng);
  return sgdiff::gen_sbm(c.data.count, c.data.sbm, rng);
}

Json stats_json(const sgdiff::DatasetStats& s) {
  Json hist = Json::array();
  for (const auto& [n, count] : s.node_count_histogram) hist.push_back({n, count});
  return {{"graphs", s.graph_count},
          {"node_range", {s.min_nodes, s.max_nodes}},
          {"edge_range", {s.min_edges, s.max_edges}},
          {"edge_ratio_range", {s.min_edge_ratio, s.max_edge_ratio}},
          {"node_count_histogram", hist},
          {"node_marginals", s.node_marginals},
          {"edge_marginals", s.edge_marginals}};
}

int cmd_generate_data(const CommonFlags& flags) {
  const auto cfg = resolve(flags, true);
  const auto hash = prepare_output(cfg);
  SGDIFF_REQUIRE(cfg.data.path.empty(), "generate-data: data.path is set; nothing to generate");
  sgdiff::Rng rng = sgdiff::Rng(cfg.seed).split(1);
  sgdiff::Dataset data;
  data.graphs = generate_profile(cfg, rng);
  data.header = {1, 2, cfg.seed, sgdiff::hash_hex(hash)};
  const auto path = fs::path(cfg.out) / "dataset.jsonl";
  sgdiff::save_dataset(path, data);
  const auto stats = stats_json(sgdiff::dataset_stats(data.graphs, 1, 2));
  std::ofstream(fs::path(cfg.out) / "dataset_stats.json") << stats.dump(2) << '\n';
  std::cout << Json{{"dataset", path.string()}, {"stats", stats}}.dump(2) << '\n';
  return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& data_path) {
  auto cfg = resolve(flags, true);
  if (!data_path.empty()) cfg.data.path = data_path;
  const auto hash = prepare_output(cfg);
  sgdiff::Rng root(cfg.seed);
  sgdiff::Dataset data;
  if (cfg.data.path.empty()) {
    sgdiff::Rng gen = root.split(1);
    data.graphs = generate_profile(cfg, gen);
  } else {
    data = sgdiff::load_dataset(cfg.data.path);
  }
  SGDIFF_REQUIRE(!data.graphs.empty(), "train: the dataset has no graphs");
  const auto stats =
      sgdiff::dataset_stats(data.graphs, data.header.node_classes, data.header.edge_classes);
  const auto spec = stats.spec();

  auto net = cfg.network;
  net.node_classes = spec.node_classes;
  net.edge_classes = spec.edge_classes;
  net.lambda = cfg.effective_lambda();
  sgdiff::Rng init = root.split(2);
  sgdiff::TrainState state(sgdiff::init_network(net, init));
  const auto schedule = sgdiff::build_schedule(cfg.diffusion_steps, cfg.schedule);

  Json meta;
  meta["network"] = sgdiff::to_json(net);
  meta["diffusion_steps"] = cfg.diffusion_steps;
  meta["schedule"] = cfg.schedule;
  meta["spec"] = sgdiff::to_json(spec);
  meta["node_counts"] = stats.node_counts;
  auto checkpoint_now = [&](const fs::path& path) {
    meta["step"] = state.step;
    sgdiff::save_checkpoint(path, {state.weights, meta, cfg.seed, hash});
  };

  std::ofstream log(fs::path(cfg.out) / "train_log.jsonl");
  sgdiff::Rng rng = root.split(3);
  sgdiff::train_epochs(
      state, data.graphs, schedule, spec, cfg.optimizer, cfg.training.epochs,
      cfg.training.batch_size, rng, {cfg.training.permute_nodes, cfg.workers},
      [&](const sgdiff::EpochLog& e) {
        const Json line{{"epoch", e.epoch}, {"loss", e.loss}, {"node_term", e.node_term},
                        {"edge_term", e.edge_term}, {"wall_time", e.seconds}};
        log << line.dump() << '\n' << std::flush;
        std::cout << line.dump() << '\n';
        if (cfg.training.checkpoint_every > 0 && e.epoch % cfg.training.checkpoint_every == 0)
          checkpoint_now(fs::path(cfg.out) /
                         ("checkpoint_epoch" + std::to_string(e.epoch) + ".bin"));
      });

  const auto final_path = fs::path(cfg.out) / "checkpoint.bin";
  checkpoint_now(final_path);
  const auto reloaded = sgdiff::load_checkpoint(final_path);
  if (!(reloaded.weights == state.weights))
    throw std::runtime_error("train: reloaded checkpoint differs from the trained weights");
  std::cout << Json{{"checkpoint", final_path.string()}, {"config_hash", sgdiff::hash_hex(hash)},
                    {"steps", state.step}}.dump() << '\n';
  return 0;
}

int cmd_sample(const CommonFlags& flags, const std::string& checkpoint_path,
               std::optional<int> count) {
  auto cfg = resolve(flags, false);
  if (count) cfg.sampling.count = *count;
  cfg.validate();
  const auto hash = prepare_output(cfg);
  const auto path = checkpoint_path.empty() ? fs::path(cfg.out) / "checkpoint.bin"
                                            : fs::path(checkpoint_path);
  const auto ck = sgdiff::load_checkpoint(path);
  const auto& meta = ck.metadata;
  const auto spec = sgdiff::graph_spec_from_json(meta.at("spec"));
  const int steps = meta.at("diffusion_steps").get<int>();
  const auto schedule = sgdiff::build_schedule(steps, meta.at("schedule").get<std::string>());

  sgdiff::SamplerConfig sc;
  sc.diffusion_steps = steps;
  sc.inference_steps = cfg.sampling.steps > 0 ? cfg.sampling.steps : steps;
  sc.lambda = cfg.lambda > 0 ? cfg.lambda : ck.weights.config().lambda;
  sc.seed = cfg.seed;
  sc.workers = cfg.workers;
  sc.validate();
  const auto nodes = cfg.sampling.n_nodes > 0
                         ? sgdiff::NodeCountSource::fixed(cfg.sampling.n_nodes)
                         : sgdiff::NodeCountSource::empirical(
                               meta.at("node_counts").get<std::vector<int>>());
  sgdiff::Dataset out;
  out.graphs = sgdiff::generate(ck.weights, nodes, cfg.sampling.count, sc, schedule, spec);
  out.header = {spec.node_classes, spec.edge_classes, cfg.seed, sgdiff::hash_hex(hash)};
  const auto out_path = fs::path(cfg.out) / "samples.jsonl";
  sgdiff::save_dataset(out_path, out);
  std::cout << Json{{"samples", out_path.string()}, {"count", out.graphs.size()},
                    {"inference_steps", sc.inference_steps}, {"lambda", sc.lambda}}.dump()
            << '\n';
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& generated, const std::string& reference,
             const std::string& train_reference) {
  const auto cfg = resolve(flags, false);
  prepare_output(cfg);
  const auto gen = sgdiff::load_dataset(generated).graphs;
  const auto ref = sgdiff::load_dataset(reference).graphs;
  const auto train = train_reference.empty() ? ref : sgdiff::load_dataset(train_reference).graphs;
  SGDIFF_REQUIRE(!gen.empty() && !ref.empty() && !train.empty(), "eval: empty graph set");
  const auto report = sgdiff::evaluate(gen, ref, train, cfg.eval.sigmas);
  const auto j = report.to_json();
  std::ofstream(fs::path(cfg.out) / "eval.json") << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const CommonFlags& flags, const std::string& kind) {
  const auto cfg = resolve(flags, false);
  prepare_output(cfg);
  const auto report = sgdiff::tools::run_verify(kind, cfg.seed);
  const auto j = report.to_json();
  std::ofstream(fs::path(cfg.out) / ("verify_" + kind + ".json")) << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return report.passed() ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgdiff: sparse discrete diffusion for graph generation"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, sample_flags, eval_flags, verify_flags;
  auto* gen = app.add_subcommand("generate-data", "write a synthetic dataset file");
  add_common(gen, gen_flags);

  auto* train = app.add_subcommand("train", "train a denoiser");
  add_common(train, train_flags);
  std::string data_path;
  train->add_option("--data", data_path, "dataset file (overrides data.path)");

  auto* sample = app.add_subcommand("sample", "generate graphs from a checkpoint");
  add_common(sample, sample_flags);
  std::string checkpoint;
  std::optional<int> count;
  sample->add_option("--checkpoint", checkpoint, "checkpoint file (default <out>/checkpoint.bin)");
  sample->add_option("--count", count, "number of graphs");

  auto* eval = app.add_subcommand("eval", "compare generated graphs with a reference set");
  add_common(eval, eval_flags);
  std::string generated, reference, train_reference;
  eval->add_option("--generated", generated, "generated dataset file")->required();
  eval->add_option("--reference", reference, "reference (test) dataset file")->required();
  eval->add_option("--train-reference", train_reference,
                   "training dataset file for the ratio baseline (default: reference)");

  auto* verify = app.add_subcommand("verify", "run an oracle verification suite");
  add_common(verify, verify_flags);
  std::string kind;
  verify->add_option("kind", kind, "noise, lemma, gradcheck, loss-unbiased, posterior")
      ->required()
      ->check(CLI::IsMember(sgdiff::tools::verify_kinds()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) return cmd_generate_data(gen_flags);
    if (*train) return cmd_train(train_flags, data_path);
    if (*sample) return cmd_sample(sample_flags, checkpoint, count);
    if (*eval) return cmd_eval(eval_flags, generated, reference, train_reference);
    if (*verify) return cmd_verify(verify_flags, kind);
  } catch (const sgdiff::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const sgdiff::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
