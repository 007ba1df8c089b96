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

#include "sgdiff/config.hpp"

#include <cstdio>
#include <fstream>

#include "sgdiff/error.hpp"
#include "sgdiff/noise.hpp"

namespace sgdiff {

Json to_json(const EncodingConfig& c) {
  return {{"k_eig", c.k_eig},
          {"hop_cap", c.hop_cap},
          {"eigen", c.eigen},
          {"cycles", c.cycles},
          {"degree", c.degree},
          {"distance", c.distance},
          {"adamic_adar", c.adamic_adar},
          {"class_frequencies", c.class_frequencies}};
}

EncodingConfig encoding_config_from_json(const Json& j) {
  EncodingConfig c;
  c.k_eig = j.at("k_eig").get<int>();
  c.hop_cap = j.at("hop_cap").get<int>();
  c.eigen = j.at("eigen").get<bool>();
  c.cycles = j.at("cycles").get<bool>();
  c.degree = j.at("degree").get<bool>();
  c.distance = j.at("distance").get<bool>();
  c.adamic_adar = j.at("adamic_adar").get<bool>();
  c.class_frequencies = j.at("class_frequencies").get<bool>();
  return c;
}

Json to_json(const NetworkConfig& c) {
  return {{"layers", c.layers},
          {"node_dim", c.node_dim},
          {"edge_dim", c.edge_dim},
          {"graph_dim", c.graph_dim},
          {"heads", c.heads},
          {"node_classes", c.node_classes},
          {"edge_classes", c.edge_classes},
          {"mode", std::string(to_string(c.mode))},
          {"edge_weight", c.edge_weight},
          {"lambda", c.lambda},
          {"encoding", to_json(c.encoding)}};
}

NetworkConfig network_config_from_json(const Json& j) {
  NetworkConfig c;
  c.layers = j.at("layers").get<int>();
  c.node_dim = j.at("node_dim").get<int>();
  c.edge_dim = j.at("edge_dim").get<int>();
  c.graph_dim = j.at("graph_dim").get<int>();
  c.heads = j.at("heads").get<int>();
  c.node_classes = j.at("node_classes").get<int>();
  c.edge_classes = j.at("edge_classes").get<int>();
  c.mode = denoiser_mode_from_string(j.at("mode").get<std::string>());
  c.edge_weight = j.at("edge_weight").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.encoding = encoding_config_from_json(j.at("encoding"));
  return c;
}

Json to_json(const GraphSpec& s) {
  return {{"node_classes", s.node_classes},
          {"edge_classes", s.edge_classes},
          {"node_marginals", s.node_marginals},
          {"edge_marginals", s.edge_marginals}};
}

GraphSpec graph_spec_from_json(const Json& j) {
  GraphSpec s;
  s.node_classes = j.at("node_classes").get<int>();
  s.edge_classes = j.at("edge_classes").get<int>();
  s.node_marginals = j.at("node_marginals").get<std::vector<double>>();
  s.edge_marginals = j.at("edge_marginals").get<std::vector<double>>();
  s.validate();
  return s;
}

double RunConfig::effective_lambda() const {
  if (lambda > 0) return lambda;
  if (const auto p = find_profile(data.profile)) return p->lambda;
  return 1.0;
}

void RunConfig::validate() const {
  if (data.path.empty()) {
    const auto p = find_profile(data.profile);
    SGDIFF_REQUIRE(p.has_value(), "data.profile: unknown profile '" + data.profile + "'");
    SGDIFF_REQUIRE(p->generatable, "data.profile: '" + data.profile +
                                       "' cannot be generated; set data.path to a dataset file");
    SGDIFF_REQUIRE(data.count >= 1, "data.count must be at least 1");
    if (data.profile == "er") {
      SGDIFF_REQUIRE(data.n_min >= 1 && data.n_min <= data.n_max,
                     "data.n_min/n_max: need 1 <= n_min <= n_max");
      SGDIFF_REQUIRE(data.p > 0 && data.p < 1, "data.p must lie in (0, 1)");
    } else {
      data.sbm.validate();
    }
  }
  SGDIFF_REQUIRE(diffusion_steps >= 1, "diffusion_steps must be at least 1");
  (void)build_schedule(1, schedule);
  SGDIFF_REQUIRE(lambda == 0 || (lambda > 0 && lambda <= 1), "lambda must lie in (0, 1]");
  NetworkConfig net = network;
  net.lambda = effective_lambda();
  net.validate();
  SGDIFF_REQUIRE(optimizer.learning_rate >= 0, "optimizer.learning_rate must be nonnegative");
  SGDIFF_REQUIRE(optimizer.weight_decay >= 0, "optimizer.weight_decay must be nonnegative");
  SGDIFF_REQUIRE(optimizer.beta1 >= 0 && optimizer.beta1 < 1, "optimizer.beta1 must lie in [0, 1)");
  SGDIFF_REQUIRE(optimizer.beta2 >= 0 && optimizer.beta2 < 1, "optimizer.beta2 must lie in [0, 1)");
  SGDIFF_REQUIRE(optimizer.epsilon > 0, "optimizer.epsilon must be positive");
  SGDIFF_REQUIRE(training.batch_size >= 1, "training.batch_size must be at least 1");
  SGDIFF_REQUIRE(training.epochs >= 0, "training.epochs must be nonnegative");
  SGDIFF_REQUIRE(training.checkpoint_every >= 0, "training.checkpoint_every must be nonnegative");
  SGDIFF_REQUIRE(sampling.steps >= 0 && sampling.steps <= diffusion_steps,
                 "sampling.steps must lie in [0, diffusion_steps]");
  SGDIFF_REQUIRE(sampling.count >= 1, "sampling.count must be at least 1");
  SGDIFF_REQUIRE(sampling.n_nodes >= 0, "sampling.n_nodes must be nonnegative");
  SGDIFF_REQUIRE(eval.sigmas.degree > 0 && eval.sigmas.clustering > 0 && eval.sigmas.spectral > 0,
                 "eval sigmas must be positive");
  SGDIFF_REQUIRE(eval.repeats >= 1, "eval.repeats must be at least 1");
  SGDIFF_REQUIRE(!out.empty(), "out must be a directory path");
  SGDIFF_REQUIRE(workers >= 1, "workers must be at least 1");
}

Json to_json(const RunConfig& c) {
  Json net = to_json(c.network);
  // Class counts and lambda come from the dataset and the top-level key.
  net.erase("node_classes");
  net.erase("edge_classes");
  net.erase("lambda");
  const auto& s = c.data.sbm;
  Json j;
  j["data"] = {{"path", c.data.path},
               {"profile", c.data.profile},
               {"count", c.data.count},
               {"n_min", c.data.n_min},
               {"n_max", c.data.n_max},
               {"p", c.data.p},
               {"sbm",
                {{"min_blocks", s.min_blocks},
                 {"max_blocks", s.max_blocks},
                 {"min_block_size", s.min_block_size},
                 {"max_block_size", s.max_block_size},
                 {"p_in", s.p_in},
                 {"p_out", s.p_out}}}};
  j["diffusion_steps"] = c.diffusion_steps;
  j["schedule"] = c.schedule;
  j["lambda"] = c.lambda;
  j["network"] = std::move(net);
  j["optimizer"] = {{"learning_rate", c.optimizer.learning_rate},
                    {"weight_decay", c.optimizer.weight_decay},
                    {"beta1", c.optimizer.beta1},
                    {"beta2", c.optimizer.beta2},
                    {"epsilon", c.optimizer.epsilon}};
  j["training"] = {{"batch_size", c.training.batch_size},
                   {"epochs", c.training.epochs},
                   {"permute_nodes", c.training.permute_nodes},
                   {"checkpoint_every", c.training.checkpoint_every}};
  j["sampling"] = {{"steps", c.sampling.steps},
                   {"count", c.sampling.count},
                   {"n_nodes", c.sampling.n_nodes}};
  j["eval"] = {{"sigma_degree", c.eval.sigmas.degree},
               {"sigma_clustering", c.eval.sigmas.clustering},
               {"sigma_spectral", c.eval.sigmas.spectral},
               {"repeats", c.eval.repeats}};
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["workers"] = c.workers;
  return j;
}

namespace {

bool same_kind(const Json& def, const Json& v) {
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_number_float()) return v.is_number();
  if (def.is_number_unsigned()) return v.is_number_unsigned();
  if (def.is_number_integer()) return v.is_number_integer();
  return false;
}

void overlay(Json& base, const Json& patch, const std::string& path) {
  if (!patch.is_object()) throw PreconditionError("config: " + path + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw PreconditionError("config: unknown key '" + where + "'");
    Json& slot = base[key];
    if (slot.is_object()) {
      overlay(slot, value, where);
    } else if (!same_kind(slot, value)) {
      throw PreconditionError("config: '" + where + "' has the wrong type (expected " +
                              std::string(slot.type_name()) + ")");
    } else {
      slot = value;
    }
  }
}

}  // namespace

RunConfig run_config_from_json(const Json& patch) {
  Json j = to_json(RunConfig{});
  overlay(j, patch, "");
  RunConfig c;
  const auto& d = j["data"];
  c.data.path = d["path"].get<std::string>();
  c.data.profile = d["profile"].get<std::string>();
  c.data.count = d["count"].get<int>();
  c.data.n_min = d["n_min"].get<int>();
  c.data.n_max = d["n_max"].get<int>();
  c.data.p = d["p"].get<double>();
  const auto& s = d["sbm"];
  c.data.sbm.min_blocks = s["min_blocks"].get<int>();
  c.data.sbm.max_blocks = s["max_blocks"].get<int>();
  c.data.sbm.min_block_size = s["min_block_size"].get<int>();
  c.data.sbm.max_block_size = s["max_block_size"].get<int>();
  c.data.sbm.p_in = s["p_in"].get<double>();
  c.data.sbm.p_out = s["p_out"].get<double>();
  c.diffusion_steps = j["diffusion_steps"].get<int>();
  c.schedule = j["schedule"].get<std::string>();
  c.lambda = j["lambda"].get<double>();
  Json net = j["network"];
  net["node_classes"] = 1;
  net["edge_classes"] = 2;
  net["lambda"] = 1.0;
  c.network = network_config_from_json(net);
  const auto& o = j["optimizer"];
  c.optimizer.learning_rate = o["learning_rate"].get<double>();
  c.optimizer.weight_decay = o["weight_decay"].get<double>();
  c.optimizer.beta1 = o["beta1"].get<double>();
  c.optimizer.beta2 = o["beta2"].get<double>();
  c.optimizer.epsilon = o["epsilon"].get<double>();
  const auto& t = j["training"];
  c.training.batch_size = t["batch_size"].get<int>();
  c.training.epochs = t["epochs"].get<int>();
  c.training.permute_nodes = t["permute_nodes"].get<bool>();
  c.training.checkpoint_every = t["checkpoint_every"].get<int>();
  const auto& sm = j["sampling"];
  c.sampling.steps = sm["steps"].get<int>();
  c.sampling.count = sm["count"].get<int>();
  c.sampling.n_nodes = sm["n_nodes"].get<int>();
  const auto& e = j["eval"];
  c.eval.sigmas.degree = e["sigma_degree"].get<double>();
  c.eval.sigmas.clustering = e["sigma_clustering"].get<double>();
  c.eval.sigmas.spectral = e["sigma_spectral"].get<double>();
  c.eval.repeats = e["repeats"].get<int>();
  c.seed = j["seed"].get<std::uint64_t>();
  c.out = j["out"].get<std::string>();
  c.workers = j["workers"].get<int>();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("config: cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config: " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

std::uint64_t config_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sgdiff
