// Copyright 2026 The bs4nn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: train, eval, noise, sweep, inspect, encode.
// Exit codes: 0 ok, 1 usage/config, 2 data/format, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bs4nn/data.hpp"
#include "bs4nn/encoding.hpp"
#include "bs4nn/errors.hpp"
#include "bs4nn/evaluation.hpp"
#include "bs4nn/learning.hpp"
#include "bs4nn/persistence.hpp"
#include "bs4nn/rng.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  if (values.empty()) {
    throw bs4nn::ConfigError("expected a comma-separated list, got '" + text +
                             "'");
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(text)) values.push_back(static_cast<int>(v));
  return values;
}

// "start:stop:step", inclusive of both ends when step divides the span.
std::vector<float> parse_range(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> parts;
  while (std::getline(ss, part, ':')) parts.push_back(std::stod(part));
  if (parts.size() != 3 || parts[2] <= 0.0) {
    throw bs4nn::ConfigError("expected start:stop:step, got '" + text + "'");
  }
  std::vector<float> values;
  for (double v = parts[0]; v <= parts[1] + 1e-9; v += parts[2]) {
    values.push_back(static_cast<float>(v));
  }
  return values;
}

// "lo:hi[,lo:hi,...]" per layer.
std::vector<std::pair<double, double>> parse_init_ranges(const std::string& text) {
  std::vector<std::pair<double, double>> ranges;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw bs4nn::ConfigError("expected lo:hi, got '" + item + "'");
    }
    ranges.emplace_back(std::stod(item.substr(0, colon)),
                        std::stod(item.substr(colon + 1)));
  }
  if (ranges.empty()) {
    throw bs4nn::ConfigError("expected lo:hi ranges, got '" + text + "'");
  }
  return ranges;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw bs4nn::FormatError("cannot write " + path.string());
  }
  out << text;
}

json config_to_json(const bs4nn::TrainConfig& cfg) {
  json j;
  j["eta"] = cfg.eta;
  j["mu"] = cfg.mu;
  j["gamma"] = cfg.gamma;
  j["lambda"] = cfg.lambda;
  j["epochs"] = cfg.epochs;
  j["decay_fraction"] = cfg.decay.fraction;
  j["decay_every_epochs"] = cfg.decay.every_epochs;
  j["seed"] = cfg.seed;
  j["t_max"] = cfg.t_max;
  j["layer_inits"] = json::array();
  for (const bs4nn::LayerInit& init : cfg.layer_inits) {
    j["layer_inits"].push_back({{"w_low", init.w_low},
                                {"w_high", init.w_high},
                                {"alpha", init.alpha},
                                {"theta", init.theta}});
  }
  return j;
}

void write_run_config(const fs::path& dir, const json& j) {
  write_text(dir / "run_config.json", j.dump(2) + "\n");
}

struct CommonEvalArgs {
  std::string model_path;
  std::string images_path;
  std::string labels_path;
  std::string out_dir;
  int limit = 0;
  int t_max = 256;
  int threads = default_threads();
};

bs4nn::LabeledDataset load_eval_dataset(const CommonEvalArgs& args) {
  bs4nn::LabeledDataset ds = bs4nn::make_dataset(
      bs4nn::load_idx_images(args.images_path),
      bs4nn::load_idx_labels(args.labels_path));
  return bs4nn::dataset_head(ds, args.limit);
}

json eval_args_to_json(const char* command, const CommonEvalArgs& args) {
  json j;
  j["command"] = command;
  j["model"] = args.model_path;
  j["images"] = args.images_path;
  j["labels"] = args.labels_path;
  j["limit"] = args.limit;
  j["t_max"] = args.t_max;
  j["threads"] = args.threads;
  return j;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string preset = "mnist";
  std::string train_images, train_labels, test_images, test_labels;
  std::string out_dir = "bs4nn_run";
  std::string hidden_text, alpha_text, w_init_text;
  double eta = 0, mu = 0, lambda = 0, decay_fraction = 0, theta = 0;
  int gamma = 0, epochs = 0, decay_every = 0, t_max = 0;
  int limit_train = 0, limit_test = 0;
  std::uint64_t seed = 0;
  int threads = default_threads();
  CLI::App* cmd = nullptr;
};

bs4nn::Preset resolve_preset(const std::string& name) {
  if (name == "mnist") return bs4nn::preset_mnist();
  if (name == "fashion") return bs4nn::preset_fashion();
  if (name == "fashion-deep") return bs4nn::preset_fashion_deep();
  throw bs4nn::ConfigError("unknown preset '" + name + "'");
}

int cmd_train(TrainArgs& args) {
  bs4nn::Preset preset = resolve_preset(args.preset);
  bs4nn::TrainConfig cfg = preset.config;
  std::vector<int> hidden = preset.hidden;

  const auto set = [&](const char* flag) { return args.cmd->count(flag) > 0; };
  if (set("--hidden")) hidden = parse_int_list(args.hidden_text);
  if (set("--eta")) cfg.eta = args.eta;
  if (set("--mu")) cfg.mu = args.mu;
  if (set("--gamma")) cfg.gamma = args.gamma;
  if (set("--lambda")) cfg.lambda = args.lambda;
  if (set("--epochs")) cfg.epochs = args.epochs;
  if (set("--t-max")) cfg.t_max = args.t_max;
  if (set("--decay-fraction")) cfg.decay.fraction = args.decay_fraction;
  if (set("--decay-every")) cfg.decay.every_epochs = args.decay_every;
  if (set("--seed")) cfg.seed = args.seed;

  // Architecture changes resize the per-layer init list; the preset's last
  // entry is reused for layers beyond its coverage.
  const int num_layers = static_cast<int>(hidden.size()) + 1;
  while (static_cast<int>(cfg.layer_inits.size()) < num_layers) {
    cfg.layer_inits.push_back(cfg.layer_inits.back());
  }
  cfg.layer_inits.resize(num_layers);
  if (set("--w-init")) {
    const auto ranges = parse_init_ranges(args.w_init_text);
    for (int l = 0; l < num_layers; ++l) {
      const auto& r = ranges[std::min<std::size_t>(l, ranges.size() - 1)];
      cfg.layer_inits[l].w_low = r.first;
      cfg.layer_inits[l].w_high = r.second;
    }
  }
  if (set("--alpha")) {
    const auto alphas = parse_double_list(args.alpha_text);
    for (int l = 0; l < num_layers; ++l) {
      cfg.layer_inits[l].alpha = static_cast<float>(
          alphas[std::min<std::size_t>(l, alphas.size() - 1)]);
    }
  }
  if (set("--theta")) {
    for (auto& init : cfg.layer_inits) init.theta = static_cast<float>(args.theta);
  }

  std::vector<std::string> class_names;
  if (args.preset == "fashion" || args.preset == "fashion-deep") {
    class_names = bs4nn::fashion_mnist_class_names();
  }
  bs4nn::LabeledDataset train = bs4nn::make_dataset(
      bs4nn::load_idx_images(args.train_images),
      bs4nn::load_idx_labels(args.train_labels), class_names);
  train = bs4nn::dataset_head(train, args.limit_train);

  std::optional<bs4nn::LabeledDataset> test;
  if (!args.test_images.empty()) {
    test = bs4nn::dataset_head(
        bs4nn::make_dataset(bs4nn::load_idx_images(args.test_images),
                            bs4nn::load_idx_labels(args.test_labels),
                            class_names),
        args.limit_test);
  }

  std::vector<int> arch;
  arch.push_back(train.images.front().size());
  arch.insert(arch.end(), hidden.begin(), hidden.end());
  arch.push_back(train.num_classes);

  fs::create_directories(args.out_dir);
  json snapshot;
  snapshot["command"] = "train";
  snapshot["preset"] = args.preset;
  snapshot["train_images"] = args.train_images;
  snapshot["train_labels"] = args.train_labels;
  snapshot["test_images"] = args.test_images;
  snapshot["test_labels"] = args.test_labels;
  snapshot["limit_train"] = args.limit_train;
  snapshot["limit_test"] = args.limit_test;
  snapshot["arch"] = arch;
  snapshot["threads"] = args.threads;
  snapshot["config"] = config_to_json(cfg);
  write_run_config(args.out_dir, snapshot);

  bs4nn::Network net = bs4nn::init_network(arch, cfg);

  std::ofstream history(fs::path(args.out_dir) / "history.csv");
  history << "epoch,train_loss,train_acc,test_acc,eta,mu,wall_seconds\n";
  const auto on_epoch = [&](const bs4nn::EpochStats& s) {
    history << s.epoch << ',' << s.train_loss << ',' << s.train_accuracy << ',';
    if (s.test_accuracy >= 0.0) history << s.test_accuracy;
    history << ',' << s.eta << ',' << s.mu << ',' << s.wall_seconds << '\n';
    history.flush();
    std::cout << "epoch " << s.epoch << "/" << cfg.epochs
              << "  loss=" << s.train_loss << "  train_acc=" << s.train_accuracy;
    if (s.test_accuracy >= 0.0) std::cout << "  test_acc=" << s.test_accuracy;
    std::cout << "  eta=" << s.eta << "  (" << s.wall_seconds << "s)\n";
  };

  bs4nn::fit(net, train, cfg, test ? &*test : nullptr, on_epoch, args.threads);

  const fs::path checkpoint = fs::path(args.out_dir) / "checkpoint.bs4n";
  const fs::path deployment = fs::path(args.out_dir) / "deployment.bs4n";
  bs4nn::save_model(net, checkpoint.string(), /*include_real=*/true);
  const std::size_t deploy_bytes =
      bs4nn::save_model(net, deployment.string(), /*include_real=*/false);
  std::cout << "wrote " << checkpoint.string() << " and "
            << deployment.string() << " (" << deploy_bytes << " bytes)\n";
  if (test) {
    std::cout << "final test accuracy: "
              << bs4nn::accuracy(net, *test, args.threads) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const CommonEvalArgs& args) {
  bs4nn::LoadedModel model = bs4nn::load_model(args.model_path);
  model.network.t_max = args.t_max;
  const bs4nn::LabeledDataset ds = load_eval_dataset(args);
  const bs4nn::EvalReport report =
      bs4nn::evaluate(model.network, ds, args.threads);

  std::cout << "samples: " << report.samples << "\n"
            << "accuracy: " << report.accuracy << "\n"
            << "mean decision time: " << report.mean_decision_time
            << " steps\n";

  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    const int classes = static_cast<int>(report.confusion.rows());

    std::ostringstream summary;
    summary << "accuracy,mean_decision_time,samples\n"
            << report.accuracy << ',' << report.mean_decision_time << ','
            << report.samples << '\n';
    write_text(fs::path(args.out_dir) / "summary.csv", summary.str());

    std::ostringstream confusion;
    for (int r = 0; r < classes; ++r) {
      for (int c = 0; c < classes; ++c) {
        confusion << report.confusion(r, c) << (c + 1 < classes ? ',' : '\n');
      }
    }
    write_text(fs::path(args.out_dir) / "confusion.csv", confusion.str());

    std::ostringstream firing;
    for (int r = 0; r < classes; ++r) {
      for (int c = 0; c < classes; ++c) {
        firing << report.mean_firing_time(r, c) << (c + 1 < classes ? ',' : '\n');
      }
    }
    write_text(fs::path(args.out_dir) / "mean_firing_times.csv", firing.str());

    std::ostringstream spikes;
    spikes << "class,mean_input_spikes,mean_hidden_spikes,mean_total_spikes,"
              "mean_decision_time\n";
    for (int c = 0; c < classes; ++c) {
      spikes << c << ',' << report.mean_input_spikes[c] << ','
             << report.mean_hidden_spikes[c] << ','
             << report.mean_total_spikes[c] << ','
             << report.mean_decision_time_per_class[c] << '\n';
    }
    write_text(fs::path(args.out_dir) / "spike_counts.csv", spikes.str());

    json snapshot = eval_args_to_json("eval", args);
    snapshot["has_real_weights"] = model.has_real_weights;
    write_run_config(args.out_dir, snapshot);
    std::cout << "reports written to " << args.out_dir << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// noise

int cmd_noise(const CommonEvalArgs& args, const std::string& levels_text,
              std::uint64_t seed) {
  bs4nn::LoadedModel model = bs4nn::load_model(args.model_path);
  model.network.t_max = args.t_max;
  const bs4nn::LabeledDataset ds = load_eval_dataset(args);
  const std::vector<double> levels = parse_double_list(levels_text);
  const std::vector<double> acc =
      bs4nn::noise_robustness(model.network, ds, levels, seed, args.threads);

  std::ostringstream csv;
  csv << "level,accuracy\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    csv << levels[i] << ',' << acc[i] << '\n';
    std::cout << "J=" << levels[i] << "  accuracy=" << acc[i] << "\n";
  }
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / "noise.csv", csv.str());
    json snapshot = eval_args_to_json("noise", args);
    snapshot["levels"] = levels;
    snapshot["seed"] = seed;
    write_run_config(args.out_dir, snapshot);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const CommonEvalArgs& args, const std::string& theta_text) {
  bs4nn::LoadedModel model = bs4nn::load_model(args.model_path);
  model.network.t_max = args.t_max;
  const bs4nn::LabeledDataset ds = load_eval_dataset(args);
  const std::vector<float> thetas = parse_range(theta_text);
  const std::vector<bs4nn::SweepPoint> points =
      bs4nn::threshold_sweep(model.network, ds, thetas, args.threads);

  std::ostringstream csv;
  csv << "theta,accuracy,mean_response_time\n";
  for (const bs4nn::SweepPoint& p : points) {
    csv << p.theta << ',' << p.accuracy << ',' << p.mean_response_time << '\n';
    std::cout << "theta=" << p.theta << "  accuracy=" << p.accuracy
              << "  response=" << p.mean_response_time << "\n";
  }
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / "sweep.csv", csv.str());
    json snapshot = eval_args_to_json("sweep", args);
    snapshot["theta_range"] = theta_text;
    write_run_config(args.out_dir, snapshot);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// inspect

int cmd_inspect(const std::string& model_path, const std::string& out_dir,
                int maps, int map_width, int map_height, std::uint64_t seed,
                int t_max) {
  bs4nn::LoadedModel model = bs4nn::load_model(model_path);
  model.network.t_max = t_max;

  const bs4nn::ModelSizeReport sizes = bs4nn::model_size_report(model.network);
  const bs4nn::WeightStats stats = bs4nn::weight_stats(model.network);

  std::cout << "layers: " << sizes.layers.size()
            << (model.has_real_weights ? " (checkpoint)" : " (deployment)")
            << "\n";
  std::cout << "layer  in    out   packed_B  header_B  dense_B   pos_frac\n";
  std::ostringstream csv;
  csv << "layer,in,out,packed_payload_bytes,header_bytes,dense_bytes,"
         "positive_fraction\n";
  for (std::size_t l = 0; l < sizes.layers.size(); ++l) {
    const bs4nn::LayerSizeInfo& info = sizes.layers[l];
    std::printf("%-6zu %-5d %-5d %-9zu %-9zu %-9zu %.4f\n", l, info.in_dim,
                info.out_dim, info.packed_payload_bytes, info.header_bytes,
                info.dense_bytes, stats.positive_fraction[l]);
    csv << l << ',' << info.in_dim << ',' << info.out_dim << ','
        << info.packed_payload_bytes << ',' << info.header_bytes << ','
        << info.dense_bytes << ',' << stats.positive_fraction[l] << '\n';
  }
  std::cout << "total packed " << sizes.total_packed_bytes << " B vs dense "
            << sizes.total_dense_bytes << " B  (payload ratio "
            << sizes.payload_ratio << ", total ratio " << sizes.total_ratio
            << ")\n";

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "size_report.csv", csv.str());

    if (maps > 0) {
      const int hidden = model.network.layers.front().fan_out();
      std::vector<int> indices(hidden);
      for (int j = 0; j < hidden; ++j) indices[j] = j;
      bs4nn::Rng rng(bs4nn::derive_seed(seed, bs4nn::kSeedStreamMaps));
      rng.shuffle(indices);
      indices.resize(std::min(maps, hidden));
      bs4nn::export_weight_maps(model.network, map_width, map_height,
                                (fs::path(out_dir) / "maps").string(), indices);
      std::cout << indices.size() << " weight map pairs written to "
                << (fs::path(out_dir) / "maps").string() << "\n";
    }
    json snapshot;
    snapshot["command"] = "inspect";
    snapshot["model"] = model_path;
    snapshot["maps"] = maps;
    snapshot["map_width"] = map_width;
    snapshot["map_height"] = map_height;
    snapshot["seed"] = seed;
    write_run_config(out_dir, snapshot);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// encode

int cmd_encode(const std::string& images_path, int index, int t_max,
               double jitter, std::uint64_t seed, const std::string& output) {
  const std::vector<bs4nn::IntensityImage> images =
      bs4nn::load_idx_images(images_path);
  if (index < 0 || index >= static_cast<int>(images.size())) {
    throw bs4nn::ConfigError("image index " + std::to_string(index) +
                             " outside [0, " + std::to_string(images.size()) +
                             ")");
  }
  bs4nn::IntensityImage img = images[index];
  if (jitter > 0.0) {
    bs4nn::Rng rng(bs4nn::derive_seed(seed, bs4nn::kSeedStreamNoise));
    img = bs4nn::add_jitter_noise(img, jitter, rng);
  }
  const bs4nn::SpikeTimes spikes = bs4nn::encode_image(img, t_max);

  std::ostringstream csv;
  csv << "neuron,time\n";
  for (int i = 0; i < spikes.size(); ++i) {
    csv << i << ',' << spikes.times[i] << '\n';
  }
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    write_text(output, csv.str());
    std::cout << "spike times written to " << output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binarized single-spike network: training, evaluation, tooling"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a network");
  train_args.cmd = train;
  train->add_option("--preset", train_args.preset,
                    "mnist | fashion | fashion-deep");
  train->add_option("--train-images", train_args.train_images)->required();
  train->add_option("--train-labels", train_args.train_labels)->required();
  train->add_option("--test-images", train_args.test_images);
  train->add_option("--test-labels", train_args.test_labels);
  train->add_option("--out", train_args.out_dir, "Output directory");
  train->add_option("--hidden", train_args.hidden_text,
                    "Hidden widths, e.g. 600 or 600,600");
  train->add_option("--epochs", train_args.epochs);
  train->add_option("--eta", train_args.eta);
  train->add_option("--mu", train_args.mu);
  train->add_option("--gamma", train_args.gamma);
  train->add_option("--lambda", train_args.lambda);
  train->add_option("--t-max", train_args.t_max);
  train->add_option("--theta", train_args.theta, "Threshold for all layers");
  train->add_option("--alpha", train_args.alpha_text,
                    "Initial scaling factors, one value or per-layer list");
  train->add_option("--w-init", train_args.w_init_text,
                    "Per-layer uniform ranges lo:hi[,lo:hi,...]");
  train->add_option("--decay-fraction", train_args.decay_fraction);
  train->add_option("--decay-every", train_args.decay_every);
  train->add_option("--limit-train", train_args.limit_train,
                    "Use only the first N training samples");
  train->add_option("--limit-test", train_args.limit_test);
  train->add_option("--seed", train_args.seed);
  train->add_option("--threads", train_args.threads,
                    "Evaluation threads (training itself is sequential)");

  CommonEvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval->add_option("--model", eval_args.model_path)->required();
  eval->add_option("--images", eval_args.images_path)->required();
  eval->add_option("--labels", eval_args.labels_path)->required();
  eval->add_option("--out", eval_args.out_dir, "Report directory");
  eval->add_option("--limit", eval_args.limit);
  eval->add_option("--t-max", eval_args.t_max);
  eval->add_option("--threads", eval_args.threads);

  CommonEvalArgs noise_args;
  std::string noise_levels = "0,0.05,0.1,0.2,0.4,0.6,0.8,1.0";
  std::uint64_t noise_seed = 0;
  CLI::App* noise = app.add_subcommand("noise", "Jitter-noise robustness curve");
  noise->add_option("--model", noise_args.model_path)->required();
  noise->add_option("--images", noise_args.images_path)->required();
  noise->add_option("--labels", noise_args.labels_path)->required();
  noise->add_option("--out", noise_args.out_dir);
  noise->add_option("--limit", noise_args.limit);
  noise->add_option("--t-max", noise_args.t_max);
  noise->add_option("--threads", noise_args.threads);
  noise->add_option("--levels", noise_levels, "Noise levels, fraction of max");
  noise->add_option("--seed", noise_seed);

  CommonEvalArgs sweep_args;
  std::string sweep_range = "0:200:5";
  CLI::App* sweep = app.add_subcommand("sweep", "Threshold speed-accuracy sweep");
  sweep->add_option("--model", sweep_args.model_path)->required();
  sweep->add_option("--images", sweep_args.images_path)->required();
  sweep->add_option("--labels", sweep_args.labels_path)->required();
  sweep->add_option("--out", sweep_args.out_dir);
  sweep->add_option("--limit", sweep_args.limit);
  sweep->add_option("--t-max", sweep_args.t_max);
  sweep->add_option("--threads", sweep_args.threads);
  sweep->add_option("--theta", sweep_range, "Threshold range start:stop:step");

  std::string inspect_model, inspect_out;
  int inspect_maps = 16, map_width = 28, map_height = 28, inspect_t_max = 256;
  std::uint64_t inspect_seed = 0;
  CLI::App* inspect =
      app.add_subcommand("inspect", "Model size report and weight statistics");
  inspect->add_option("--model", inspect_model)->required();
  inspect->add_option("--out", inspect_out, "Report directory");
  inspect->add_option("--maps", inspect_maps,
                      "Number of random hidden neurons to render");
  inspect->add_option("--map-width", map_width);
  inspect->add_option("--map-height", map_height);
  inspect->add_option("--seed", inspect_seed);
  inspect->add_option("--t-max", inspect_t_max);

  std::string encode_images, encode_output;
  int encode_index = 0, encode_t_max = 256;
  double encode_jitter = 0.0;
  std::uint64_t encode_seed = 0;
  CLI::App* encode =
      app.add_subcommand("encode", "Dump one image's spike times as CSV");
  encode->add_option("--images", encode_images)->required();
  encode->add_option("--index", encode_index);
  encode->add_option("--t-max", encode_t_max);
  encode->add_option("--jitter", encode_jitter, "Optional noise level");
  encode->add_option("--seed", encode_seed);
  encode->add_option("--output", encode_output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
    if (app.got_subcommand(noise)) {
      return cmd_noise(noise_args, noise_levels, noise_seed);
    }
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_args, sweep_range);
    if (app.got_subcommand(inspect)) {
      return cmd_inspect(inspect_model, inspect_out, inspect_maps, map_width,
                         map_height, inspect_seed, inspect_t_max);
    }
    if (app.got_subcommand(encode)) {
      return cmd_encode(encode_images, encode_index, encode_t_max,
                        encode_jitter, encode_seed, encode_output);
    }
  } catch (const bs4nn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const bs4nn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const bs4nn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
