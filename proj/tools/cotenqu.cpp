// cotenqu: train, evaluate and inspect MPS + swap-test classifiers.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cotenqu/commands.hpp"
#include "cotenqu/config.hpp"
#include "cotenqu/error.hpp"

namespace {

cotenqu::SplitChoice parse_split(const std::string& s) {
  if (s == "train") return cotenqu::SplitChoice::kTrain;
  if (s == "all") return cotenqu::SplitChoice::kAll;
  return cotenqu::SplitChoice::kTest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-network feature extraction + swap-test quantum classifier"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train a model and write checkpoint + metrics");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::string classes;
  std::string out_dir;
  std::string train_data;
  std::vector<std::string> overrides;
  train->add_option("--config", config_path, "key = value config file")->required();
  train->add_option("--seed", seed, "RNG seed");
  train->add_option("--epochs", epochs, "Number of epochs");
  train->add_option("--classes", classes, "Comma-separated digit labels, e.g. 1,5");
  train->add_option("--out", out_dir, "Output directory");
  train->add_option("--data", train_data, "Dataset directory");
  train->add_option("--set", overrides, "Extra key=value overrides (repeatable)");

  // eval
  auto* eval = app.add_subcommand("eval", "Accuracy and confusion matrix of a checkpoint");
  std::string checkpoint;
  std::string data_dir;
  std::string split = "test";
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--data", data_dir, "Dataset directory (default: from checkpoint)");
  eval->add_option("--split", split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));

  // predict
  auto* predict = app.add_subcommand("predict", "Classify one image");
  std::size_t index = 0;
  predict->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  predict->add_option("--index", index, "Image index within the split")->required();
  predict->add_option("--data", data_dir, "Dataset directory (default: from checkpoint)");
  predict->add_option("--split", split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Summarize a checkpoint");
  inspect->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cotenqu::kExitConfigError;
  }

  const std::optional<std::filesystem::path> data_override =
      data_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_dir);

  if (train->parsed()) {
    cotenqu::RunConfig config;
    try {
      config = cotenqu::load_config(config_path);
      if (seed) config.seed = *seed;
      if (epochs) config.epochs = *epochs;
      if (!classes.empty()) config.classes = cotenqu::parse_int_list(classes);
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (!train_data.empty()) config.data_dir = train_data;
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw cotenqu::ConfigError("--set expects key=value");
        cotenqu::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      config.validate();
    } catch (const cotenqu::Error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return cotenqu::kExitConfigError;
    }
    return cotenqu::cmd_train(config, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    return cotenqu::cmd_eval(checkpoint, data_override, parse_split(split), std::cout, std::cerr);
  }
  if (predict->parsed()) {
    return cotenqu::cmd_predict(checkpoint, index, data_override, parse_split(split), std::cout,
                                std::cerr);
  }
  return cotenqu::cmd_inspect(checkpoint, std::cout, std::cerr);
}
