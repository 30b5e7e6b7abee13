#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "cotenqu/checkpoint.hpp"
#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

Checkpoint sample_checkpoint(std::size_t classes = 2) {
  Checkpoint cp;
  cp.config.data_dir = "/data";
  cp.config.classes = classes == 2 ? std::vector<int>{1, 5} : std::vector<int>{0, 3, 6};
  cp.config.n_out = classes == 2 ? 4 : 6;
  cp.config.bond_dim = 3;
  cp.config.seed = 77;
  cp.model = ModelState::initialize(9, 3, cp.config.circuit(), classes, 77);
  std::vector<double> lo(9, 0.0), hi(9, 255.0);
  hi[4] = 0.0;
  cp.normalizer = Normalizer(lo, hi);
  return cp;
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  for (std::size_t k : {2u, 3u}) {
    const Checkpoint cp = sample_checkpoint(k);
    const std::string text = serialize_checkpoint(cp);
    const Checkpoint back = parse_checkpoint(text);
    EXPECT_EQ(back, cp);
    EXPECT_EQ(serialize_checkpoint(back), text);
  }
}

TEST(Checkpoint, SelfDescribing) {
  const auto j = nlohmann::json::parse(serialize_checkpoint(sample_checkpoint()));
  EXPECT_EQ(j.at("format"), "cotenqu-checkpoint");
  EXPECT_EQ(j.at("version"), kCheckpointVersion);
  EXPECT_EQ(j.at("mps").at("tensors").size(), 9u);
  EXPECT_EQ(j.at("mps").at("output_site"), 4u);
  EXPECT_EQ(j.at("circuit_params").size(), 1u);
  EXPECT_EQ(j.at("circuit_params")[0].size(), 8u);
  EXPECT_EQ(j.at("rng").at("seed"), 77u);
}

TEST(Checkpoint, OutDirIsNotStored) {
  Checkpoint cp = sample_checkpoint();
  const std::string a = serialize_checkpoint(cp);
  cp.config.out_dir = "/elsewhere";
  EXPECT_EQ(serialize_checkpoint(cp), a);
}

TEST(Checkpoint, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "cotenqu_checkpoint_test.json";
  const Checkpoint cp = sample_checkpoint(3);
  save_checkpoint(path, cp);
  EXPECT_EQ(load_checkpoint(path), cp);
  std::filesystem::remove(path);
  EXPECT_THROW(load_checkpoint(path), LoadError);
}

TEST(Checkpoint, RejectsCorruption) {
  const std::string text = serialize_checkpoint(sample_checkpoint());
  EXPECT_THROW(parse_checkpoint(text.substr(0, text.size() / 2)), LoadError);
  EXPECT_THROW(parse_checkpoint("[]"), LoadError);
  EXPECT_THROW(parse_checkpoint(""), LoadError);

  auto mutated = [&](auto edit) {
    auto j = nlohmann::json::parse(text);
    edit(j);
    return j.dump();
  };
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["version"] = 2; })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["format"] = "other"; })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["mps"]["tensors"][2]["values"].erase(0); })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["mps"]["tensors"][2]["shape"][0] = 2; })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["circuit_params"][0].erase(0); })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["num_classes"] = 3; })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["normalization"]["min"].erase(0); })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j["circuit"]["layers"][0] = "warp"; })), LoadError);
  EXPECT_THROW(parse_checkpoint(mutated([](auto& j) { j.erase("mps"); })), LoadError);
}

TEST(Metrics, Format) {
  const std::vector<LossRecord> records{{1, 0.5, 0.75, 0.25}, {2, 0.1, 1.0, std::numeric_limits<double>::quiet_NaN()}};
  EXPECT_EQ(format_metrics(records),
            "# cotenqu-metrics v1\n"
            "epoch\tmean_cost\ttrain_accuracy\ttest_accuracy\n"
            "1\t0.5\t0.75\t0.25\n"
            "2\t0.10000000000000001\t1\tnan\n");
}

}  // namespace
}  // namespace cotenqu
