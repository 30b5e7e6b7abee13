#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cotenqu/config.hpp"
#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

TEST(ParseConfig, Defaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.classes, (std::vector<int>{1, 5}));
  EXPECT_EQ(c.n_out, 4u);
  EXPECT_EQ(c.bond_dim, 4u);
  EXPECT_EQ(c.epochs, 40u);
  EXPECT_DOUBLE_EQ(c.learning_rate, 1e-4);
  EXPECT_EQ(c.readout, ReadoutMode::kExact);
  EXPECT_EQ(c.circuit(), (CircuitSpec{2, {LayerKind::kSingle, LayerKind::kDual, LayerKind::kEntangle}}));
}

TEST(ParseConfig, KeysCommentsAndWhitespace) {
  const RunConfig c = parse_config(
      "# three-class run\n"
      "data_dir = /data/mnist\n"
      "classes = 0, 3,6\n"
      "  layers = single,E   # trailing comment\n"
      "n_out=6\n"
      "\n"
      "learning_rate = 0.003\n"
      "tn_learning_rate = 0.01\n"
      "shift_mode = decay\n"
      "multiclass_update = label\n"
      "mode = shots\n"
      "shots = 1024\n"
      "seed = 12\n"
      "test_fraction = 0.25\n"
      "train_cap = 0\n"
      "output_scaling = raw\n");
  EXPECT_EQ(c.data_dir, "/data/mnist");
  EXPECT_EQ(c.classes, (std::vector<int>{0, 3, 6}));
  EXPECT_EQ(c.layers, (std::vector<LayerKind>{LayerKind::kSingle, LayerKind::kEntangle}));
  EXPECT_EQ(c.circuit().register_qubits, 3u);
  EXPECT_DOUBLE_EQ(*c.tn_learning_rate, 0.01);
  EXPECT_EQ(c.shift_mode, ShiftMode::kEpochDecay);
  EXPECT_EQ(c.multiclass_update, MulticlassUpdate::kLabelCircuit);
  EXPECT_EQ(c.output_scaling, OutputScaling::kRaw);
  EXPECT_EQ(c.train_cap, 0u);
  const TrainConfig t = c.train_config();
  ASSERT_TRUE(std::holds_alternative<ShotReadout>(t.readout));
  EXPECT_EQ(std::get<ShotReadout>(t.readout).shots, 1024u);
  EXPECT_EQ(t.seed, 12u);
  EXPECT_NO_THROW(c.validate());
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_config("epochs 4\n"), ConfigError);
  EXPECT_THROW(parse_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_config("epochs = four\n"), ConfigError);
  EXPECT_THROW(parse_config("epochs = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("layers = single,triple\n"), ConfigError);
  EXPECT_THROW(parse_config("mode = noisy\n"), ConfigError);
}

TEST(RunConfig, Validate) {
  RunConfig c;
  EXPECT_THROW(c.validate(), ConfigError);  // no data dir
  c.data_dir = "/tmp";
  EXPECT_NO_THROW(c.validate());
  auto bad = [&](auto mutate) {
    RunConfig b = c;
    mutate(b);
    EXPECT_THROW(b.validate(), ConfigError);
  };
  bad([](RunConfig& b) { b.n_out = 5; });
  bad([](RunConfig& b) { b.classes = {1}; });
  bad([](RunConfig& b) { b.classes = {1, 1}; });
  bad([](RunConfig& b) { b.classes = {1, 12}; });
  bad([](RunConfig& b) { b.layers.clear(); });
  bad([](RunConfig& b) { b.learning_rate = 0.0; });
  bad([](RunConfig& b) { b.bond_dim = 0; });
  bad([](RunConfig& b) { b.test_fraction = 1.0; });
  bad([](RunConfig& b) { b.n_out = 40; });
}

TEST(FormatConfig, RoundTrip) {
  RunConfig c;
  c.data_dir = "/some/where";
  c.classes = {0, 1, 3, 6, 9};
  c.n_out = 6;
  c.learning_rate = 0.1 + 0.2;
  c.tn_learning_rate = 1.0 / 3.0;
  c.test_fraction = 0.3;
  c.seed = 18446744073709551615ULL;
  c.readout = ReadoutMode::kShots;
  EXPECT_EQ(parse_config(format_config(c)), c);
  const RunConfig d;
  EXPECT_EQ(parse_config(format_config(d)), d);
}

TEST(LoadConfig, EnvironmentSuppliesDataDir) {
  const auto path = std::filesystem::temp_directory_path() / "cotenqu_config_test.conf";
  std::ofstream(path) << "epochs = 3\n";
  ::setenv(kDataDirEnv, "/env/data", 1);
  EXPECT_EQ(load_config(path).data_dir, "/env/data");
  std::ofstream(path) << "data_dir = /file/data\n";
  EXPECT_EQ(load_config(path).data_dir, "/file/data");
  ::unsetenv(kDataDirEnv);
  std::ofstream(path) << "epochs = 3\n";
  EXPECT_TRUE(load_config(path).data_dir.empty());
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(ParseIntList, Values) {
  EXPECT_EQ(parse_int_list("1,5"), (std::vector<int>{1, 5}));
  EXPECT_EQ(parse_int_list(" 0 , 3,6 "), (std::vector<int>{0, 3, 6}));
  EXPECT_THROW(parse_int_list("1,x"), ConfigError);
}

}  // namespace
}  // namespace cotenqu
