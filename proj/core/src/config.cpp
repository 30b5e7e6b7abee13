#include "cotenqu/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto item : split_list(text)) {
    if (item.empty()) continue;
    out.push_back(parse_number<int>("list", item));
  }
  return out;
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "data_dir") {
    c.data_dir = std::string(value);
  } else if (key == "images") {
    c.images_file = std::string(value);
  } else if (key == "labels") {
    c.labels_file = std::string(value);
  } else if (key == "classes") {
    c.classes = parse_int_list(value);
  } else if (key == "layers") {
    c.layers.clear();
    try {
      for (auto item : split_list(value)) {
        if (!item.empty()) c.layers.push_back(parse_layer_kind(item));
      }
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "n_out") {
    c.n_out = parse_number<std::size_t>(key, value);
  } else if (key == "bond_dim") {
    c.bond_dim = parse_number<std::size_t>(key, value);
  } else if (key == "output_scaling") {
    if (value == "normalized") c.output_scaling = OutputScaling::kNormalized;
    else if (value == "raw") c.output_scaling = OutputScaling::kRaw;
    else throw ConfigError("output_scaling must be 'normalized' or 'raw'");
  } else if (key == "learning_rate") {
    c.learning_rate = parse_number<double>(key, value);
  } else if (key == "tn_learning_rate") {
    if (value.empty() || value == "same") c.tn_learning_rate.reset();
    else c.tn_learning_rate = parse_number<double>(key, value);
  } else if (key == "epochs") {
    c.epochs = parse_number<std::size_t>(key, value);
  } else if (key == "shift_mode") {
    if (value == "fixed") c.shift_mode = ShiftMode::kFixedHalfPi;
    else if (value == "decay") c.shift_mode = ShiftMode::kEpochDecay;
    else throw ConfigError("shift_mode must be 'fixed' or 'decay'");
  } else if (key == "multiclass_update") {
    if (value == "all") c.multiclass_update = MulticlassUpdate::kAllCircuits;
    else if (value == "label") c.multiclass_update = MulticlassUpdate::kLabelCircuit;
    else throw ConfigError("multiclass_update must be 'all' or 'label'");
  } else if (key == "mode") {
    if (value == "exact") c.readout = ReadoutMode::kExact;
    else if (value == "shots") c.readout = ReadoutMode::kShots;
    else throw ConfigError("mode must be 'exact' or 'shots'");
  } else if (key == "shots") {
    c.shots = parse_number<std::uint64_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "test_fraction") {
    c.test_fraction = parse_number<double>(key, value);
  } else if (key == "train_cap") {
    c.train_cap = parse_number<std::size_t>(key, value);
  } else if (key == "test_cap") {
    c.test_cap = parse_number<std::size_t>(key, value);
  } else if (key == "out_dir") {
    c.out_dir = std::string(value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig base;
  if (const char* env = std::getenv(kDataDirEnv); env && *env) base.data_dir = env;
  return parse_config(ss.str(), base);
}

void RunConfig::validate() const {
  if (data_dir.empty()) {
    throw ConfigError(std::string("no dataset directory: set data_dir or ") + kDataDirEnv);
  }
  if (classes.size() < 2) throw ConfigError("need at least two classes");
  if (std::set<int>(classes.begin(), classes.end()).size() != classes.size()) {
    throw ConfigError("classes must be distinct");
  }
  for (int c : classes) {
    if (c < 0 || c > 9) throw ConfigError("class " + std::to_string(c) + " outside 0-9");
  }
  if (layers.empty()) throw ConfigError("layer list is empty");
  if (n_out == 0 || n_out % 2 != 0) throw ConfigError("n_out must be even and positive");
  if (2 * (n_out / 2) + 1 > kMaxQubits) throw ConfigError("n_out needs too many qubits");
  if (bond_dim == 0) throw ConfigError("bond_dim must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (tn_learning_rate && (!(*tn_learning_rate > 0.0) || !std::isfinite(*tn_learning_rate))) {
    throw ConfigError("tn_learning_rate must be positive");
  }
  if (readout == ReadoutMode::kShots && shots == 0) throw ConfigError("shots must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie strictly between 0 and 1");
  }
}

CircuitSpec RunConfig::circuit() const { return CircuitSpec{n_out / 2, layers}; }

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.learning_rate = learning_rate;
  t.tn_learning_rate = tn_learning_rate;
  t.epochs = epochs;
  t.shift_mode = shift_mode;
  t.multiclass_update = multiclass_update;
  t.seed = seed;
  if (readout == ReadoutMode::kShots) t.readout = ShotReadout{shots, seed};
  return t;
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  auto join_ints = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string layers;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    layers += (i ? "," : "") + std::string(to_string(c.layers[i]));
  }
  out << "data_dir = " << c.data_dir.string() << '\n'
      << "images = " << c.images_file << '\n'
      << "labels = " << c.labels_file << '\n'
      << "classes = " << join_ints(c.classes) << '\n'
      << "layers = " << layers << '\n'
      << "n_out = " << c.n_out << '\n'
      << "bond_dim = " << c.bond_dim << '\n'
      << "output_scaling = " << to_string(c.output_scaling) << '\n'
      << "learning_rate = " << format_double(c.learning_rate) << '\n'
      << "tn_learning_rate = "
      << (c.tn_learning_rate ? format_double(*c.tn_learning_rate) : std::string("same")) << '\n'
      << "epochs = " << c.epochs << '\n'
      << "shift_mode = " << to_string(c.shift_mode) << '\n'
      << "multiclass_update = " << to_string(c.multiclass_update) << '\n'
      << "mode = " << (c.readout == ReadoutMode::kExact ? "exact" : "shots") << '\n'
      << "shots = " << c.shots << '\n'
      << "seed = " << c.seed << '\n'
      << "test_fraction = " << format_double(c.test_fraction) << '\n'
      << "train_cap = " << c.train_cap << '\n'
      << "test_cap = " << c.test_cap << '\n'
      << "out_dir = " << c.out_dir.string() << '\n';
  return out.str();
}

}  // namespace cotenqu
