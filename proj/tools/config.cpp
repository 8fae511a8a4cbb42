#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rankfield/errors.hpp"
#include "rankfield/io.hpp"

namespace rankfield::cli {
namespace {

using VT = ValueType;

const KeySpec kJobs{"jobs", VT::Int, "worker threads, 0 for all cores"};
const KeySpec kSeed{"seed", VT::Uint, "base random seed"};
const KeySpec kGrid{"grid", VT::String, "rank-function grid as a0,a1,M"};
const KeySpec kPhi{"phi", VT::String, "weight: indicator, indicator:<width> or exp:<rate>"};
const KeySpec kDim{"dim", VT::Dims, "homology dimension(s), e.g. 1 or 0,1"};
const KeySpec kInputs{"inputs", VT::Strings, "input files"};
const KeySpec kNMean{"n_mean", VT::Uint, "CSR patterns for the mean rank function"};
const KeySpec kNNull{"n_null", VT::Uint, "CSR patterns for the null distances"};
const KeySpec kNPoints{"n_points", VT::Uint, "points per CSR pattern"};
const KeySpec kPLevel{"p_level", VT::Number, "test level"};

KeySpec out_key(const std::string& help) { return {"out", VT::String, help}; }

std::string where(const std::string& key) { return "config key '" + key + "'"; }

std::vector<int> parse_dims(const Json& v, const std::string& key) {
  std::vector<int> dims;
  const auto add = [&](long long k) {
    if (k < 0 || k > 2) throw ConfigError(where(key) + ": homology dimension must be 0, 1 or 2");
    if (std::find(dims.begin(), dims.end(), k) != dims.end()) {
      throw ConfigError(where(key) + ": repeated dimension " + std::to_string(k));
    }
    dims.push_back(static_cast<int>(k));
  };
  if (v.is_number_integer()) {
    add(v.get<long long>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw ConfigError(where(key) + ": expected integers");
      add(e.get<long long>());
    }
  } else if (v.is_string()) {
    for (const auto& part : split(v.get<std::string>(), ',')) {
      try {
        add(parse_int(part));
      } catch (const InvalidArgument&) {
        throw ConfigError(where(key) + ": cannot parse '" + v.get<std::string>() + "'");
      }
    }
  } else {
    throw ConfigError(where(key) + ": expected an integer, a list or \"0,1\"");
  }
  return dims;
}

Window parse_window(const Json& v) {
  if (!v.is_array() || (v.size() != 4 && v.size() != 6)) {
    throw ConfigError(where("process.window") + ": expected 4 or 6 bounds");
  }
  Window w;
  for (std::size_t i = 0; i < v.size(); i += 2) {
    if (!v[i].is_number() || !v[i + 1].is_number()) {
      throw ConfigError(where("process.window") + ": bounds must be numbers");
    }
    w.lower.push_back(v[i].get<double>());
    w.upper.push_back(v[i + 1].get<double>());
  }
  return w;
}

void check_type(const KeySpec& spec, const Json& v, const std::string& name) {
  bool ok = false;
  switch (spec.type) {
    case VT::String: ok = v.is_string(); break;
    case VT::Uint: ok = v.is_number_unsigned(); break;
    case VT::Int: ok = v.is_number_integer(); break;
    case VT::Number: ok = v.is_number(); break;
    case VT::Strings:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); });
      break;
    case VT::Dims: parse_dims(v, name); ok = true; break;
    case VT::Window: parse_window(v); ok = true; break;
    case VT::Process: ok = v.is_object(); break;
    case VT::Processes:
      ok = v.is_array() && !v.empty() &&
           std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_object(); });
      break;
  }
  if (!ok) throw ConfigError(where(name) + ": wrong type");
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& key) {
  for (const auto& k : keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate", "persist", "rank",
                                                 "mean",     "pca",     "csr-fit",
                                                 "csr-test", "power",   "subsample"};
  return names;
}

const std::vector<KeySpec>& command_keys(const std::string& command) {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"simulate",
       {{"process", VT::Process, "point process"},
        {"count", VT::Uint, "number of patterns"},
        kSeed,
        out_key("output directory"),
        kJobs}},
      {"persist", {kInputs, out_key("output directory"), kJobs}},
      {"rank", {kInputs, kGrid, kPhi, kDim, out_key("output directory")}},
      {"mean", {kInputs, out_key("output rank-function file")}},
      {"pca",
       {kInputs, {"components", VT::Uint, "number of components"}, kPhi,
        out_key("output directory"), kJobs}},
      {"csr-fit",
       {kNMean, kNNull, kNPoints, kGrid, kPhi, kPLevel, kDim, kSeed, out_key("output directory"),
        kJobs}},
      {"csr-test",
       {{"model", VT::String, "CSR model file"}, kInputs, out_key("output CSV file")}},
      {"power",
       {{"processes", VT::Processes, "alternative point processes"},
        {"n_test", VT::Uint, "test patterns per process"}, kNMean, kNNull, kNPoints, kGrid, kPhi,
        kPLevel, kDim, kSeed, out_key("output directory"), kJobs}},
      {"subsample",
       {{"input", VT::String, "large point file"},
        {"cube", VT::Number, "cube edge in input units"},
        {"count", VT::Uint, "number of cubes"},
        {"mean_radius", VT::Number, "coordinates are divided by this"},
        out_key("output directory")}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

const std::vector<KeySpec>& process_keys() {
  static const std::vector<KeySpec> keys = {
      {"kind", VT::String, "binomial|poisson|strauss|matern|baddeley-silverman"},
      {"n", VT::Uint, "condition on exactly n points"},
      {"intensity", VT::Number, "poisson intensity"},
      {"radius", VT::Number, "strauss interaction radius"},
      {"gamma", VT::Number, "strauss interaction strength"},
      {"kappa", VT::Number, "matern parent intensity"},
      {"offspring", VT::Number, "matern mean offspring count"},
      {"cluster_radius", VT::Number, "matern cluster radius"},
      {"window", VT::Window, "observation window as x0,x1,y0,y1[,z0,z1]"},
      {"max_attempts", VT::Uint, "cap on conditioning redraws"},
  };
  return keys;
}

Json parse_flag_value(const KeySpec& spec, const std::string& text) {
  std::string flag = "--" + spec.key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  switch (spec.type) {
    case VT::Uint: {
      std::uint64_t v = 0;
      const auto t = trim(text);
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(flag + ": expected a non-negative integer, got '" + text + "'");
      }
      return v;
    }
    case VT::Int:
      try {
        return parse_int(text);
      } catch (const InvalidArgument&) {
        throw ConfigError(flag + ": expected an integer, got '" + text + "'");
      }
    case VT::Number:
      try {
        return parse_double(text);
      } catch (const InvalidArgument&) {
        throw ConfigError(flag + ": expected a number, got '" + text + "'");
      }
    case VT::Window: {
      Json arr = Json::array();
      for (const auto& part : split(text, ',')) {
        try {
          arr.push_back(parse_double(part));
        } catch (const InvalidArgument&) {
          throw ConfigError(flag + ": expected comma-separated numbers");
        }
      }
      return arr;
    }
    default:
      return text;
  }
}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config file");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path.string() + ": config must be a JSON object");
  return j;
}

ProcessSpec process_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError(where("process") + ": expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(where("process.kind") + ": required string");
  }
  using Kind = ProcessSpec::Kind;
  ProcessSpec s;
  try {
    s.kind = ProcessSpec::parse_kind(j["kind"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where("process.kind") + ": " + e.what());
  }
  std::vector<std::string> allowed = {"kind", "n"};
  switch (s.kind) {
    case Kind::Binomial: allowed.insert(allowed.end(), {"window"}); break;
    case Kind::Poisson: allowed.insert(allowed.end(), {"intensity", "window", "max_attempts"}); break;
    case Kind::Strauss: allowed.insert(allowed.end(), {"radius", "gamma", "window"}); break;
    case Kind::Matern:
      allowed.insert(allowed.end(), {"kappa", "offspring", "cluster_radius", "max_attempts"});
      break;
    case Kind::BaddeleySilverman: allowed.insert(allowed.end(), {"max_attempts"}); break;
  }
  for (const auto& [key, value] : j.items()) {
    const auto* spec = find_key(process_keys(), key);
    if (!spec) throw ConfigError("unknown " + where("process." + key));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where("process." + key) + ": does not apply to " +
                        ProcessSpec::kind_name(s.kind));
    }
    check_type(*spec, value, "process." + key);
  }
  if (j.contains("n")) s.condition_n = j["n"].get<std::size_t>();
  if ((s.kind == Kind::Binomial || s.kind == Kind::Strauss) && !s.condition_n) {
    throw ConfigError(where("process.n") + ": required for " + ProcessSpec::kind_name(s.kind));
  }
  s.intensity = j.value("intensity", s.intensity);
  s.interaction_radius = j.value("radius", s.interaction_radius);
  s.gamma = j.value("gamma", s.gamma);
  s.parent_intensity = j.value("kappa", s.parent_intensity);
  s.offspring_mean = j.value("offspring", s.offspring_mean);
  s.cluster_radius = j.value("cluster_radius", s.cluster_radius);
  s.max_attempts = j.value("max_attempts", s.max_attempts);
  if (j.contains("window")) s.window = parse_window(j["window"]);
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(where("process") + ": " + e.what());
  }
  return s;
}

Settings::Settings(std::string command, const Json& file, const Json& flags)
    : command_(std::move(command)), values_(Json::object()) {
  const auto& keys = command_keys(command_);
  if (!file.is_null()) {
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != command_) {
          throw ConfigError("config is for command " + value.dump() + ", not '" + command_ + "'");
        }
        continue;
      }
      values_[key] = value;
    }
  }
  for (const auto& [key, value] : flags.items()) {
    if (key == "process" && values_.contains("process") && values_["process"].is_object()) {
      for (const auto& [k, v] : value.items()) values_["process"][k] = v;
    } else {
      values_[key] = value;
    }
  }
  for (const auto& [key, value] : values_.items()) {
    const auto* spec = find_key(keys, key);
    if (!spec) throw ConfigError("unknown " + where(key) + " for command '" + command_ + "'");
    check_type(*spec, value, key);
  }
  // Semantic checks up front, so no work starts on a bad config.
  if (has("grid")) grid_or({});
  phi();
  if (has("process")) process();
  if (has("processes")) processes_or({});
  if (has("jobs") && jobs() < 0) throw ConfigError(where("jobs") + ": must be >= 0");
}

Json Settings::to_json() const {
  Json j;
  j["command"] = command_;
  for (const auto& [key, value] : values_.items()) j[key] = value;
  return j;
}

std::string Settings::string(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required " + where(key));
  return values_[key].get<std::string>();
}

std::string Settings::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? values_[key].get<std::string>() : fallback;
}

std::uint64_t Settings::uint_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? values_[key].get<std::uint64_t>() : fallback;
}

int Settings::int_or(const std::string& key, int fallback) const {
  return has(key) ? values_[key].get<int>() : fallback;
}

double Settings::number_or(const std::string& key, double fallback) const {
  return has(key) ? values_[key].get<double>() : fallback;
}

std::vector<std::string> Settings::strings(const std::string& key) const {
  if (!has(key) || values_[key].empty()) throw ConfigError("missing required " + where(key));
  return values_[key].get<std::vector<std::string>>();
}

std::vector<int> Settings::dims_or(const std::string& key, std::vector<int> fallback) const {
  return has(key) ? parse_dims(values_[key], key) : fallback;
}

Grid Settings::grid_or(const Grid& fallback) const {
  if (!has("grid")) return fallback;
  try {
    return Grid::parse(values_["grid"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where("grid") + ": " + e.what());
  }
}

std::optional<WeightFunction> Settings::phi() const {
  if (!has("phi")) return std::nullopt;
  try {
    return WeightFunction::parse(values_["phi"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where("phi") + ": " + e.what());
  }
}

int Settings::jobs() const { return int_or("jobs", 1); }

ProcessSpec Settings::process() const {
  if (!has("process")) throw ConfigError("missing required " + where("process"));
  return process_from_json(values_["process"]);
}

std::vector<ProcessSpec> Settings::processes_or(std::vector<ProcessSpec> fallback) const {
  if (!has("processes")) return fallback;
  std::vector<ProcessSpec> out;
  for (const auto& p : values_["processes"]) out.push_back(process_from_json(p));
  return out;
}

}  // namespace rankfield::cli
