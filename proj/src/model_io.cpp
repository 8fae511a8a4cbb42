#include "rankfield/model_io.hpp"

#include <cmath>
#include <json.hpp>

#include "rankfield/errors.hpp"
#include "rankfield/io.hpp"

namespace rankfield {

namespace {

using nlohmann::ordered_json;

ordered_json grid_json(const Grid& g) {
  return {{"lower", g.lower}, {"upper", g.upper}, {"resolution", g.resolution}};
}

std::filesystem::path mean_path(const std::filesystem::path& json_path) {
  auto p = json_path;
  p.replace_filename(json_path.stem().string() + "_mean.csv");
  return p;
}

}  // namespace

void write_csr_model(const std::filesystem::path& json_path, const CSRModel& model) {
  const auto mean_file = mean_path(json_path);
  ordered_json j;
  j["kind"] = "csr-model";
  j["dim"] = model.dim;
  j["grid"] = grid_json(model.grid());
  j["phi"] = model.phi.to_string();
  j["p_level"] = model.p_level;
  j["cutoff"] = model.cutoff;
  j["n_mean"] = model.n_mean;
  j["n_null"] = model.null_distances.size();
  j["n_points"] = model.n_points;
  j["seed"] = model.seed;
  j["mean_file"] = mean_file.filename().string();
  j["null_distances"] = model.null_distances;
  write_grid_function(mean_file, model.mean, model.phi, "csr-mean");
  write_file_atomic(json_path, j.dump(2) + "\n");
}

CSRModel read_csr_model(const std::filesystem::path& json_path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(json_path));
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(json_path.string(), 0, e.what());
  }
  CSRModel m;
  try {
    if (j.at("kind") != "csr-model") {
      throw ParseError(json_path.string(), 0, "not a CSR model file");
    }
    m.dim = j.at("dim").get<int>();
    m.phi = WeightFunction::parse(j.at("phi").get<std::string>());
    m.p_level = j.at("p_level").get<double>();
    m.cutoff = j.at("cutoff").get<double>();
    m.n_mean = j.at("n_mean").get<std::size_t>();
    m.n_points = j.at("n_points").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.null_distances = j.at("null_distances").get<std::vector<double>>();
    const auto& g = j.at("grid");
    const Grid grid(g.at("lower").get<double>(), g.at("upper").get<double>(),
                    g.at("resolution").get<int>());
    auto file = json_path;
    file.replace_filename(j.at("mean_file").get<std::string>());
    m.mean = read_grid_function(file);
    if (!(m.mean.grid == grid) || m.mean.dim != m.dim) {
      throw ParseError(file.string(), 0, "mean rank function does not match the model header");
    }
  } catch (const ordered_json::exception& e) {
    throw ParseError(json_path.string(), 0, e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(json_path.string(), 0, e.what());
  }
  for (double d : m.null_distances) {
    if (!std::isfinite(d) || d < 0) {
      throw ParseError(json_path.string(), 0, "null distances must be finite and >= 0");
    }
  }
  return m;
}

void write_pca_model(const std::filesystem::path& dir, const PCAModel& model,
                     std::span<const std::string> ids) {
  if (ids.size() != model.scores.rows) {
    throw InvalidArgument("need one id per fitted function");
  }
  std::filesystem::create_directories(dir);
  ordered_json j;
  j["kind"] = "pca-model";
  j["dim"] = model.mean.dim;
  j["grid"] = grid_json(model.mean.grid);
  j["phi"] = model.phi.to_string();
  j["functions"] = model.scores.rows;
  j["total_variance"] = model.total_variance;
  j["eigenvalues"] = model.eigenvalues;
  j["explained_variance_ratio"] = model.explained_variance_ratio;
  j["cumulative_explained_variance"] = model.cumulative_explained_variance();
  j["mean_file"] = "mean.csv";
  std::vector<std::string> files;
  write_grid_function(dir / "mean.csv", model.mean, model.phi, "pca-mean");
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    files.push_back("component_" + std::to_string(c + 1) + ".csv");
    write_grid_function(dir / files.back(), model.components[c], model.phi, "pca-component");
  }
  j["component_files"] = files;
  j["scores_file"] = "scores.csv";

  std::string scores = "pattern";
  for (std::size_t c = 0; c < model.components.size(); ++c) scores += ",s" + std::to_string(c + 1);
  scores += "\n";
  for (std::size_t i = 0; i < model.scores.rows; ++i) {
    scores += ids[i];
    for (std::size_t c = 0; c < model.scores.cols; ++c) {
      scores += "," + format_double(model.scores(i, c));
    }
    scores += "\n";
  }
  write_file_atomic(dir / "scores.csv", scores);
  write_file_atomic(dir / "model.json", j.dump(2) + "\n");
}

}  // namespace rankfield
