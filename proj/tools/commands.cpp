#include "commands.hpp"

#include <omp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "rankfield/batch.hpp"
#include "rankfield/csr.hpp"
#include "rankfield/errors.hpp"
#include "rankfield/fpca.hpp"
#include "rankfield/io.hpp"
#include "rankfield/model_io.hpp"

namespace rankfield::cli {
namespace {

namespace fs = std::filesystem;

std::string padded(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

/// "pattern_0003.diagram.csv" and "pattern_0003.rank1.csv" both map to
/// "pattern_0003".
std::string base_name(const fs::path& path) {
  static const std::regex suffix(R"((\.diagram|\.rank[0-9]+)?(\.csv)?$)");
  return std::regex_replace(path.filename().string(), suffix, "");
}

fs::path output_dir(const Settings& s) {
  const fs::path dir = s.string("out");
  fs::create_directories(dir);
  return dir;
}

void write_run_record(const fs::path& dir, const Settings& s) {
  write_file_atomic(dir / "run.json", s.to_json().dump(2) + "\n");
}

Json path_list(const std::vector<fs::path>& paths) {
  Json out = Json::array();
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

/// Library errors raised while handling one input gain its name; parse
/// errors already carry file and line.
template <class F>
auto for_input(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

/// Evaluates f(0..n-1) on `jobs` threads, rethrowing the lowest-index failure.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F&& f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      slots[i].emplace(f(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

void require_distinct(const std::vector<fs::path>& outputs) {
  std::set<fs::path> seen;
  for (const auto& p : outputs) {
    if (!seen.insert(p).second) {
      throw InvalidArgument("two inputs map to the same output " + p.string());
    }
  }
}

CsrFitConfig fit_config(const Settings& s) {
  CsrFitConfig c;
  c.n_mean = s.uint_or("n_mean", c.n_mean);
  c.n_null = s.uint_or("n_null", c.n_null);
  c.n_points = s.uint_or("n_points", c.n_points);
  c.grid = s.grid_or(c.grid);
  c.phi = s.phi().value_or(c.phi);
  c.p_level = s.number_or("p_level", c.p_level);
  c.seed = s.uint_or("seed", c.seed);
  c.jobs = s.jobs();
  return c;
}

std::vector<fs::path> write_models(const fs::path& dir, const std::vector<CSRModel>& models) {
  std::vector<fs::path> out;
  for (const auto& m : models) {
    out.push_back(dir / ("csr_dim" + std::to_string(m.dim) + ".json"));
    write_csr_model(out.back(), m);
  }
  return out;
}

Json simulate(const Settings& s) {
  const auto spec = s.process();
  const auto count = s.uint_or("count", 1);
  const auto seed = s.uint_or("seed", 0);
  const auto dir = output_dir(s);
  const auto patterns = parallel_map<PointPattern>(count, s.jobs(), [&](std::size_t i) {
    try {
      return generate(spec, seed + i);
    } catch (const Error& e) {
      throw Error("pattern " + std::to_string(i) + " (seed " + std::to_string(seed + i) +
                  "): " + e.what());
    }
  });
  const std::string process_line = "# process " + s.to_json()["process"].dump() + "\n";
  std::vector<fs::path> outputs;
  std::size_t points = 0;
  for (std::size_t i = 0; i < count; ++i) {
    outputs.push_back(dir / ("pattern_" + padded(i) + ".csv"));
    write_file_atomic(outputs.back(), "# rankfield pattern\n" + process_line + "# seed " +
                                          std::to_string(seed + i) + "\n" +
                                          format_points(patterns[i]));
    points += patterns[i].size();
  }
  write_run_record(dir, s);
  spdlog::info("simulated {} {} patterns into {}", count, spec.label(), dir.string());
  return {{"patterns", count}, {"points", points}, {"outputs", path_list(outputs)}};
}

Json persist(const Settings& s) {
  const auto inputs = s.strings("inputs");
  const auto dir = output_dir(s);
  std::vector<fs::path> outputs;
  for (const auto& in : inputs) outputs.push_back(dir / (base_name(in) + ".diagram.csv"));
  require_distinct(outputs);
  const auto diagrams = parallel_map<PersistenceDiagram>(inputs.size(), s.jobs(), [&](std::size_t i) {
    return for_input(inputs[i], [&] { return pattern_diagram(read_points(inputs[i])); });
  });
  std::size_t points = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    write_file_atomic(outputs[i], "# source " + fs::path(inputs[i]).filename().string() + "\n" +
                                      format_diagram(diagrams[i]));
    points += diagrams[i].points.size();
    spdlog::debug("{}: {} diagram points", inputs[i], diagrams[i].points.size());
  }
  return {{"inputs", inputs.size()}, {"diagram_points", points}, {"outputs", path_list(outputs)}};
}

Json rank(const Settings& s) {
  const auto inputs = s.strings("inputs");
  const auto grid = s.grid_or(Grid{});
  const auto phi = s.phi().value_or(WeightFunction::indicator());
  const auto dims = s.dims_or("dim", {0, 1});
  const auto dir = output_dir(s);
  std::vector<fs::path> outputs;
  for (const auto& in : inputs) {
    for (int k : dims) {
      outputs.push_back(dir / (base_name(in) + ".rank" + std::to_string(k) + ".csv"));
    }
  }
  require_distinct(outputs);
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto diagram = read_diagram(inputs[i]);
    for (std::size_t d = 0; d < dims.size(); ++d) {
      const auto f = rank_from_diagram(diagram, dims[d], grid);
      const auto& csv = outputs[i * dims.size() + d];
      auto matrix = csv;
      matrix.replace_extension(".matrix");
      write_grid_function(csv, f, phi);
      write_file_atomic(matrix, format_matrix(f));
      written.push_back(csv);
      written.push_back(matrix);
    }
  }
  return {{"inputs", inputs.size()},
          {"grid", grid.to_string()},
          {"phi", phi.to_string()},
          {"dims", dims},
          {"outputs", path_list(written)}};
}

struct LoadedFunctions {
  std::vector<RankFunction> functions;
  WeightFunction phi;
};

LoadedFunctions load_functions(const std::vector<std::string>& inputs) {
  LoadedFunctions out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    WeightFunction phi;
    out.functions.push_back(read_grid_function(inputs[i], &phi));
    if (i == 0) {
      out.phi = phi;
      continue;
    }
    const auto& first = out.functions.front();
    if (out.functions.back().grid != first.grid || out.functions.back().dim != first.dim) {
      throw GridMismatch(inputs[i] + ": grid or homology dimension differs from " + inputs[0]);
    }
    if (!(phi == out.phi)) {
      throw InvalidArgument(inputs[i] + ": weight differs from " + inputs[0]);
    }
  }
  return out;
}

Json mean_command(const Settings& s) {
  const auto inputs = s.strings("inputs");
  const fs::path out = s.string("out");
  const auto loaded = load_functions(inputs);
  const auto m = mean(loaded.functions);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  auto matrix = out;
  matrix.replace_extension(".matrix");
  write_grid_function(out, m, loaded.phi, "mean-rank-function");
  write_file_atomic(matrix, format_matrix(m));
  return {{"inputs", inputs.size()}, {"outputs", path_list({out, matrix})}};
}

Json pca(const Settings& s) {
  const auto inputs = s.strings("inputs");
  const auto loaded = load_functions(inputs);
  const auto phi = s.phi().value_or(loaded.phi);
  const std::size_t n = loaded.functions.size();
  const auto requested = s.uint_or("components", std::min<std::size_t>(5, n > 1 ? n - 1 : 1));
  const auto model = fit_pca(loaded.functions, phi, requested, s.jobs());
  std::vector<std::string> ids;
  for (const auto& in : inputs) ids.push_back(base_name(in));
  const auto dir = output_dir(s);
  write_pca_model(dir, model, ids);
  write_run_record(dir, s);
  std::vector<fs::path> outputs = {dir / "model.json", dir / "mean.csv", dir / "scores.csv"};
  for (std::size_t c = 0; c < model.component_count(); ++c) {
    outputs.push_back(dir / ("component_" + std::to_string(c + 1) + ".csv"));
  }
  return {{"functions", n},
          {"components", model.component_count()},
          {"explained_variance_ratio", model.explained_variance_ratio},
          {"outputs", path_list(outputs)}};
}

Json csr_fit(const Settings& s) {
  const auto config = fit_config(s);
  const auto dims = s.dims_or("dim", {0, 1});
  const auto models = fit_csr_models(config, dims);
  const auto dir = output_dir(s);
  const auto outputs = write_models(dir, models);
  write_run_record(dir, s);
  Json cutoffs = Json::object();
  for (const auto& m : models) cutoffs["dim" + std::to_string(m.dim)] = m.cutoff;
  return {{"cutoffs", cutoffs}, {"outputs", path_list(outputs)}};
}

/// Tests a point, diagram or rank-function file, recognised by its header.
TestResult test_file(const CSRModel& model, const fs::path& path) {
  const auto text = read_file(path);
  if (text.find("# grid ") != std::string::npos) {
    return test_rank_function(model, parse_grid_function(text, path.string()));
  }
  if (text.find("dim,birth,death") != std::string::npos) {
    const auto diagram = parse_diagram(text, path.string());
    return test_rank_function(model, rank_from_diagram(diagram, model.dim, model.grid()));
  }
  return test_pattern(model, parse_points(text, path.string()));
}

Json csr_test(const Settings& s) {
  const auto model = read_csr_model(s.string("model"));
  const auto inputs = s.strings("inputs");
  const fs::path out = s.string("out");
  std::string csv = "file,dim,distance_squared,cutoff,reject\n";
  std::size_t rejected = 0;
  for (const auto& in : inputs) {
    const auto r = for_input(in, [&] { return test_file(model, in); });
    rejected += r.reject;
    csv += in + "," + std::to_string(model.dim) + "," + format_double(r.distance_squared) + "," +
           format_double(model.cutoff) + "," + (r.reject ? "1" : "0") + "\n";
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_file_atomic(out, csv);
  return {{"dim", model.dim},
          {"tested", inputs.size()},
          {"rejected", rejected},
          {"outputs", path_list({out})}};
}

std::vector<ProcessSpec> default_alternatives() {
  return {ProcessSpec::binomial(100), ProcessSpec::strauss(0.05, 0.5, 100),
          ProcessSpec::matern(10, 10, 0.02, 100), ProcessSpec::baddeley_silverman(100)};
}

Json power(const Settings& s) {
  const auto config = fit_config(s);
  const auto dims = s.dims_or("dim", {0, 1});
  const auto specs = s.processes_or(default_alternatives());
  const auto n_test = s.uint_or("n_test", 100);
  const auto models = fit_csr_models(config, dims);
  spdlog::info("fitted {} models, testing {} patterns per process", models.size(), n_test);
  const auto table = power_study(specs, n_test, models, config.seed, config.jobs);
  const auto dir = output_dir(s);
  auto outputs = write_models(dir, models);
  outputs.push_back(dir / "table.csv");
  write_file_atomic(outputs.back(), table.to_csv());
  outputs.push_back(dir / "table.txt");
  write_file_atomic(outputs.back(), table.to_text());
  write_run_record(dir, s);
  return {{"n_test", n_test},
          {"columns", table.columns},
          {"rejections", table.rejections},
          {"outputs", path_list(outputs)}};
}

Json subsample(const Settings& s) {
  const fs::path input = s.string("input");
  if (!s.has("cube") || !s.has("count")) throw ConfigError("subsample needs cube and count");
  const double edge = s.number_or("cube", 0);
  const double radius = s.number_or("mean_radius", 1.0);
  const auto count = s.uint_or("count", 0);
  if (!(edge > 0) || !std::isfinite(edge)) throw ConfigError("config key 'cube': must be > 0");
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw ConfigError("config key 'mean_radius': must be > 0");
  }
  const auto pattern = read_points(input);
  const auto& w = pattern.window();
  const int d = pattern.dim();
  std::vector<std::size_t> tiles(d);
  std::size_t available = 1;
  for (int a = 0; a < d; ++a) {
    tiles[a] = static_cast<std::size_t>(std::floor((w.upper[a] - w.lower[a]) / edge + 1e-9));
    available *= tiles[a];
  }
  if (count > available) {
    throw InvalidArgument(input.string() + ": only " + std::to_string(available) +
                          " disjoint cubes of edge " + format_double(edge) + " fit the window");
  }
  const auto dir = output_dir(s);
  std::vector<fs::path> outputs;
  std::vector<std::size_t> sizes;
  for (std::size_t c = 0; c < count; ++c) {
    // Cube c in lexicographic order, first axis fastest.
    std::vector<double> lo(d), hi(d);
    std::vector<bool> last(d);
    for (std::size_t a = 0, rest = c; a < static_cast<std::size_t>(d); ++a) {
      const auto idx = rest % tiles[a];
      rest /= tiles[a];
      lo[a] = w.lower[a] + idx * edge;
      hi[a] = lo[a] + edge;
      last[a] = idx + 1 == tiles[a];
    }
    std::vector<double> coords;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const auto p = pattern.point(i);
      bool inside = true;
      for (int a = 0; a < d && inside; ++a) {
        inside = p[a] >= lo[a] && (p[a] < hi[a] || (last[a] && p[a] == hi[a]));
      }
      if (!inside) continue;
      for (int a = 0; a < d; ++a) coords.push_back((p[a] - lo[a]) / radius);
    }
    Window cube;
    cube.lower.assign(d, 0.0);
    cube.upper.assign(d, edge / radius);
    const PointPattern sub(d, std::move(coords), cube);
    std::string origin;
    for (double v : lo) origin += " " + format_double(v);
    outputs.push_back(dir / ("cube_" + padded(c) + ".csv"));
    write_file_atomic(outputs.back(), "# rankfield subsample\n# source " +
                                          input.filename().string() + "\n# origin" + origin +
                                          "\n# edge " + format_double(edge) + "\n# mean_radius " +
                                          format_double(radius) + "\n" + format_points(sub));
    sizes.push_back(sub.size());
  }
  write_run_record(dir, s);
  return {{"cubes", count}, {"points", sizes}, {"outputs", path_list(outputs)}};
}

}  // namespace

std::string command_description(const std::string& command) {
  static const std::map<std::string, std::string> text = {
      {"simulate", "Draw seeded point patterns from a point process"},
      {"persist", "Alpha-filtration persistence diagrams of point files"},
      {"rank", "Rank functions of diagrams on a grid, plus gnuplot matrices"},
      {"mean", "Pointwise mean of rank-function files"},
      {"pca", "Functional PCA of rank-function files"},
      {"csr-fit", "Fit the Monte-Carlo CSR test"},
      {"csr-test", "Apply a fitted CSR model to point, diagram or rank files"},
      {"power", "Power study of the CSR test against alternative processes"},
      {"subsample", "Cut disjoint cubes out of a large point file"},
  };
  return text.at(command);
}

Json run_command(const Settings& s) {
  const auto& c = s.command();
  if (c == "simulate") return simulate(s);
  if (c == "persist") return persist(s);
  if (c == "rank") return rank(s);
  if (c == "mean") return mean_command(s);
  if (c == "pca") return pca(s);
  if (c == "csr-fit") return csr_fit(s);
  if (c == "csr-test") return csr_test(s);
  if (c == "power") return power(s);
  if (c == "subsample") return subsample(s);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace rankfield::cli
