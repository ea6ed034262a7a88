#include "common.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <sbflow/rng.hpp>
#include <sbflow/version.hpp>

namespace sbflow_tools {

namespace {

[[noreturn]] void bad_config(const std::string& path, const std::string& what) {
  throw std::runtime_error("config file " + path + ": " + what);
}

}  // namespace

sbflow::MixtureSpec benchmark_mixture() {
  sbflow::MixtureSpec spec;
  spec.components.push_back({0.5, {-2.0}, 1.0});
  spec.components.push_back({0.5, {2.0}, 1.0});
  return spec;
}

RawOptions load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config(path, "cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    bad_config(path, e.what());
  }
  if (!j.is_object()) bad_config(path, "top level must be an object");

  RawOptions opts;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "out") {
        opts.out = value.get<std::string>();
      } else if (key == "seed") {
        opts.seed = value.get<std::uint64_t>();
      } else if (key == "epsilon") {
        opts.epsilon = value.get<double>();
      } else if (key == "horizon") {
        opts.horizon = value.get<double>();
      } else if (key == "n") {
        opts.n = value.get<int>();
      } else if (key == "trials") {
        opts.trials = value.get<int>();
      } else if (key == "var") {
        opts.var = value.get<double>();
      } else if (key == "functional") {
        opts.functional = value.get<std::string>();
      } else if (key == "mode") {
        opts.mode = value.get<std::string>();
      } else if (key == "epsilons") {
        opts.epsilons = value.get<std::vector<double>>();
      } else if (key == "one_step") {
        opts.one_step = value.get<bool>();
      } else {
        bad_config(path, "unknown key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      bad_config(path, "key \"" + key + "\": " + e.what());
    }
  }
  return opts;
}

RawOptions merge_options(const RawOptions& cli, const RawOptions& file) {
  RawOptions out;
  out.out = cli.out ? cli.out : file.out;
  out.seed = cli.seed ? cli.seed : file.seed;
  out.epsilon = cli.epsilon ? cli.epsilon : file.epsilon;
  out.horizon = cli.horizon ? cli.horizon : file.horizon;
  out.n = cli.n ? cli.n : file.n;
  out.trials = cli.trials ? cli.trials : file.trials;
  out.var = cli.var ? cli.var : file.var;
  out.functional = cli.functional ? cli.functional : file.functional;
  out.mode = cli.mode ? cli.mode : file.mode;
  out.epsilons = cli.epsilons ? cli.epsilons : file.epsilons;
  out.one_step = cli.one_step || file.one_step;
  out.perturb = cli.perturb;
  return out;
}

nlohmann::json run_metadata(const std::string& command, const nlohmann::json& config) {
  return nlohmann::json{
      {"command", command},
      {"config", config},
      {"generator", sbflow::Rng::kGeneratorId},
      {"library_version", sbflow::version()},
      {"git", sbflow::git_describe()},
  };
}

void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sbflow_tools
