#pragma once

// Experiment configuration: flat key=value files merged with command-line
// overrides, validated before any computation starts.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cje/types.hpp"

namespace cje::harness {

/// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  int n = 8;
  double beta = 2.0;
  double delta_re = 0.0;
  double delta_im = 0.0;
  double d_re = 1.0;
  double d_im = 0.0;
  int samples = 1000;
  int bins = 40;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string out;
  std::string format = "csv";
  std::vector<int> ladder{25, 50, 100, 200};
  int reps = 50;
  int grid = 1024;
  std::string table = "density";
  std::string suite = "all";
  int seeds = 1;
  std::string inject_fault = "none";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  cplx delta() const { return {delta_re, delta_im}; }
  cplx d() const { return {d_re, d_im}; }
  EnsembleParams params() const { return {n, beta, delta()}; }
};

/// Keys accepted in config files; command-line flags use the same names with
/// '-' in place of '_'.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "n",   "beta", "delta_re", "delta_im", "d_re",  "d_im",  "samples", "bins",
      "seed", "stream", "out",   "format",   "ladder", "reps", "grid",    "table",
      "suite", "seeds", "inject_fault", "threads"};
  return keys;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, const std::string& where) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const std::from_chars_result r = std::from_chars(first, last, out);
  if (r.ec != std::errc{} || r.ptr != last || value.empty()) {
    throw ConfigError(where + "key '" + key + "': cannot parse '" + value + "' as " +
                      (std::is_floating_point_v<T> ? "a number" : "an integer"));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError(where + "key '" + key + "': value must be finite");
  }
  return out;
}

inline std::vector<int> parse_ladder(const std::string& value, const std::string& where) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>("ladder", trim(item), where));
  if (out.empty()) throw ConfigError(where + "key 'ladder': empty list");
  return out;
}

}  // namespace detail

/// Set one key from its string value. `where` prefixes diagnostics.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                          const std::string& where = "") {
  using detail::parse_number;
  if (key == "n") cfg.n = parse_number<int>(key, value, where);
  else if (key == "beta") cfg.beta = parse_number<double>(key, value, where);
  else if (key == "delta_re") cfg.delta_re = parse_number<double>(key, value, where);
  else if (key == "delta_im") cfg.delta_im = parse_number<double>(key, value, where);
  else if (key == "d_re") cfg.d_re = parse_number<double>(key, value, where);
  else if (key == "d_im") cfg.d_im = parse_number<double>(key, value, where);
  else if (key == "samples") cfg.samples = parse_number<int>(key, value, where);
  else if (key == "bins") cfg.bins = parse_number<int>(key, value, where);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value, where);
  else if (key == "stream") cfg.stream = parse_number<std::uint64_t>(key, value, where);
  else if (key == "out") cfg.out = value;
  else if (key == "format") cfg.format = value;
  else if (key == "ladder") cfg.ladder = detail::parse_ladder(value, where);
  else if (key == "reps") cfg.reps = parse_number<int>(key, value, where);
  else if (key == "grid") cfg.grid = parse_number<int>(key, value, where);
  else if (key == "table") cfg.table = value;
  else if (key == "suite") cfg.suite = value;
  else if (key == "seeds") cfg.seeds = parse_number<int>(key, value, where);
  else if (key == "inject_fault") cfg.inject_fault = value;
  else if (key == "threads") cfg.threads = parse_number<int>(key, value, where);
  else throw ConfigError(where + "unknown key '" + key + "'");
}

/// Parse key=value lines; '#' starts a comment. Unknown or repeated keys and
/// malformed lines are rejected with the offending line number.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text,
                              const std::string& source = "config") {
  std::stringstream in(text);
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(where + "key '" + key + "' already set on line " + std::to_string(it->second));
    }
    seen[key] = lineno;
    apply_setting(cfg, key, value, where);
  }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

/// Check every precondition of the selected command.
inline void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& msg) {
    throw ConfigError("key '" + key + "': " + msg);
  };
  if (cfg.n < 1) fail("n", "must be >= 1");
  if (!(cfg.beta > 0.0)) fail("beta", "must be > 0");
  if (cfg.command == "sample" || cfg.command == "dump-matrix") {
    if (cfg.delta_re < 0.0) fail("delta_re", "sampling requires Re(delta) >= 0");
  } else if (!(cfg.delta_re > -0.5)) {
    fail("delta_re", "must be > -1/2");
  }
  if (cfg.d_re < 0.0) fail("d_re", "must be >= 0");
  if (cfg.samples < 1) fail("samples", "must be >= 1");
  if (cfg.bins < 2) fail("bins", "must be >= 2");
  if (cfg.format != "csv" && cfg.format != "json") fail("format", "must be csv or json");
  for (const int n : cfg.ladder) {
    if (n < 1) fail("ladder", "entries must be >= 1");
  }
  if (cfg.reps < 1) fail("reps", "must be >= 1");
  if (cfg.grid < 2) fail("grid", "must be >= 2");
  if (cfg.table != "density" && cfg.table != "mft") fail("table", "must be density or mft");
  if (cfg.suite != "all" && cfg.suite != "deterministic" && cfg.suite != "statistical") {
    fail("suite", "must be all, deterministic or statistical");
  }
  if (cfg.seeds < 1) fail("seeds", "must be >= 1");
  if (cfg.inject_fault != "none" && cfg.inject_fault != "ggt-sign") {
    fail("inject_fault", "must be none or ggt-sign");
  }
  if (cfg.threads < 1) fail("threads", "must be >= 1");
}

/// Canonical key=value listing of everything that can affect results (not the
/// output path or the thread count).
inline std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  std::string ladder;
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    ladder += (i ? "," : "") + std::to_string(cfg.ladder[i]);
  }
  os << "command=" << cfg.command << "\nn=" << cfg.n << "\nbeta=" << cfg.beta
     << "\ndelta_re=" << cfg.delta_re << "\ndelta_im=" << cfg.delta_im << "\nd_re=" << cfg.d_re
     << "\nd_im=" << cfg.d_im << "\nsamples=" << cfg.samples << "\nbins=" << cfg.bins
     << "\nseed=" << cfg.seed << "\nstream=" << cfg.stream << "\nformat=" << cfg.format
     << "\nladder=" << ladder << "\nreps=" << cfg.reps << "\ngrid=" << cfg.grid
     << "\ntable=" << cfg.table << "\nsuite=" << cfg.suite << "\nseeds=" << cfg.seeds
     << "\ninject_fault=" << cfg.inject_fault << "\n";
  return os.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(canonical_config(cfg));
  return os.str();
}

}  // namespace cje::harness
