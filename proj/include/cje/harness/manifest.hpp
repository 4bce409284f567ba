#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <string>
#include <vector>

#include "cje/harness/config.hpp"

namespace cje::harness {

inline constexpr const char* kToolVersion = "1.0.0";

/// One named check. `anchor` names the identity or law being tested so
/// manifests can be grepped by it.
struct CheckResult {
  std::string name;
  std::string anchor;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
};

inline nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["n"] = cfg.n;
  j["beta"] = cfg.beta;
  j["delta_re"] = cfg.delta_re;
  j["delta_im"] = cfg.delta_im;
  j["d_re"] = cfg.d_re;
  j["d_im"] = cfg.d_im;
  j["samples"] = cfg.samples;
  j["bins"] = cfg.bins;
  j["seed"] = cfg.seed;
  j["stream"] = cfg.stream;
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  j["ladder"] = cfg.ladder;
  j["reps"] = cfg.reps;
  j["grid"] = cfg.grid;
  j["table"] = cfg.table;
  j["suite"] = cfg.suite;
  j["seeds"] = cfg.seeds;
  j["inject_fault"] = cfg.inject_fault;
  j["threads"] = cfg.threads;
  return j;
}

/// Record of one run; serialized for every command, including failed ones.
class RunManifest {
 public:
  explicit RunManifest(const ExperimentConfig& cfg)
      : config_(cfg), start_(std::chrono::steady_clock::now()),
        started_utc_(utc_now()) {}

  void add_check(CheckResult c) { checks_.push_back(std::move(c)); }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_summary(const std::string& key, nlohmann::json value) { summary_[key] = std::move(value); }
  void set_error(const std::string& message) { error_ = message; }

  const std::vector<CheckResult>& checks() const { return checks_; }

  bool passed() const {
    if (!error_.empty()) return false;
    for (const auto& c : checks_) {
      if (!c.passed) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "cje_cli";
    j["version"] = kToolVersion;
    j["command"] = config_.command;
    j["config"] = config_json(config_);
    j["config_hash"] = config_hash(config_);
    j["seed"] = config_.seed;
    j["stream"] = config_.stream;
    j["started_utc"] = started_utc_;
    j["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_) {
      nlohmann::json cj;
      cj["name"] = c.name;
      cj["anchor"] = c.anchor;
      cj["passed"] = c.passed;
      // JSON has no inf/nan; encode them as null.
      cj["statistic"] = std::isfinite(c.statistic) ? nlohmann::json(c.statistic) : nlohmann::json();
      cj["threshold"] = std::isfinite(c.threshold) ? nlohmann::json(c.threshold) : nlohmann::json();
      if (!c.detail.empty()) cj["detail"] = c.detail;
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    if (!summary_.is_null()) j["summary"] = summary_;
    j["outputs"] = outputs_;
    if (!error_.empty()) j["error"] = error_;
    j["passed"] = passed();
    return j;
  }

 private:
  static std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  ExperimentConfig config_;
  std::chrono::steady_clock::time_point start_;
  std::string started_utc_;
  std::vector<CheckResult> checks_;
  std::vector<std::string> outputs_;
  nlohmann::json summary_;
  std::string error_;
};

}  // namespace cje::harness
