#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uasguide/textio.hpp"
#include "uasguide/version.hpp"

namespace uasguide {

inline std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

// Reproducibility record written next to every run's outputs: what ran, with
// which scenario (path + content hash), which config and seed, and what files
// came out. Written atomically so a crash never leaves a torn manifest.
struct RunManifest {
  std::string command;        // "train" | "eval" | "plot"
  std::string scenario_path;  // empty for preset-only runs
  std::string scenario_source;  // "file" | "preset:<name>"
  std::string scenario_hash;    // content fingerprint
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "uasguide";
    j["tool_version"] = kVersionString;
    j["command"] = command;
    j["scenario_path"] = scenario_path;
    j["scenario_source"] = scenario_source;
    j["scenario_hash"] = scenario_hash;
    j["config"] = config;
    j["seed"] = seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outputs"] = outputs;
    return j;
  }

  void write(const std::string& path) const {
    write_text_file_atomic(path, to_json().dump(2) + "\n");
  }
};

}  // namespace uasguide
