#pragma once

#include <cstdint>
#include <string>

namespace fcair::cli {

/// Flat key = value configuration file with '#' comments.  Command-line
/// flags override anything set here.  lsc_max_iters 0 means "10x document
/// count"; every other numeric field must be positive.
struct Config {
  std::string corpus;
  std::string queries;
  std::string qrels;
  std::string index;
  std::string output_dir;
  uint32_t k = 4;
  uint32_t depth = 1000;
  std::string rules = "238,254,238,252";
  uint32_t cells = 8;
  uint32_t max_steps = 64;
  uint64_t lsc_max_iters = 0;
  uint64_t seed = 1;
  uint32_t threads = 1;

  static Config load(const std::string& path);
  void save(const std::string& path) const;

  bool operator==(const Config&) const = default;
};

}  // namespace fcair::cli
