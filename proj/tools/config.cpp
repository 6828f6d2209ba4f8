#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fcair::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

uint64_t parse_u64(const std::string& value, const std::string& key,
                   std::size_t line_no) {
  try {
    std::size_t pos = 0;
    unsigned long long parsed = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return parsed;
  } catch (const std::exception&) {
    throw std::runtime_error("config line " + std::to_string(line_no) + ": key '" +
                             key + "' needs an unsigned integer, got '" + value + "'");
  }
}

void check_positive(uint64_t value, const char* key) {
  if (value == 0) {
    throw std::runtime_error(std::string("config key '") + key +
                             "' must be positive");
  }
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  Config config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key == "corpus") {
      config.corpus = value;
    } else if (key == "queries") {
      config.queries = value;
    } else if (key == "qrels") {
      config.qrels = value;
    } else if (key == "index") {
      config.index = value;
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "rules") {
      config.rules = value;
    } else if (key == "k") {
      config.k = static_cast<uint32_t>(parse_u64(value, key, line_no));
      check_positive(config.k, "k");
    } else if (key == "depth") {
      config.depth = static_cast<uint32_t>(parse_u64(value, key, line_no));
      check_positive(config.depth, "depth");
    } else if (key == "cells") {
      config.cells = static_cast<uint32_t>(parse_u64(value, key, line_no));
      check_positive(config.cells, "cells");
    } else if (key == "max_steps") {
      config.max_steps = static_cast<uint32_t>(parse_u64(value, key, line_no));
      check_positive(config.max_steps, "max_steps");
    } else if (key == "lsc_max_iters") {
      config.lsc_max_iters = parse_u64(value, key, line_no);
    } else if (key == "seed") {
      config.seed = parse_u64(value, key, line_no);
    } else if (key == "threads") {
      config.threads = static_cast<uint32_t>(parse_u64(value, key, line_no));
      check_positive(config.threads, "threads");
    } else {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
  }
  return config;
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write config file '" + path + "'");
  }
  out << "# fcair configuration\n";
  out << "corpus = " << corpus << '\n';
  out << "queries = " << queries << '\n';
  out << "qrels = " << qrels << '\n';
  out << "index = " << index << '\n';
  out << "output_dir = " << output_dir << '\n';
  out << "k = " << k << '\n';
  out << "depth = " << depth << '\n';
  out << "rules = " << rules << '\n';
  out << "cells = " << cells << '\n';
  out << "max_steps = " << max_steps << '\n';
  out << "lsc_max_iters = " << lsc_max_iters << '\n';
  out << "seed = " << seed << '\n';
  out << "threads = " << threads << '\n';
  if (!out) {
    throw std::runtime_error("failed writing config file '" + path + "'");
  }
}

}  // namespace fcair::cli
