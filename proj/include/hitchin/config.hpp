#pragma once

// Experiment configuration: strict JSON in, validated plain struct out.
// Unknown keys are rejected everywhere; every range check here mirrors an
// invariant of the module that will eventually consume the value, so a config
// that validates cannot fail construction later for a reason the user could
// have seen up front.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitchin/errors.hpp"
#include "hitchin/fuchsian.hpp"
#include "hitchin/grafting.hpp"
#include "hitchin/lie.hpp"
#include "hitchin/util.hpp"

namespace hitchin {

struct GraftSpec {
  bool kernel = true;             // direction must lie in ker(alpha0)
  std::vector<double> direction;  // Cartan entries; empty = canonical default
};

struct OutputPaths {
  std::string census;  // census CSV (".gz" for gzip); empty = not written
  std::string table;   // experiment table; empty or "-" = standard output
};

struct ExperimentConfig {
  int d = 3;
  TorusParams p1{4.0, 4.0, 4.0};
  TorusParams p2{4.0, 4.0, 4.0};
  double twist = 0.35;
  GraftSpec graft;
  std::vector<double> ray_grid{0, 1, 2, 3, 4, 5, 6};
  int max_word_len = 8;
  int pants_word_len = 13;
  std::uint64_t seed = 7;
  std::vector<std::array<double, 3>> pants{{{4, 4, 4}}, {{4, 4, 8}}, {{4, 4, 12}}};
  OutputPaths out;
};

namespace config_detail {

inline void require_keys(const nlohmann::json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ConfigError(std::string("config: unknown key '") + item.key() + "' in " + where);
  }
}

inline double number_field(const nlohmann::json& v, const char* name) {
  if (!v.is_number()) throw ConfigError(std::string("config: ") + name + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("config: ") + name + " must be finite");
  return x;
}

inline int int_field(const nlohmann::json& v, const char* name, int lo, int hi) {
  if (!v.is_number_integer()) throw ConfigError(std::string("config: ") + name + " must be an integer");
  std::int64_t x = v.get<std::int64_t>();
  if (x < lo || x > hi)
    throw ConfigError(std::string("config: ") + name + " must be in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return static_cast<int>(x);
}

inline TorusParams torus_field(const nlohmann::json& v, const char* name) {
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(std::string("config: ") + name + " must be an array of three trace coordinates");
  TorusParams p{number_field(v[0], name), number_field(v[1], name), number_field(v[2], name)};
  return p;
}

}  // namespace config_detail

// Resolves the grafting direction: explicit entries if given, otherwise the
// canonical ker(alpha0) direction (1, -2/(d-2), ..., -2/(d-2), 1) or, for
// non-kernel grafts, the shearing direction (pure twisting).
inline CartanVec graft_direction(const ExperimentConfig& cfg) {
  if (!cfg.graft.direction.empty()) return cartan_vec(cfg.graft.direction);
  if (!cfg.graft.kernel) return shearing_direction(cfg.d);
  if (cfg.d < 3) throw ConfigError("config: graft: ker(alpha0) is trivial at d = 2; give an explicit direction");
  std::vector<double> v(static_cast<std::size_t>(cfg.d), -2.0 / (cfg.d - 2));
  v.front() = v.back() = 1.0;
  return cartan_vec(v);
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.d < 2 || cfg.d > 12) throw ConfigError("config: d must be in [2, 12]");
  auto check_torus = [](const TorusParams& p, const char* name) {
    if (std::abs(p.x) <= 2.0 || std::abs(p.y) <= 2.0)
      throw ConfigError(std::string("config: ") + name + ": generator traces must exceed 2 in absolute value");
    if (p.boundary_trace() >= -2.0)
      throw ConfigError(std::string("config: ") + name + ": boundary trace must be < -2 (hyperbolic boundary)");
  };
  check_torus(cfg.p1, "p1");
  check_torus(cfg.p2, "p2");
  if (std::abs(cfg.p1.boundary_trace() - cfg.p2.boundary_trace()) > 1e-9)
    throw ConfigError("config: p1 and p2 must give the same separating-curve length (equal boundary traces)");
  if (!std::isfinite(cfg.twist)) throw ConfigError("config: twist must be finite");

  if (cfg.ray_grid.empty()) throw ConfigError("config: ray_grid must be nonempty");
  for (std::size_t i = 0; i < cfg.ray_grid.size(); ++i) {
    double t = cfg.ray_grid[i];
    if (!std::isfinite(t) || t < 0) throw ConfigError("config: ray_grid entries must be finite and >= 0");
    if (i > 0 && !(t > cfg.ray_grid[i - 1])) throw ConfigError("config: ray_grid must be strictly increasing");
  }

  if (!cfg.graft.direction.empty()) {
    if (static_cast<int>(cfg.graft.direction.size()) != cfg.d)
      throw ConfigError("config: graft.direction must have d entries");
    double sum = 0, scale = 0;
    for (double x : cfg.graft.direction) {
      if (!std::isfinite(x)) throw ConfigError("config: graft.direction entries must be finite");
      sum += x;
      scale = std::max(scale, std::abs(x));
    }
    if (scale == 0) throw ConfigError("config: graft.direction must be nonzero");
    if (std::abs(sum) > 1e-9 * scale) throw ConfigError("config: graft.direction must sum to zero");
    if (cfg.graft.kernel) {
      Alpha0 a = calibrate_alpha0(cfg.d);
      if (std::abs(alpha0_value(cartan_vec(cfg.graft.direction), a)) > 1e-9 * scale)
        throw ConfigError("config: graft.direction is not in ker(alpha0); clear the kernel flag or adjust it");
    }
  } else if (cfg.graft.kernel && cfg.d < 3) {
    throw ConfigError("config: graft: ker(alpha0) is trivial at d = 2; give an explicit direction");
  }

  if (cfg.pants.empty()) throw ConfigError("config: pants must be nonempty");
  for (const auto& t : cfg.pants)
    for (double l : t)
      if (!std::isfinite(l) || l <= 0) throw ConfigError("config: pants boundary lengths must be positive");
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["d"] = cfg.d;
  j["p1"] = {cfg.p1.x, cfg.p1.y, cfg.p1.z};
  j["p2"] = {cfg.p2.x, cfg.p2.y, cfg.p2.z};
  j["twist"] = cfg.twist;
  j["graft"] = {{"kernel", cfg.graft.kernel}, {"direction", cfg.graft.direction}};
  j["ray_grid"] = cfg.ray_grid;
  j["max_word_len"] = cfg.max_word_len;
  j["pants_word_len"] = cfg.pants_word_len;
  j["seed"] = cfg.seed;
  j["pants"] = cfg.pants;
  j["out"] = {{"census", cfg.out.census}, {"table", cfg.out.table}};
  return j;
}

// Hash of the fully normalized config (defaults materialized, keys sorted by
// the serializer), so flag overrides change the hash exactly when they change
// an effective value.
inline std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = fnv1a64(config_to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;  // e.byte is a 1-based offset into text
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ": parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": top level must be a JSON object");

  using namespace config_detail;
  require_keys(j, "the top level",
               {"d", "p1", "p2", "twist", "graft", "ray_grid", "max_word_len", "pants_word_len", "seed",
                "pants", "out"});
  ExperimentConfig cfg;
  if (j.contains("d")) cfg.d = int_field(j["d"], "d", 2, 12);
  if (j.contains("p1")) cfg.p1 = torus_field(j["p1"], "p1");
  if (j.contains("p2")) cfg.p2 = torus_field(j["p2"], "p2");
  if (j.contains("twist")) cfg.twist = number_field(j["twist"], "twist");
  if (j.contains("graft")) {
    const auto& g = j["graft"];
    if (!g.is_object()) throw ConfigError("config: graft must be an object");
    require_keys(g, "graft", {"kernel", "direction"});
    if (g.contains("kernel")) {
      if (!g["kernel"].is_boolean()) throw ConfigError("config: graft.kernel must be a boolean");
      cfg.graft.kernel = g["kernel"].get<bool>();
    }
    if (g.contains("direction")) {
      if (!g["direction"].is_array()) throw ConfigError("config: graft.direction must be an array");
      cfg.graft.direction.clear();
      for (const auto& x : g["direction"]) cfg.graft.direction.push_back(number_field(x, "graft.direction"));
    }
  }
  if (j.contains("ray_grid")) {
    if (!j["ray_grid"].is_array()) throw ConfigError("config: ray_grid must be an array");
    cfg.ray_grid.clear();
    for (const auto& x : j["ray_grid"]) cfg.ray_grid.push_back(number_field(x, "ray_grid"));
  }
  if (j.contains("max_word_len")) cfg.max_word_len = int_field(j["max_word_len"], "max_word_len", 1, 16);
  if (j.contains("pants_word_len")) cfg.pants_word_len = int_field(j["pants_word_len"], "pants_word_len", 1, 16);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw ConfigError("config: seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("pants")) {
    if (!j["pants"].is_array()) throw ConfigError("config: pants must be an array of [a, b, c] triples");
    cfg.pants.clear();
    for (const auto& t : j["pants"]) {
      if (!t.is_array() || t.size() != 3)
        throw ConfigError("config: pants entries must be [a, b, c] triples");
      cfg.pants.push_back({number_field(t[0], "pants"), number_field(t[1], "pants"), number_field(t[2], "pants")});
    }
  }
  if (j.contains("out")) {
    const auto& o = j["out"];
    if (!o.is_object()) throw ConfigError("config: out must be an object");
    require_keys(o, "out", {"census", "table"});
    if (o.contains("census")) {
      if (!o["census"].is_string()) throw ConfigError("config: out.census must be a string");
      cfg.out.census = o["census"].get<std::string>();
    }
    if (o.contains("table")) {
      if (!o["table"].is_string()) throw ConfigError("config: out.table must be a string");
      cfg.out.table = o["table"].get<std::string>();
    }
  }

  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace hitchin
