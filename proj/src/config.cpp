#include "kpp/config.hpp"

#include <cmath>
#include <set>

#include "kpp/errors.hpp"
#include "kpp/io.hpp"

namespace kpp {

namespace {

template <typename T>
void take(const nlohmann::ordered_json& j, const char* key, T& slot) {
  if (j.contains(key)) {
    try {
      slot = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  }
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
  static const std::set<std::string> known = {
      "reaction", "L",   "nx", "dt",    "seed",         "c",
      "theta",    "t_start", "t_end",   "u0",  "out_interval", "max_steps",
      "checkpoint_every", "n", "m",     "ds",  "t_after",      "suite",
      "out_dir",  "jobs"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }
  RunConfig c;
  take(j, "reaction", c.reaction);
  take(j, "L", c.grid.L);
  take(j, "nx", c.grid.nx);
  take(j, "dt", c.grid.dt);
  take(j, "seed", c.seed);
  take(j, "c", c.c);
  take(j, "theta", c.theta);
  take(j, "t_start", c.t_start);
  take(j, "t_end", c.t_end);
  take(j, "u0", c.u0);
  take(j, "out_interval", c.out_interval);
  take(j, "max_steps", c.max_steps);
  take(j, "checkpoint_every", c.checkpoint_every);
  take(j, "n", c.n);
  take(j, "m", c.m);
  take(j, "ds", c.ds);
  take(j, "t_after", c.t_after);
  take(j, "suite", c.suite);
  take(j, "out_dir", c.out_dir);
  take(j, "jobs", c.jobs);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(read_file(path));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["reaction"] = reaction;
  j["L"] = grid.L;
  j["nx"] = grid.nx;
  j["dt"] = grid.dt;
  j["seed"] = seed;
  j["c"] = c;
  j["theta"] = theta;
  j["t_start"] = t_start;
  j["t_end"] = t_end;
  j["u0"] = u0;
  j["out_interval"] = out_interval;
  j["max_steps"] = max_steps;
  j["checkpoint_every"] = checkpoint_every;
  j["n"] = n;
  j["m"] = m;
  j["ds"] = ds;
  j["t_after"] = t_after;
  j["suite"] = suite;
  j["out_dir"] = out_dir;
  j["jobs"] = jobs;
  return j;
}

void RunConfig::validate() const {
  grid.validate();
  if (!(out_interval > 0.0)) throw ConfigError("out_interval must be positive");
  if (!(ds > 0.0)) throw ConfigError("ds must be positive");
  if (!(t_after >= 0.0)) throw ConfigError("t_after must be nonnegative");
  for (double lev : m) {
    if (!(lev >= 0.05 && lev <= 0.95)) {
      throw ConfigError("level values must lie in [0.05, 0.95]");
    }
  }
  for (int k : n) {
    if (k < 1) throw ConfigError("family indices must be >= 1");
  }
  for (double sp : c) {
    if (!std::isfinite(sp) || sp <= 0.0) throw ConfigError("wave speeds must be positive");
  }
  if (jobs < 0) throw ConfigError("jobs must be nonnegative");
}

}  // namespace kpp
