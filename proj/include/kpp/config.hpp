#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpp/halfline_pde.hpp"

namespace kpp {

/// One run's worth of parameters, shared by every subcommand. A config file
/// supplies defaults; command-line flags override individual fields. The
/// echoed form (to_json) is what manifests and checkpoints store, so a run is
/// reproducible from its artifacts alone.
struct RunConfig {
  std::string reaction = "logistic";
  Grid grid;           // L, nx, dt
  std::uint64_t seed = 12345;

  // Front / phase-plane parameters.
  std::vector<double> c;   // wave speeds (empty = subcommand default)
  double theta = 0.0;      // front shift of the wave-anchored construction
  double t_start = -20.0;  // start time of the wave-anchored construction
  double t_end = 40.0;     // final integration time

  // Simulation parameters.
  std::string u0 = "const:0.01";  // "const:<v>", "arch:<n>", or "file:<csv>"
  double out_interval = 1.0;      // snapshot cadence of `simulate`
  long max_steps = -1;            // stop early after this many steps (<0 = run to t_end)
  long checkpoint_every = 0;      // extra checkpoint cadence in steps (0 = end only)

  // Family / level-set parameters.
  std::vector<int> n = {8, 16, 32, 64};  // family members
  std::vector<double> m = {0.5};      // level values, each inside [0.05, 0.95]
  double ds = 0.25;                   // snapshot cadence of family runs
  double t_after = 6.0;               // keep this much time past detection

  // Verification parameters.
  std::string suite = "all";

  std::string out_dir = "out";
  int jobs = 0;  // sweep worker count (0 = KPP_HALFLINE_JOBS or hardware)

  /// Throws ConfigError on unknown keys or ill-typed values.
  static RunConfig from_json(const nlohmann::ordered_json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  /// Throws ConfigError unless grid/levels/cadences are usable.
  void validate() const;
};

}  // namespace kpp
