#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpp/halfline_pde.hpp"
#include "kpp/phaseplane.hpp"

namespace kpp {

/// Shortest decimal string that round-trips a double exactly.
std::string fmt17(double v);

/// FNV-1a 64-bit hash of a byte string, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

/// Write `bytes` to `path`, creating parent directories. Binary mode, so the
/// bytes on disk are exactly the bytes hashed into the manifest.
void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// ---- CSV renderers. All numeric cells use fmt17 so rereads are lossless. ----

std::string csv_profile(const WaveProfile& w, double a_c);
std::string csv_stationary(const StationaryProfile& s);
std::string csv_snapshot(const Grid& g, const Field& f);
std::string csv_diagnostics(const StepSeries& s);
std::string csv_columns(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& columns);

// ---- Simulation checkpoints: the exact on-step state plus enough context ----
// ---- to continue the march with bit-identical arithmetic.                ----

struct Checkpoint {
  long step = 0;        // absolute step index since the original start
  double t_base = 0.0;  // time of step 0; time at step k is t_base + k*dt
  Grid grid;
  std::vector<double> u;
  std::string config_echo;  // serialized RunConfig of the original invocation
};

std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& bytes);

// ---- Run manifest: config echo plus a checksum of every artifact. ----------

class Manifest {
 public:
  explicit Manifest(nlohmann::ordered_json config_echo);
  ~Manifest();

  /// Record (and write) an artifact under the run directory.
  void put(const std::filesystem::path& run_dir, const std::string& rel_name,
           const std::string& bytes);
  /// Serialize: {"config": ..., "outputs": {name: checksum, ...}} sorted by name.
  std::string to_json() const;
  /// Write manifest.json itself into the run directory.
  void write(const std::filesystem::path& run_dir) const;

  /// Carry forward the output records of an existing manifest.json (used when
  /// continuing a run: artifacts from the earlier segment stay recorded even
  /// though this segment does not rewrite them). Later put() calls override.
  void absorb_outputs(const std::filesystem::path& run_dir);

  /// Verify every recorded output in an existing manifest.json against the
  /// files on disk; returns the names that are missing or mismatched.
  static std::vector<std::string> verify(const std::filesystem::path& run_dir);
  static nlohmann::ordered_json load_config(const std::filesystem::path& run_dir);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kpp
