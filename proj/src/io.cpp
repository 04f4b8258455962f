#include "kpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kpp/errors.hpp"

namespace kpp {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_profile(const WaveProfile& w, double a_c) {
  std::ostringstream out;
  out << "# c=" << fmt17(w.c) << " lam_c=" << fmt17(w.lam_c) << " A_c=" << fmt17(a_c) << "\n";
  out << "z,phi\n";
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    out << fmt17(w.z[i]) << ',' << fmt17(w.phi[i]) << "\n";
  }
  return out.str();
}

std::string csv_stationary(const StationaryProfile& s) {
  std::ostringstream out;
  out << "x,V\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out << fmt17(s.x[i]) << ',' << fmt17(s.V[i]) << "\n";
  }
  return out.str();
}

std::string csv_snapshot(const Grid& g, const Field& f) {
  std::ostringstream out;
  out << "# t=" << fmt17(f.t) << "\n";
  out << "x,u\n";
  const double dx = g.dx();
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    out << fmt17(dx * static_cast<double>(i)) << ',' << fmt17(f.u[i]) << "\n";
  }
  return out.str();
}

std::string csv_diagnostics(const StepSeries& s) {
  std::ostringstream out;
  out << "t,beta,kappa\n";
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    out << fmt17(s.t[i]) << ',' << fmt17(s.beta[i]) << ',' << fmt17(s.kappa[i]) << "\n";
  }
  return out.str();
}

std::string csv_columns(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size() || columns.empty()) {
    throw std::invalid_argument("csv_columns: header/column mismatch");
  }
  const std::size_t rows = columns.front().size();
  for (const auto& col : columns) {
    if (col.size() != rows) throw std::invalid_argument("csv_columns: ragged columns");
  }
  std::ostringstream out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    out << (j ? "," : "") << header[j];
  }
  out << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out << (j ? "," : "") << fmt17(columns[j][i]);
    }
    out << "\n";
  }
  return out.str();
}

std::string checkpoint_to_json(const Checkpoint& cp) {
  nlohmann::ordered_json j;
  j["step"] = cp.step;
  j["t_base"] = fmt17(cp.t_base);
  j["grid"] = {{"L", fmt17(cp.grid.L)}, {"nx", cp.grid.nx}, {"dt", fmt17(cp.grid.dt)}};
  nlohmann::ordered_json uu = nlohmann::ordered_json::array();
  for (double v : cp.u) uu.push_back(fmt17(v));
  j["u"] = std::move(uu);
  if (!cp.config_echo.empty()) {
    j["config"] = nlohmann::ordered_json::parse(cp.config_echo);
  }
  return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& bytes) {
  const auto j = nlohmann::ordered_json::parse(bytes);
  Checkpoint cp;
  cp.step = j.at("step").get<long>();
  cp.t_base = std::stod(j.at("t_base").get<std::string>());
  cp.grid.L = std::stod(j.at("grid").at("L").get<std::string>());
  cp.grid.nx = j.at("grid").at("nx").get<int>();
  cp.grid.dt = std::stod(j.at("grid").at("dt").get<std::string>());
  cp.u.reserve(j.at("u").size());
  for (const auto& v : j.at("u")) cp.u.push_back(std::stod(v.get<std::string>()));
  if (j.contains("config")) cp.config_echo = j.at("config").dump();
  return cp;
}

struct Manifest::Impl {
  nlohmann::ordered_json config;
  std::map<std::string, std::string> checksums;  // sorted by artifact name
};

Manifest::Manifest(nlohmann::ordered_json config_echo) : impl_(new Impl) {
  impl_->config = std::move(config_echo);
}

Manifest::~Manifest() = default;

void Manifest::put(const std::filesystem::path& run_dir, const std::string& rel_name,
                   const std::string& bytes) {
  write_file(run_dir / rel_name, bytes);
  impl_->checksums[rel_name] = fnv1a64_hex(bytes);
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = impl_->config;
  nlohmann::ordered_json outs = nlohmann::ordered_json::object();
  for (const auto& [name, sum] : impl_->checksums) outs[name] = sum;
  j["outputs"] = std::move(outs);
  return j.dump(2) + "\n";
}

void Manifest::write(const std::filesystem::path& run_dir) const {
  write_file(run_dir / "manifest.json", to_json());
}

void Manifest::absorb_outputs(const std::filesystem::path& run_dir) {
  const auto j = nlohmann::ordered_json::parse(read_file(run_dir / "manifest.json"));
  for (const auto& [name, sum] : j.at("outputs").items()) {
    impl_->checksums[name] = sum.get<std::string>();
  }
}

std::vector<std::string> Manifest::verify(const std::filesystem::path& run_dir) {
  const auto j = nlohmann::ordered_json::parse(read_file(run_dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& [name, sum] : j.at("outputs").items()) {
    const auto path = run_dir / name;
    if (!std::filesystem::exists(path)) {
      bad.push_back(name + " (missing)");
      continue;
    }
    if (fnv1a64_hex(read_file(path)) != sum.get<std::string>()) {
      bad.push_back(name + " (checksum mismatch)");
    }
  }
  return bad;
}

nlohmann::ordered_json Manifest::load_config(const std::filesystem::path& run_dir) {
  const auto j = nlohmann::ordered_json::parse(read_file(run_dir / "manifest.json"));
  return j.at("config");
}

}  // namespace kpp
