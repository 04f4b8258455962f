// Command-line laboratory for half-line reaction-diffusion runs: front and
// steady-profile construction, initial-value simulation with checkpoint and
// bit-identical resume, the two entire-solution constructions, level-set
// diagnostics, verification suites, and config sweeps.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kpp/config.hpp"
#include "kpp/entire.hpp"
#include "kpp/errors.hpp"
#include "kpp/harness.hpp"
#include "kpp/io.hpp"
#include "kpp/phaseplane.hpp"
#include "kpp/reaction.hpp"
#include "kpp/report.hpp"
#include "kpp/svg.hpp"

namespace fs = std::filesystem;
using namespace kpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;   // verification failure or numerical construction failure
constexpr int kExitUsage = 2;  // bad flags, bad config, corrupted run directory

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

int default_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KPP_HALFLINE_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, count) on up to `jobs` threads (block partition, so
/// the assignment of work to results is scheduling-independent).
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

void write_report(Manifest& man, const fs::path& dir, const VerificationReport& rep) {
  man.put(dir, "report.json", rep.to_json().dump(2) + "\n");
  man.put(dir, "report.txt", rep.to_text());
  std::fputs(rep.to_text().c_str(), stdout);
}

ChartSpec snapshot_chart(const Grid& g, const std::vector<Field>& snaps, std::string title) {
  ChartSpec spec;
  spec.title = std::move(title);
  spec.x_label = "x";
  spec.y_label = "u";
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const std::size_t stride = std::max<std::size_t>(1, snaps.size() / 8);
  std::size_t ci = 0;
  for (std::size_t j = 0; j < snaps.size(); j += stride) {
    Curve c;
    c.label = "t=" + fmt("%.6g", snaps[j].t);
    c.color = palette[ci++ % 8];
    for (std::size_t i = 0; i < snaps[j].u.size(); ++i) {
      c.x.push_back(g.dx() * static_cast<double>(i));
      c.y.push_back(snaps[j].u[i]);
    }
    spec.curves.push_back(std::move(c));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Tasks. Each returns a process exit code and writes artifacts + manifest.
// ---------------------------------------------------------------------------

int task_validate(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  VerificationReport rep = validate_kpp(r);
  rep.merge(validate_concavity(r), "shape");
  Manifest man(cfg.to_json());
  write_report(man, cfg.out_dir, rep);
  man.write(cfg.out_dir);
  return rep.pass() ? kExitOk : kExitFail;
}

int task_wave(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  std::vector<double> speeds = cfg.c;
  if (speeds.empty()) speeds = {1.25 * r.c0()};
  Manifest man(cfg.to_json());
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (double c : speeds) {
    const WaveProfile w = wave(r, c);
    const bool minimal = w.minimal_speed;
    const double a_c = minimal ? amplitude_minimal(w) : amplitude_above_minimal(w);
    const TailFit tf = tail_fit(w);
    const std::string stem = "profile_c" + fmt("%g", c);
    man.put(cfg.out_dir, stem + ".csv", csv_profile(w, a_c));
    ChartSpec spec;
    spec.title = "traveling front, c=" + fmt("%g", c);
    spec.x_label = "z";
    spec.y_label = "phi";
    Curve curve;
    curve.label = "phi";
    curve.x = w.z;
    curve.y = w.phi;
    spec.curves.push_back(std::move(curve));
    man.put(cfg.out_dir, stem + ".svg", svg_chart(spec));
    nlohmann::ordered_json row;
    row["c"] = c;
    row["minimal_speed"] = minimal;
    row["lam_c"] = w.lam_c;
    row["amplitude"] = a_c;
    row["tail_lambda_est"] = tf.lambda_est;
    row["tail_c0_correction"] = tf.c0_correction;
    row["residual"] = profile_residual(w, r);
    summary.push_back(std::move(row));
  }
  man.put(cfg.out_dir, "waves.json", summary.dump(2) + "\n");
  man.write(cfg.out_dir);
  std::printf("wave: %zu profile(s) written to %s\n", speeds.size(), cfg.out_dir.c_str());
  return kExitOk;
}

int task_stationary(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  const StationaryProfile st = stationary(r, cfg.grid.L, cfg.grid.nx);
  Manifest man(cfg.to_json());
  man.put(cfg.out_dir, "stationary.csv", csv_stationary(st));
  ChartSpec spec;
  spec.title = "wall-anchored steady profile, V'(0)=" + fmt("%.9g", st.Vp0);
  spec.x_label = "x";
  spec.y_label = "V";
  Curve curve;
  curve.label = "V";
  curve.x = st.x;
  curve.y = st.V;
  spec.curves.push_back(std::move(curve));
  man.put(cfg.out_dir, "stationary.svg", svg_chart(spec));
  man.write(cfg.out_dir);
  std::printf("stationary: V'(0) = %.12g\n", st.Vp0);
  return kExitOk;
}

Field initial_data(const Reaction& r, const Grid& g, const std::string& spec) {
  Field u0{0.0, std::vector<double>(static_cast<std::size_t>(g.nx) + 1, 0.0)};
  if (spec.rfind("const:", 0) == 0) {
    const double v = std::stod(spec.substr(6));
    std::fill(u0.u.begin() + 1, u0.u.end(), v);
    return u0;
  }
  if (spec.rfind("arch:", 0) == 0) {
    const int n = std::stoi(spec.substr(5));
    return psi_n_field(r, n, choose_N(r), g);
  }
  if (spec.rfind("file:", 0) == 0) {
    const std::string bytes = read_file(spec.substr(5));
    std::istringstream in(bytes);
    std::string line;
    std::vector<double> vals;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("u0 file: expected x,u rows");
      vals.push_back(std::stod(line.substr(comma + 1)));
    }
    if (static_cast<int>(vals.size()) != g.nx + 1) {
      throw ConfigError("u0 file: row count does not match the grid");
    }
    u0.u = std::move(vals);
    return u0;
  }
  throw ConfigError("unknown u0 spec: " + spec + " (want const:<v>, arch:<n>, or file:<csv>)");
}

/// Shared march for simulate and resume. Emits snapshots at fixed step
/// multiples (exact states, no interpolation), appends per-step diagnostics,
/// and checkpoints the exact state, so a resumed run reproduces an
/// uninterrupted one bit for bit.
int march(const RunConfig& cfg, const fs::path& dir, Checkpoint cp, std::string diagnostics,
          bool fresh) {
  const Reaction r = Reaction::preset(cfg.reaction);
  const Grid& g = cp.grid;
  g.validate();
  Solver solver(r, g);
  const long k_end = std::llround((cfg.t_end - cp.t_base) / g.dt);
  if (k_end < cp.step) throw ConfigError("t_end lies before the checkpointed state");
  const long k_stop = cfg.max_steps >= 0 ? std::min(k_end, cfg.max_steps) : k_end;
  const long emit_every = std::max<long>(1, static_cast<long>(std::floor(cfg.out_interval / g.dt)));

  Manifest man(cfg.to_json());
  if (!fresh) man.absorb_outputs(dir);  // keep the earlier segment's artifacts recorded
  const auto time_at = [&](long k) { return cp.t_base + g.dt * static_cast<double>(k); };
  const auto emit_snapshot = [&](long k) {
    char name[40];
    std::snprintf(name, sizeof(name), "snap_%06ld.csv", k);
    man.put(dir, name, csv_snapshot(g, Field{time_at(k), cp.u}));
  };
  const auto diag_row = [&](long k) {
    return fmt17(time_at(k)) + ',' + fmt17(solver.wall_gradient(cp.u)) + ',' + fmt17(cp.u.back()) +
           "\n";
  };

  if (fresh) {
    diagnostics = "t,beta,kappa\n" + diag_row(cp.step);
    emit_snapshot(cp.step);
  }
  for (long k = cp.step; k < k_stop; ++k) {
    solver.advance(cp.u, k);
    cp.step = k + 1;
    diagnostics += diag_row(cp.step);
    if (cp.step % emit_every == 0 || cp.step == k_end) emit_snapshot(cp.step);
    if (cfg.checkpoint_every > 0 && cp.step % cfg.checkpoint_every == 0) {
      // Durable intermediate state (overwritten below; kept for crash debris).
      write_file(dir / "checkpoint.json", checkpoint_to_json(cp));
    }
  }
  man.put(dir, "diagnostics.csv", diagnostics);
  man.put(dir, "checkpoint.json", checkpoint_to_json(cp));
  man.write(dir);
  const bool complete = cp.step >= k_end;
  std::printf("%s: %s at step %ld (t=%.6g), artifacts in %s\n", fresh ? "simulate" : "resume",
              complete ? "complete" : "stopped", cp.step, time_at(cp.step), dir.string().c_str());
  return kExitOk;
}

int task_simulate(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  Checkpoint cp;
  cp.step = 0;
  cp.t_base = 0.0;
  cp.grid = cfg.grid;
  cp.u = initial_data(r, cfg.grid, cfg.u0).u;
  cp.config_echo = cfg.to_json().dump();
  return march(cfg, cfg.out_dir, std::move(cp), "", /*fresh=*/true);
}

int task_resume(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.json") || !fs::exists(dir / "checkpoint.json")) {
    std::fprintf(stderr, "resume: %s has no manifest/checkpoint\n", dir.string().c_str());
    return kExitUsage;
  }
  const auto bad = Manifest::verify(dir);
  if (!bad.empty()) {
    for (const auto& name : bad) {
      std::fprintf(stderr, "resume: artifact does not match its manifest entry: %s\n",
                   name.c_str());
    }
    return kExitUsage;
  }
  const Checkpoint cp = checkpoint_from_json(read_file(dir / "checkpoint.json"));
  const RunConfig cfg = RunConfig::from_json(nlohmann::ordered_json::parse(cp.config_echo));
  const long k_end = std::llround((cfg.t_end - cp.t_base) / cp.grid.dt);
  if (cp.step >= k_end) {
    std::printf("resume: run already complete at step %ld; nothing to do\n", cp.step);
    return kExitOk;
  }
  RunConfig cont = cfg;
  cont.max_steps = -1;  // a resumed run always marches to t_end
  return march(cont, dir, cp, read_file(dir / "diagnostics.csv"), /*fresh=*/false);
}

int task_type1(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  std::vector<double> speeds = cfg.c;
  if (speeds.empty()) speeds = {1.25 * r.c0(), r.c0()};
  const StationaryProfile V = stationary(r, cfg.grid.L, cfg.grid.nx);
  Manifest man(cfg.to_json());
  VerificationReport rep("type1:" + r.spec());

  std::vector<std::optional<std::string>> errors(speeds.size());
  std::vector<std::optional<VerificationReport>> parts(speeds.size());
  std::vector<std::string> csvs(speeds.size()), svgs(speeds.size());
  parallel_for(static_cast<int>(speeds.size()), default_jobs(cfg.jobs), [&](int i) {
    try {
      const double c = speeds[static_cast<std::size_t>(i)];
      const WaveProfile w = wave(r, c);
      TypeIOptions opt;
      opt.t_end = cfg.t_end;
      const TypeIRun run = build_type1(r, w, cfg.theta, cfg.t_start, cfg.grid, opt);
      parts[i] = verify_type1(r, run, w, V);
      const TypeISeries se = type1_series(run, w, V);
      csvs[i] = csv_columns({"t", "d_wave", "rho", "d_V"}, {se.t, se.d_wave, se.rho, se.d_V});
      ChartSpec spec;
      spec.title = "front-anchored gap decay, c=" + fmt("%g", c);
      spec.x_label = "t";
      spec.y_label = "gap";
      spec.log_y = true;
      Curve dw{"d_wave", "#1f77b4", se.t, se.d_wave};
      Curve rh{"rho", "#d62728", se.t, se.rho};
      Curve dv{"d_V", "#2ca02c", se.t, se.d_V};
      spec.curves = {dw, rh, dv};
      svgs[i] = svg_chart(spec);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const std::string tag = "c=" + fmt("%g", speeds[i]);
    if (errors[i]) {
      rep.add(tag + "/raised", std::numeric_limits<double>::quiet_NaN(), 0.0, false, *errors[i]);
      continue;
    }
    rep.merge(*parts[i], tag);
    man.put(cfg.out_dir, "type1_" + tag + ".csv", csvs[i]);
    man.put(cfg.out_dir, "type1_" + tag + ".svg", svgs[i]);
  }
  write_report(man, cfg.out_dir, rep);
  man.write(cfg.out_dir);
  return rep.pass() ? kExitOk : kExitFail;
}

int task_type2(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  const StationaryProfile V = stationary(r, cfg.grid.L, cfg.grid.nx);
  Manifest man(cfg.to_json());
  VerificationReport rep("type2:" + r.spec());

  TypeIIOptions opt;
  opt.snap_ds = cfg.ds;
  opt.t_after = cfg.t_after;
  std::vector<std::optional<TypeIIRun>> runs(cfg.n.size());
  std::vector<std::optional<std::string>> errors(cfg.n.size());
  parallel_for(static_cast<int>(cfg.n.size()), default_jobs(cfg.jobs), [&](int i) {
    try {
      runs[i] = run_type2(r, cfg.n[static_cast<std::size_t>(i)], cfg.grid, V, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<TypeIIRun> ok;
  std::vector<double> col_n, col_tn, col_eta, col_beta;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string tag = "n=" + std::to_string(cfg.n[i]);
    if (errors[i]) {
      rep.add(tag + "/raised", std::numeric_limits<double>::quiet_NaN(), 0.0, false, *errors[i]);
      continue;
    }
    rep.merge(type2_run_checks(r, *runs[i]), tag);
    col_n.push_back(cfg.n[i]);
    col_tn.push_back(runs[i]->t_n);
    col_eta.push_back(eta(r, runs[i]->m, runs[i]->t_n));
    col_beta.push_back(runs[i]->beta00);
    ok.push_back(std::move(*runs[i]));
  }
  rep.merge(type2_limit(r, ok, V), "family");
  man.put(cfg.out_dir, "type2_table.csv",
          csv_columns({"n", "t_n", "eta_at_tn", "beta00"}, {col_n, col_tn, col_eta, col_beta}));
  if (!ok.empty()) {
    const TypeIIRun& finest = ok.back();
    man.put(cfg.out_dir, "type2_finest.svg",
            svg_chart(snapshot_chart(cfg.grid, finest.traj.snapshots,
                                     "recentered family member n=" + std::to_string(finest.n))));
  }
  write_report(man, cfg.out_dir, rep);
  man.write(cfg.out_dir);
  return rep.pass() ? kExitOk : kExitFail;
}

int task_levelset(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  const StationaryProfile V = stationary(r, cfg.grid.L, cfg.grid.nx);
  const int n = cfg.n.empty() ? 64 : cfg.n.back();
  TypeIIOptions opt;
  opt.snap_ds = cfg.ds;
  opt.t_after = cfg.t_after;
  const TypeIIRun run = run_type2(r, n, cfg.grid, V, opt);

  Manifest man(cfg.to_json());
  VerificationReport rep("levelset:" + r.spec() + ",n=" + std::to_string(n));
  const double ds = cfg.ds;
  for (double m : cfg.m) {
    const std::string tag = "m=" + fmt("%g", m);
    const LevelSet ls = level_set(run.traj, m);
    if (ls.s.size() < 3) {
      rep.add(tag + "/resolvable", static_cast<double>(ls.s.size()), 3.0, false,
              "too few resolvable crossings");
      continue;
    }
    double worst_res = 0.0;
    for (double v : ls.residual) worst_res = std::max(worst_res, std::abs(v));
    rep.add_le(tag + "/transport-identity", worst_res, 5.0 * (cfg.grid.dx() + ds));
    const double ref = r.f(m);
    rep.add_le(tag + "/front-growth-rate", std::abs(ls.ut_front.front() - ref), 0.1 * ref,
               "u_t at the earliest resolvable crossing vs f(m)=" + fmt("%.6g", ref));
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ls.xi.size(); ++k) {
      worst_rise = std::max(worst_rise, ls.xi[k] - ls.xi[k - 1]);
    }
    rep.add_le(tag + "/crossing-receding-backward", worst_rise, 1e-6);
    man.put(cfg.out_dir, "levelset_" + tag + ".csv",
            csv_columns({"s", "xi", "xi_prime", "identity_residual"},
                        {ls.s, ls.xi, ls.xi_prime, ls.residual}));
    ChartSpec top;
    top.title = "level crossing, " + tag;
    top.x_label = "s";
    top.y_label = "xi";
    top.curves = {Curve{"xi", "#1f77b4", ls.s, ls.xi}};
    ChartSpec bot;
    bot.title = "crossing speed, " + tag;
    bot.x_label = "s";
    bot.y_label = "xi'";
    bot.curves = {Curve{"xi'", "#d62728", ls.s, ls.xi_prime}};
    man.put(cfg.out_dir, "levelset_" + tag + ".svg", svg_panels({top, bot}));
  }
  write_report(man, cfg.out_dir, rep);
  man.write(cfg.out_dir);
  return rep.pass() ? kExitOk : kExitFail;
}

int task_verify(const RunConfig& cfg) {
  const Reaction r = Reaction::preset(cfg.reaction);
  const VerificationReport rep = run_suite(cfg.suite, r, cfg.seed);
  Manifest man(cfg.to_json());
  write_report(man, cfg.out_dir, rep);
  man.write(cfg.out_dir);
  return rep.pass() ? kExitOk : kExitFail;
}

int run_task(const std::string& task, const RunConfig& cfg) {
  cfg.validate();
  if (task == "validate") return task_validate(cfg);
  if (task == "wave") return task_wave(cfg);
  if (task == "stationary") return task_stationary(cfg);
  if (task == "simulate") return task_simulate(cfg);
  if (task == "type1") return task_type1(cfg);
  if (task == "type2") return task_type2(cfg);
  if (task == "levelset") return task_levelset(cfg);
  if (task == "verify") return task_verify(cfg);
  throw ConfigError("unknown task: " + task);
}

int task_sweep(const std::string& configs_path, int jobs_flag, const std::string& out_dir) {
  nlohmann::ordered_json arr;
  try {
    arr = nlohmann::ordered_json::parse(read_file(configs_path));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("sweep file: ") + e.what());
  }
  if (!arr.is_array() || arr.empty()) throw ConfigError("sweep file must be a non-empty array");

  struct Job {
    std::string task;
    RunConfig cfg;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    nlohmann::ordered_json obj = arr[i];
    if (!obj.is_object() || !obj.contains("task")) {
      throw ConfigError("sweep entries must be objects with a task key");
    }
    const std::string task = obj.at("task").get<std::string>();
    obj.erase("task");
    RunConfig cfg = RunConfig::from_json(obj);
    if (!obj.contains("out_dir")) {
      cfg.out_dir = (fs::path(out_dir) / ("task" + std::to_string(i))).string();
    }
    cfg.validate();  // reject bad entries before any worker starts
    jobs.push_back({task, std::move(cfg)});
  }

  std::vector<int> codes(jobs.size(), kExitOk);
  parallel_for(static_cast<int>(jobs.size()), default_jobs(jobs_flag), [&](int i) {
    try {
      codes[i] = run_task(jobs[static_cast<std::size_t>(i)].task,
                          jobs[static_cast<std::size_t>(i)].cfg);
    } catch (const std::exception&) {
      codes[i] = kExitFail;
    }
  });

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  int worst = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    nlohmann::ordered_json row;
    row["task"] = jobs[i].task;
    row["out_dir"] = jobs[i].cfg.out_dir;
    row["exit"] = codes[i];
    summary.push_back(std::move(row));
    worst = std::max(worst, codes[i]);
  }
  write_file(fs::path(out_dir) / "sweep_summary.json", summary.dump(2) + "\n");
  std::printf("sweep: %zu task(s), worst exit %d\n", jobs.size(), worst);
  return worst == kExitOk ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// Re-rendering stored CSVs as charts.
// ---------------------------------------------------------------------------

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  std::vector<std::string> comments;
};

Csv parse_csv(const std::string& bytes) {
  Csv out;
  std::istringstream in(bytes);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      out.header = cells;
      out.cols.assign(cells.size(), {});
      have_header = true;
      continue;
    }
    if (cells.size() != out.header.size()) throw ConfigError("csv: ragged row");
    for (std::size_t j = 0; j < cells.size(); ++j) out.cols[j].push_back(std::stod(cells[j]));
  }
  if (!have_header || out.cols.empty() || out.cols[0].empty()) throw ConfigError("csv: no data");
  return out;
}

int task_plot(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("plot: not a directory: " + dir);
  int written = 0;
  std::vector<fs::path> entries;
  for (const auto& ent : fs::directory_iterator(dir)) {
    if (ent.path().extension() == ".csv") entries.push_back(ent.path());
  }
  std::sort(entries.begin(), entries.end());
  ChartSpec snaps_spec;  // accumulated snap_*.csv overlay
  snaps_spec.title = "solution snapshots";
  snaps_spec.x_label = "x";
  snaps_spec.y_label = "u";
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  for (const fs::path& p : entries) {
    const std::string stem = p.stem().string();
    const Csv csv = parse_csv(read_file(p));
    const auto col = [&](const char* name) -> const std::vector<double>& {
      for (std::size_t j = 0; j < csv.header.size(); ++j) {
        if (csv.header[j] == name) return csv.cols[j];
      }
      throw ConfigError("plot: " + p.filename().string() + " lacks column " + name);
    };
    ChartSpec spec;
    spec.x_label = csv.header.front();
    if (stem.rfind("profile", 0) == 0) {
      spec.title = stem;
      spec.y_label = "phi";
      spec.curves = {Curve{"phi", "#1f77b4", col("z"), col("phi")}};
    } else if (stem == "stationary") {
      spec.title = "wall-anchored steady profile";
      spec.y_label = "V";
      spec.curves = {Curve{"V", "#1f77b4", col("x"), col("V")}};
    } else if (stem == "diagnostics") {
      spec.title = "boundary diagnostics";
      spec.y_label = "value";
      spec.curves = {Curve{"beta (wall gradient)", "#1f77b4", col("t"), col("beta")},
                     Curve{"kappa (far edge)", "#d62728", col("t"), col("kappa")}};
    } else if (stem.rfind("type1", 0) == 0) {
      spec.title = stem;
      spec.y_label = "gap";
      spec.log_y = true;
      spec.curves = {Curve{"d_wave", "#1f77b4", col("t"), col("d_wave")},
                     Curve{"rho", "#d62728", col("t"), col("rho")},
                     Curve{"d_V", "#2ca02c", col("t"), col("d_V")}};
    } else if (stem.rfind("levelset", 0) == 0) {
      ChartSpec top;
      top.title = stem;
      top.x_label = "s";
      top.y_label = "xi";
      top.curves = {Curve{"xi", "#1f77b4", col("s"), col("xi")}};
      ChartSpec bot;
      bot.title = stem + " speed";
      bot.x_label = "s";
      bot.y_label = "xi'";
      bot.curves = {Curve{"xi'", "#d62728", col("s"), col("xi_prime")}};
      write_file(fs::path(dir) / (stem + ".svg"), svg_panels({top, bot}));
      ++written;
      continue;
    } else if (stem.rfind("snap_", 0) == 0) {
      Curve c;
      c.label = csv.comments.empty() ? stem : csv.comments.front().substr(2);
      c.color = palette[snaps_spec.curves.size() % 8];
      c.x = col("x");
      c.y = col("u");
      snaps_spec.curves.push_back(std::move(c));
      continue;
    } else if (stem == "type2_table") {
      spec.title = "family detection times";
      spec.x_label = "n";
      spec.y_label = "t_n";
      spec.curves = {Curve{"t_n", "#1f77b4", col("n"), col("t_n")}};
    } else {
      continue;  // unrecognized CSVs are not an error; they may be user files
    }
    write_file(fs::path(dir) / (stem + ".svg"), svg_chart(spec));
    ++written;
  }
  if (!snaps_spec.curves.empty()) {
    write_file(fs::path(dir) / "snapshots.svg", svg_chart(snaps_spec));
    ++written;
  }
  std::printf("plot: %d chart(s) written to %s\n", written, dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for a scalar reaction-diffusion equation on the half line "
      "(absorbing wall at x=0): traveling fronts, the wall-anchored steady profile, "
      "time integration with bit-identical resume, two families of eternal solutions, "
      "level-set diagnostics, and verification suites."};
  app.require_subcommand(1);

  std::string config_path, u0_spec, suite, sweep_file, run_dir;
  RunConfig cli;  // holds flag values; merged over the config file after parse

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override its values)");
    sub->add_option("--reaction", cli.reaction, "reaction preset (logistic, cubic, sine, linear[:k])");
    sub->add_option("--L", cli.grid.L, "domain length");
    sub->add_option("--nx", cli.grid.nx, "spatial intervals");
    sub->add_option("--dt", cli.grid.dt, "time step");
    sub->add_option("--seed", cli.seed, "seed for randomized trials");
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--jobs", cli.jobs,
                    "worker threads (default: KPP_HALFLINE_JOBS or hardware)");
    return sub;
  };

  add_common(app.add_subcommand("validate", "check a reaction's shape conditions"));
  auto* s_wave = add_common(app.add_subcommand("wave", "construct traveling fronts"));
  s_wave->add_option("--c", cli.c, "wave speeds");
  add_common(app.add_subcommand("stationary", "construct the steady profile"));
  auto* s_sim = add_common(app.add_subcommand("simulate", "march an initial-value problem"));
  s_sim->add_option("--u0", u0_spec, "initial data: const:<v>, arch:<n>, or file:<csv>");
  s_sim->add_option("--t-end", cli.t_end, "final time");
  s_sim->add_option("--out-interval", cli.out_interval, "snapshot spacing in time");
  s_sim->add_option("--max-steps", cli.max_steps, "stop after this absolute step (resumable)");
  s_sim->add_option("--checkpoint-every", cli.checkpoint_every, "checkpoint cadence in steps");
  auto* s_type1 = add_common(app.add_subcommand("type1", "front-anchored eternal solutions"));
  s_type1->add_option("--c", cli.c, "wave speeds (default: 1.25*c0 and c0)");
  s_type1->add_option("--theta", cli.theta, "front shift");
  s_type1->add_option("--t-start", cli.t_start, "ancient start time");
  s_type1->add_option("--t-end", cli.t_end, "final time");
  auto* s_type2 = add_common(app.add_subcommand("type2", "wall-anchored eternal family"));
  s_type2->add_option("--n", cli.n, "family members");
  s_type2->add_option("--ds", cli.ds, "snapshot cadence");
  s_type2->add_option("--t-after", cli.t_after, "time kept past detection");
  auto* s_level = add_common(app.add_subcommand("levelset", "level-set diagnostics of a family run"));
  s_level->add_option("--n", cli.n, "family member (last entry used)");
  s_level->add_option("--m", cli.m, "level values in [0.05, 0.95]");
  s_level->add_option("--ds", cli.ds, "snapshot cadence");
  s_level->add_option("--t-after", cli.t_after, "time kept past detection");
  auto* s_verify = add_common(app.add_subcommand("verify", "run a verification suite"));
  s_verify->add_option("--suite", suite, "profiles, solver, type1, type2, or all");
  auto* s_resume = app.add_subcommand("resume", "continue an interrupted simulate run");
  s_resume->add_option("--dir", run_dir, "run directory with manifest and checkpoint")->required();
  auto* s_sweep = app.add_subcommand("sweep", "run a batch of configs concurrently");
  s_sweep->add_option("--configs", sweep_file, "JSON array of {task, ...config} objects")->required();
  s_sweep->add_option("--jobs", cli.jobs, "worker threads");
  s_sweep->add_option("--out", cli.out_dir, "directory for task outputs and the summary");
  auto* s_plot = app.add_subcommand("plot", "re-render charts from a run directory's CSVs");
  s_plot->add_option("--dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == s_resume) return task_resume(run_dir);
    if (sub == s_plot) return task_plot(run_dir);
    if (sub == s_sweep) return task_sweep(sweep_file, cli.jobs, cli.out_dir);

    RunConfig cfg;  // defaults
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);
    // Flags override config-file values only when actually passed.
    const auto touched = [&](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (touched("--reaction")) cfg.reaction = cli.reaction;
    if (touched("--L")) cfg.grid.L = cli.grid.L;
    if (touched("--nx")) cfg.grid.nx = cli.grid.nx;
    if (touched("--dt")) cfg.grid.dt = cli.grid.dt;
    if (touched("--seed")) cfg.seed = cli.seed;
    if (touched("--out")) cfg.out_dir = cli.out_dir;
    if (touched("--jobs")) cfg.jobs = cli.jobs;
    if (touched("--c")) cfg.c = cli.c;
    if (touched("--theta")) cfg.theta = cli.theta;
    if (touched("--t-start")) cfg.t_start = cli.t_start;
    if (touched("--t-end")) cfg.t_end = cli.t_end;
    if (touched("--u0")) cfg.u0 = u0_spec;
    if (touched("--out-interval")) cfg.out_interval = cli.out_interval;
    if (touched("--max-steps")) cfg.max_steps = cli.max_steps;
    if (touched("--checkpoint-every")) cfg.checkpoint_every = cli.checkpoint_every;
    if (touched("--n")) cfg.n = cli.n;
    if (touched("--m")) cfg.m = cli.m;
    if (touched("--ds")) cfg.ds = cli.ds;
    if (touched("--t-after")) cfg.t_after = cli.t_after;
    if (touched("--suite")) cfg.suite = suite;

    return run_task(sub->get_name(), cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
