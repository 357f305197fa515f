#include "choquard/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "choquard/config.hpp"
#include "choquard/diagnostics.hpp"
#include "choquard/snapshot.hpp"

namespace choquard {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::invalid_config, "cannot open " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

ordered_json params_json(const Params& p) {
  return ordered_json{{"N", p.N}, {"alpha", p.alpha}, {"p", p.p}, {"q", p.q}};
}

ordered_json grid_json(const Grid& g) {
  return ordered_json{{"n", g.n()}, {"L", g.L()}, {"h", g.h()}};
}

// Mean of `values` over h-wide radial bins around the grid point `center`.
// Each row holds the mean radius and mean value of one occupied bin.
std::string radial_profile_csv(const Field& u, std::size_t center_flat,
                               const std::vector<const Field*>& extra,
                               const std::string& header) {
  const Grid& g = u.grid;
  const IndexArray c = g.unflatten(center_flat);
  std::array<double, kMaxDim> xc{};
  g.coords(c, xc);

  const std::size_t ncols = 1 + extra.size();
  std::vector<std::vector<double>> sums;
  std::vector<double> rsum;
  std::vector<std::size_t> count;

  IndexArray idx{};
  std::array<double, kMaxDim> x{};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.coords(idx, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double d = x[a] - xc[a];
      r2 += d * d;
    }
    const double r = std::sqrt(r2);
    const std::size_t bin = static_cast<std::size_t>(r / g.h());
    if (bin >= count.size()) {
      count.resize(bin + 1, 0);
      rsum.resize(bin + 1, 0.0);
      sums.resize(bin + 1, std::vector<double>(ncols, 0.0));
    }
    ++count[bin];
    rsum[bin] += r;
    sums[bin][0] += u[i];
    for (std::size_t e = 0; e < extra.size(); ++e) sums[bin][1 + e] += (*extra[e])[i];
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.n()) break;
      idx[a] = 0;
    }
  }

  std::string csv = header + "\n";
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const double inv = 1.0 / static_cast<double>(count[b]);
    csv += fmt_g17(rsum[b] * inv);
    for (std::size_t col = 0; col < ncols; ++col) {
      csv += ',';
      csv += fmt_g17(sums[b][col] * inv);
    }
    csv += '\n';
  }
  return csv;
}

std::size_t peak_index(const Field& u) {
  double best = -1.0;
  std::size_t best_flat = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::abs(u[i]);
    if (v > best) {
      best = v;
      best_flat = i;
    }
  }
  return best_flat;
}

Field build_init(const Grid& grid, const InitSpec& spec, std::uint64_t seed) {
  if (spec.kind == "random") return make_random(grid, seed, 0.0, 1.0);
  return make_gaussian(grid, spec.width, spec.shift_cells);
}

ordered_json identity_json(const IdentityReport& rep) {
  return ordered_json{
      {"kinetic", rep.kinetic},
      {"mass", rep.mass},
      {"nonlocal", rep.nonlocal},
      {"pohozaev", ordered_json{{"raw", rep.pohozaev},
                                {"normalized", rep.pohozaev_normalized}}},
      {"nehari", ordered_json{{"raw", rep.nehari},
                              {"normalized", rep.nehari_normalized}}}};
}

int cmd_solve(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Params& P = *rc.params;
  const ClassifyResult cls = classify_exponents(P);
  if (cls.label != PhaseLabel::Exists) {
    err << "solve refused: regime " << to_string(cls.label) << " (p+q = "
        << fmt_g17(P.p + P.q) << ", window (" << fmt_g17(cls.lower) << ", "
        << fmt_g17(cls.upper) << "))\n";
    return 3;
  }

  const Grid grid = build_grid(P.N, rc.n, rc.L);
  const KernelTable kernel(grid, P.alpha);
  const Field init = build_init(grid, rc.init, rc.solver.seed);

  SolveResult res;
  try {
    res = minimize_mp(init, P, kernel, rc.solver);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::stalled) {
      err << "solver failed: " << e.what() << "\n";
      return 3;
    }
    throw;
  }

  fs::create_directories(rc.output_dir);
  const fs::path dir(rc.output_dir);
  write_snapshot(res.u, P, dir / "solution.choqfld");

  const std::string profile =
      radial_profile_csv(res.u, peak_index(res.u), {}, "r,u");
  write_text(dir / "profile.csv", profile);

  const IdentityReport rep = pohozaev_residual(res.u, P, kernel);
  const double pq = P.p + P.q;

  ordered_json diag{
      {"command", "solve"},
      {"params", params_json(P)},
      {"grid", grid_json(grid)},
      {"solver", ordered_json{{"tol", rc.solver.tol},
                              {"max_iters", rc.solver.max_iters},
                              {"step0", rc.solver.step0},
                              {"bb_steps", rc.solver.bb_steps},
                              {"seed", rc.solver.seed},
                              {"epsilon_regularization", rc.solver.epsilon}}},
      {"label", to_string(cls.label)},
      {"converged", res.converged},
      {"iterations", res.iterations},
      {"mp", res.mp},
      {"rescale_constant", std::pow(res.mp / pq, 1.0 / (pq - 2.0))},
      {"constraint_drift", res.constraint_drift},
      {"energy", ordered_json{{"kinetic", rep.kinetic},
                              {"mass", rep.mass},
                              {"nonlocal", rep.nonlocal},
                              {"energy",
                               0.5 * (rep.kinetic + rep.mass) - rep.nonlocal}}},
      {"pohozaev", ordered_json{{"raw", rep.pohozaev},
                                {"normalized", rep.pohozaev_normalized}}},
      {"nehari", ordered_json{{"raw", rep.nehari},
                              {"normalized", rep.nehari_normalized}}},
      {"equation_residual", res.equation_residual},
      {"outputs", ordered_json{{"snapshot", "solution.choqfld"},
                               {"profile", "profile.csv"}}}};
  write_text(dir / "diagnostics.json", diag.dump(2) + "\n");

  out << "mp = " << fmt_g17(res.mp) << " after " << res.iterations
      << " iterations (converged = " << (res.converged ? "true" : "false")
      << "), outputs in " << rc.output_dir << "\n";
  if (!res.converged) {
    err << "solver failed: tolerance not reached within max_iters\n";
    return 3;
  }
  return 0;
}

int cmd_classify(const RunConfig& rc, std::ostream& out) {
  const ClassifyResult cls = classify_exponents(*rc.params);
  out << to_string(cls.label) << " a1=" << fmt_g17(cls.a1)
      << " a2=" << fmt_g17(cls.a2) << "\n";
  return 0;
}

unsigned thread_cap(std::size_t tasks) {
  unsigned cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (const char* env = std::getenv("CHOQUARD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(cap, tasks));
}

int cmd_phase(const RunConfig& rc, std::ostream& out) {
  const PhaseSpec& ps = *rc.phase;
  const Params base = *rc.params;
  const Grid grid = build_grid(base.N, rc.n, rc.L);
  const KernelTable kernel(grid, base.alpha);

  const std::size_t tasks =
      static_cast<std::size_t>(ps.p_count) * static_cast<std::size_t>(ps.q_count);
  std::vector<std::string> rows(tasks);

  auto axis_value = [](double lo, double hi, int count, int i) {
    if (count == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const int i = static_cast<int>(t) / ps.q_count;
      const int jq = static_cast<int>(t) % ps.q_count;
      Params P = base;
      P.p = axis_value(ps.p_min, ps.p_max, ps.p_count, i);
      P.q = axis_value(ps.q_min, ps.q_max, ps.q_count, jq);
      const ClassifyResult cls = classify_exponents(P);
      std::string mp_cell;
      if (cls.label == PhaseLabel::Exists) {
        try {
          const Field init = make_gaussian(grid);
          const SolveResult res = minimize_mp(init, P, kernel, rc.solver);
          if (res.converged) mp_cell = fmt_g17(res.mp);
        } catch (const Error&) {
          // refused or stalled cell: leave mp empty
        }
      }
      rows[t] = fmt_g17(P.p) + "," + fmt_g17(P.q) + "," + to_string(cls.label) +
                "," + mp_cell;
    }
  };

  const unsigned nthreads = thread_cap(tasks);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::string csv = "p,q,label,mp\n";
  for (const std::string& r : rows) csv += r + "\n";
  fs::create_directories(rc.output_dir);
  write_text(fs::path(rc.output_dir) / "phase.csv", csv);
  out << tasks << " cells written to "
      << (fs::path(rc.output_dir) / "phase.csv").string() << "\n";
  return 0;
}

void check_header_consistency(const RunConfig& rc, const Params& header_params,
                              const Grid& grid) {
  if (rc.params && !(*rc.params == header_params))
    throw Error(ErrorCode::invalid_config,
                "config params do not match the snapshot header");
  if (rc.has_grid && (rc.n != grid.n() || rc.L != grid.L()))
    throw Error(ErrorCode::invalid_config,
                "config grid does not match the snapshot header");
}

int cmd_check(const RunConfig& rc, std::ostream& out) {
  auto [u, P] = read_snapshot(*rc.input);
  check_header_consistency(rc, P, u.grid);
  const KernelTable kernel(u.grid, P.alpha);
  const IdentityReport rep = pohozaev_residual(u, P, kernel);

  ordered_json j{{"command", "check"},
                 {"params", params_json(P)},
                 {"grid", grid_json(u.grid)}};
  const ordered_json identities = identity_json(rep);
  for (const auto& item : identities.items()) j[item.key()] = item.value();

  const std::string text = j.dump(2) + "\n";
  fs::create_directories(rc.output_dir);
  write_text(fs::path(rc.output_dir) / "identity_report.json", text);
  out << text;
  return 0;
}

int cmd_convolve(const RunConfig& rc, std::ostream& out) {
  auto [f, P] = read_snapshot(*rc.input);
  check_header_consistency(rc, P, f.grid);
  const KernelTable kernel(f.grid, P.alpha);
  const Field g = riesz_convolve(f, kernel);

  const std::string csv =
      radial_profile_csv(f, peak_index(f), {&g}, "r,f,conv");
  fs::create_directories(rc.output_dir);
  write_text(fs::path(rc.output_dir) / "convolve.csv", csv);
  out << "convolution profile written to "
      << (fs::path(rc.output_dir) / "convolve.csv").string() << "\n";
  return 0;
}

int cmd_bltest(const RunConfig& rc, std::ostream& out) {
  const Params& P = *rc.params;
  const BlSpec& bs = *rc.bltest;
  const Grid grid = build_grid(P.N, rc.n, rc.L);
  const KernelTable kernel(grid, P.alpha);

  const Field w = make_bump(grid, bs.bump_radius, bs.bump_amplitude);
  const Field v = make_bump(grid, bs.bump_radius, bs.bump_amplitude);
  const std::vector<double> defects =
      brezis_lieb_defect(w, v, bs.shifts, P, kernel);

  std::vector<double> dist(bs.shifts.size());
  for (std::size_t i = 0; i < bs.shifts.size(); ++i) {
    double z2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
      z2 += static_cast<double>(bs.shifts[i][a]) * bs.shifts[i][a];
    dist[i] = grid.h() * std::sqrt(z2);
  }

  std::string csv = "z,defect\n";
  for (std::size_t i = 0; i < defects.size(); ++i)
    csv += fmt_g17(dist[i]) + "," + fmt_g17(defects[i]) + "\n";
  fs::create_directories(rc.output_dir);
  write_text(fs::path(rc.output_dir) / "bltest.csv", csv);

  if (defects.size() >= 2) {
    const double slope = fit_loglog_slope(dist, defects);
    out << "defect log-log slope " << fmt_g17(slope)
        << " (leading cross-interaction decay " << fmt_g17(P.alpha - P.N)
        << ")\n";
  }
  return 0;
}

int cmd_vanish(const RunConfig& rc, std::ostream& out) {
  const Params& P = *rc.params;
  const VanishSpec& vs = *rc.vanish;
  const Grid grid = build_grid(P.N, rc.n, rc.L);
  const KernelTable kernel(grid, P.alpha);

  const double sigma = vs.sigma;
  const double support =
      vs.support_radius > 0.0 ? vs.support_radius : 5.0 * sigma;
  auto profile = [sigma](double r) { return std::exp(-r * r / (2.0 * sigma * sigma)); };

  const std::vector<VanishPoint> points =
      vanishing_decay_test(profile, support, vs.lambdas, P, kernel);

  std::string csv = "lambda,d_value\n";
  std::vector<double> xs, ys;
  for (const VanishPoint& pt : points) {
    csv += fmt_g17(pt.lambda) + "," + fmt_g17(pt.d_value) + "\n";
    xs.push_back(pt.lambda);
    ys.push_back(pt.d_value);
  }
  fs::create_directories(rc.output_dir);
  write_text(fs::path(rc.output_dir) / "vanish.csv", csv);

  if (points.size() >= 2) {
    const double predicted =
        0.5 * P.N * (P.p + P.q) - (static_cast<double>(P.N) + P.alpha);
    out << "measured slope " << fmt_g17(fit_loglog_slope(xs, ys))
        << ", scaling-law slope " << fmt_g17(predicted) << "\n";
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"ground-state solver and diagnostics for the doubly-nonlinear "
               "Choquard equation"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"solve",    "classify", "phase",
                                          "check",    "convolve", "bltest",
                                          "vanish"};
  std::string config_path;
  std::string out_dir;
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
  }

  std::vector<const char*> argv;
  argv.push_back("choquard");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig rc = load_run_config(config_path, command);
    if (!out_dir.empty()) rc.output_dir = out_dir;

    if (command == "solve") return cmd_solve(rc, out, err);
    if (command == "classify") return cmd_classify(rc, out);
    if (command == "phase") return cmd_phase(rc, out);
    if (command == "check") return cmd_check(rc, out);
    if (command == "convolve") return cmd_convolve(rc, out);
    if (command == "bltest") return cmd_bltest(rc, out);
    if (command == "vanish") return cmd_vanish(rc, out);
    err << "unknown command " << command << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::refused_regime ||
                   e.code() == ErrorCode::stalled
               ? 3
               : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace choquard
