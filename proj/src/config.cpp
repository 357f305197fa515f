#include "choquard/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "json.hpp"

namespace choquard {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& why) {
  throw Error(ErrorCode::invalid_config, why);
}

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(ctx + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key()))
      bad("unknown key \"" + item.key() + "\" in " + ctx);
  }
}

template <typename T>
T get_field(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key)) bad(ctx + " is missing required key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad("bad value for " + ctx + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_field_or(const json& j, const std::string& ctx, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad("bad value for " + ctx + "." + key + ": " + e.what());
  }
}

IndexArray get_cells(const json& j, const std::string& ctx, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    bad(ctx + " must be an array of " + std::to_string(dim) + " integers");
  IndexArray out{};
  for (int a = 0; a < dim; ++a) {
    if (!j[a].is_number_integer()) bad(ctx + " must hold integers");
    out[a] = j[a].get<int>();
  }
  return out;
}

Params parse_params(const json& j, bool with_exponents) {
  const std::string ctx = "params";
  if (with_exponents)
    check_keys(j, ctx, {"N", "alpha", "p", "q"});
  else
    check_keys(j, ctx, {"N", "alpha"});

  Params p;
  p.N = get_field<int>(j, ctx, "N");
  p.alpha = get_field<double>(j, ctx, "alpha");
  if (with_exponents) {
    p.p = get_field<double>(j, ctx, "p");
    p.q = get_field<double>(j, ctx, "q");
  }
  p.validate();
  return p;
}

SolveConfig parse_solver(const json& j) {
  const std::string ctx = "solver";
  check_keys(j, ctx,
             {"tol", "max_iters", "step0", "bb_steps", "seed",
              "epsilon_regularization"});
  SolveConfig cfg;
  cfg.tol = get_field_or<double>(j, ctx, "tol", cfg.tol);
  cfg.max_iters = get_field_or<long>(j, ctx, "max_iters", cfg.max_iters);
  cfg.step0 = get_field_or<double>(j, ctx, "step0", cfg.step0);
  cfg.bb_steps = get_field_or<bool>(j, ctx, "bb_steps", cfg.bb_steps);
  cfg.seed = get_field_or<std::uint64_t>(j, ctx, "seed", cfg.seed);
  cfg.epsilon =
      get_field_or<double>(j, ctx, "epsilon_regularization", cfg.epsilon);
  cfg.validate();
  return cfg;
}

}  // namespace

RunConfig load_run_config(const std::string& path, const std::string& command) {
  std::ifstream f(path);
  if (!f) bad("cannot open config file " + path);

  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }

  RunConfig rc;
  rc.command = command;

  const bool wants_grid = command != "classify" && command != "check" &&
                          command != "convolve";
  const bool snapshot_input = command == "check" || command == "convolve";

  if (command == "solve")
    check_keys(j, "config", {"params", "grid", "solver", "init", "output_dir"});
  else if (command == "classify")
    check_keys(j, "config", {"params"});
  else if (command == "phase")
    check_keys(j, "config", {"params", "grid", "solver", "phase", "output_dir"});
  else if (snapshot_input)
    check_keys(j, "config", {"input", "params", "grid", "output_dir"});
  else if (command == "bltest")
    check_keys(j, "config", {"params", "grid", "bltest", "output_dir"});
  else if (command == "vanish")
    check_keys(j, "config", {"params", "grid", "vanish", "output_dir"});
  else
    bad("unknown command " + command);

  if (j.contains("params"))
    rc.params = parse_params(j.at("params"), command != "phase");
  else if (!snapshot_input)
    bad("config is missing required key \"params\"");

  if (j.contains("grid")) {
    check_keys(j.at("grid"), "grid", {"n", "L"});
    rc.n = get_field<int>(j.at("grid"), "grid", "n");
    rc.L = get_field<double>(j.at("grid"), "grid", "L");
    if (!rc.params) bad("grid without params");
    build_grid(rc.params->N, rc.n, rc.L);  // validate now
    rc.has_grid = true;
  } else if (wants_grid) {
    bad("config is missing required key \"grid\"");
  }

  if (j.contains("solver")) rc.solver = parse_solver(j.at("solver"));
  rc.output_dir = get_field_or<std::string>(j, "config", "output_dir", ".");

  if (j.contains("init")) {
    const json& ji = j.at("init");
    check_keys(ji, "init", {"kind", "width", "shift_cells"});
    rc.init.kind = get_field_or<std::string>(ji, "init", "kind", "gaussian");
    if (rc.init.kind != "gaussian" && rc.init.kind != "random")
      bad("init.kind must be \"gaussian\" or \"random\"");
    rc.init.width = get_field_or<double>(ji, "init", "width", 1.0);
    if (!(rc.init.width > 0.0)) bad("init.width must be positive");
    if (ji.contains("shift_cells"))
      rc.init.shift_cells =
          get_cells(ji.at("shift_cells"), "init.shift_cells", rc.params->N);
  }

  if (command == "phase") {
    if (!j.contains("phase")) bad("phase command needs a \"phase\" block");
    const json& jp = j.at("phase");
    check_keys(jp, "phase",
               {"p_min", "p_max", "p_count", "q_min", "q_max", "q_count"});
    PhaseSpec ps;
    ps.p_min = get_field<double>(jp, "phase", "p_min");
    ps.p_max = get_field<double>(jp, "phase", "p_max");
    ps.p_count = get_field<int>(jp, "phase", "p_count");
    ps.q_min = get_field<double>(jp, "phase", "q_min");
    ps.q_max = get_field<double>(jp, "phase", "q_max");
    ps.q_count = get_field<int>(jp, "phase", "q_count");
    if (ps.p_count < 1 || ps.q_count < 1) bad("phase counts must be >= 1");
    if (!(ps.p_min > 0.0) || !(ps.q_min > 0.0) || ps.p_max < ps.p_min ||
        ps.q_max < ps.q_min)
      bad("phase ranges must be positive and ordered");
    rc.phase = ps;
  }

  if (snapshot_input) {
    if (!j.contains("input")) bad(command + " command needs an \"input\" path");
    rc.input = get_field<std::string>(j, "config", "input");
  }

  if (command == "bltest") {
    if (!j.contains("bltest")) bad("bltest command needs a \"bltest\" block");
    const json& jb = j.at("bltest");
    check_keys(jb, "bltest", {"shifts", "bump_radius", "bump_amplitude"});
    BlSpec bs;
    if (!jb.contains("shifts") || !jb.at("shifts").is_array() ||
        jb.at("shifts").empty())
      bad("bltest.shifts must be a non-empty array of shift vectors");
    for (const json& s : jb.at("shifts"))
      bs.shifts.push_back(get_cells(s, "bltest.shifts[]", rc.params->N));
    bs.bump_radius = get_field_or<double>(jb, "bltest", "bump_radius", 1.5);
    bs.bump_amplitude = get_field_or<double>(jb, "bltest", "bump_amplitude", 1.0);
    if (!(bs.bump_radius > 0.0)) bad("bltest.bump_radius must be positive");
    rc.bltest = bs;
  }

  if (command == "vanish") {
    if (!j.contains("vanish")) bad("vanish command needs a \"vanish\" block");
    const json& jv = j.at("vanish");
    check_keys(jv, "vanish", {"lambdas", "sigma", "support_radius"});
    VanishSpec vs;
    if (!jv.contains("lambdas") || !jv.at("lambdas").is_array() ||
        jv.at("lambdas").empty())
      bad("vanish.lambdas must be a non-empty array");
    for (const json& l : jv.at("lambdas")) {
      if (!l.is_number()) bad("vanish.lambdas must hold numbers");
      vs.lambdas.push_back(l.get<double>());
    }
    vs.sigma = get_field_or<double>(jv, "vanish", "sigma", 0.55);
    vs.support_radius = get_field_or<double>(jv, "vanish", "support_radius", 0.0);
    if (!(vs.sigma > 0.0)) bad("vanish.sigma must be positive");
    rc.vanish = vs;
  }

  return rc;
}

}  // namespace choquard
