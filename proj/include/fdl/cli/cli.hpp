#pragma once

#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdl/analysis/divergence.hpp"
#include "fdl/analysis/level_set.hpp"
#include "fdl/analysis/prevalence.hpp"
#include "fdl/constructions/certificate.hpp"
#include "fdl/constructions/holo.hpp"
#include "fdl/constructions/log_saturator.hpp"
#include "fdl/constructions/saturator.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/random.hpp"
#include "fdl/verify/dirichlet.hpp"
#include "fdl/verify/holo_bounds.hpp"
#include "fdl/verify/inequalities.hpp"

namespace fdl::cli {

using io::json;

/// Every parameter a command can take. Each command owns its own copy so
/// per-command defaults do not interfere.
struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string config_file;
  std::string out;
  std::string csv;

  int j = 10;
  double alpha = 2.0;
  std::string p = "2";
  std::string q = "inf";
  std::size_t grid = 0;
  int s = 3;
  int jmax = 12;
  int r = 1;
  long k = 16;
  double omega = 0.0;
  std::int64_t n = 4096;
  double eps = 0.0;
  double eta = 0.0;
  std::string g;
  std::int64_t N = 1024;
  std::string strategy = "greedy";
  int trials = 50;
  long kmin = 8;
  long kmax = 256;
  int interior = 1000;
  double x = 0.0;
  int lo = 0;
  int hi = 0;
  double beta = -1.0;
  double tol = 0.05;
  std::size_t resolution = 4096;
  int mlo = 4;
  int mhi = 10;
  std::string betas = "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6";
  std::string source = "saturator";
  std::int64_t degree = 256;
  double R = 1.0;
  double M_thresh = 1e-4;
  int depth = 4;
};

namespace detail {

inline json config_value(double v) { return io::number(v); }
template <class T>
json config_value(const T& v) {
  return json(v);
}

struct Output {
  std::ostream& out;
  std::ostream& err;
};

struct Command {
  std::string path;
  CLI::App* app = nullptr;
  RunConfig cfg;
  std::vector<std::pair<std::string, std::function<json()>>> params;
  std::function<int(Command&, Output&)> action;

  template <class T>
  CLI::Option* bind(const std::string& key, T& var, const std::string& desc) {
    params.emplace_back(key, [&var] { return config_value(var); });
    return app->add_option("--" + key, var, desc);
  }

  /// The full resolved parameter set, written into every JSON output.
  json provenance() const {
    json c = json::object();
    c["command"] = path;
    for (const auto& [key, value] : params) c[key] = value();
    c["threads"] = resolve_threads(cfg.threads);
    return c;
  }
};

inline NormExponent parse_exponent(const std::string& s, const char* what) {
  if (s == "inf" || s == "infinity") return NormExponent::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0) throw precondition_error(std::string(what) + ": not a number or inf: " + s);
  return NormExponent(v);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw precondition_error("list: not a number: " + item);
  }
  require(!out.empty(), "list: empty");
  return out;
}

/// Fails before any computation when an output path cannot be written.
inline void check_writable(const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::app);
  if (!f) throw precondition_error("cannot write output file: " + path);
}

inline void emit_json(const RunConfig& cfg, const json& j, Output& o) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty())
    o.out << text;
  else
    io::write_text(cfg.out, text);
}

inline void emit_csv(const RunConfig& cfg, const io::CsvTable& t) {
  if (!cfg.csv.empty()) io::write_text(cfg.csv, t.str());
}

inline std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("FDL_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  std::size_t used = 0;
  std::uint64_t s = 0;
  try {
    s = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || v[used] != '\0') throw precondition_error(std::string("FDL_SEED is not an unsigned integer: ") + v);
  return s;
}

/// Flat `key = value` lines; '#' starts a comment.
inline std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw precondition_error("cannot read config file: " + path);
  std::vector<std::string> args;
  int lineno = 0;
  for (std::string line; std::getline(f, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string t) {
      const auto a = t.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      return t.substr(a, t.find_last_not_of(" \t\r") - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw precondition_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw precondition_error(path + ":" + std::to_string(lineno) + ": invalid key");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

/// Inserts config-file options right after the subcommand words so that
/// later command-line flags take precedence.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::size_t at = 1;
  while (at < args.size() && at < 3 && !args[at].empty() && args[at][0] != '-') ++at;
  const auto extra = read_config_file(path);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return args;
}

inline TrigPoly unit_random_poly(std::int64_t degree, std::uint64_t seed) {
  require(degree >= 1, "random polynomial: degree must be >= 1");
  // A stream distinct from every per-trial seed.
  Rng rng(trial_seed(seed, 0xffffffffULL));
  auto f = rademacher_poly(-degree, degree, rng);
  return f * Complex(1.0 / std::sqrt(f.energy()));
}

inline json family_json(const SaturatorFamily& fam) {
  json members = json::array();
  for (const auto& g : fam.members) members.push_back(io::to_json(g));
  json blocks = json::array();
  for (const auto& b : fam.blocks) blocks.push_back({{"j", b.j}, {"r", b.r}, {"m", b.m}, {"n", b.n}});
  return {{"jmin", fam.jmin},
          {"jmax", fam.jmax},
          {"grid", fam.grid},
          {"block_constant", fam.block_constant()},
          {"tail_bound", io::number(fam.tail_bound)},
          {"blocks", blocks},
          {"members", members}};
}

inline SaturatorFamily build_family(const RunConfig& c, const NormExponent& p) {
  ProbeConfig pc;
  pc.s = c.s;
  pc.jmax = c.jmax;
  pc.grid = c.grid;
  return disjoint_family(c.s, c.alpha, p, c.jmax, pc.resolved_grid(), c.threads);
}

inline std::vector<Frequency> analysis_schedule(const RunConfig& c, const TrigPoly& f) {
  if (c.lo == 0 && c.hi == 0) return default_schedule(f);
  return dyadic_schedule(c.lo, c.hi);
}

inline int report_exit(const verify::VerificationReport& rep, Command& cmd, Output& o) {
  emit_csv(cmd.cfg, verify::to_csv(rep));
  emit_json(cmd.cfg, {{"config", cmd.provenance()}, {"report", verify::to_json(rep)}}, o);
  return rep.passed() ? 0 : 2;
}

inline int certificate_exit(const Certificate& cert) { return cert.holds() ? 0 : 2; }

// ---- construct ----

inline int construct_pj(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  const auto p = parse_exponent(c.p, "--p");
  const setlib::DyadicFamilyParams params(c.j, c.alpha);
  const std::size_t M = c.grid == 0 ? (std::size_t{16} << c.j) : c.grid;
  const auto pj = saturator_pj(params, p, M);
  const auto cert = certify_saturator(pj, params, p, M);
  emit_json(c,
            {{"config", cmd.provenance()},
             {"coarse_level", params.coarse()},
             {"poly", io::to_json(pj)},
             {"certificates", io::to_json(cert)},
             {"holds", cert.holds()}},
            o);
  return certificate_exit(cert);
}

inline int construct_family(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  const auto p = parse_exponent(c.p, "--p");
  const auto fam = build_family(c, p);
  const auto cert = certify_family(fam, certify_family_blocks(fam, c.threads));
  emit_json(c,
            {{"config", cmd.provenance()},
             {"family", family_json(fam)},
             {"certificates", io::to_json(cert)},
             {"holds", cert.holds()}},
            o);
  return certificate_exit(cert);
}

inline int construct_holo(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  const HoloKernelParams params(c.k, c.omega > 0.0 ? c.omega : verify::default_holo_omega(c.k));
  const std::size_t M = c.grid == 0 ? log_lift_min_grid(params) : c.grid;
  require(M >= log_lift_min_grid(params), "construct holo: grid below max(64k, 32 omega k)");
  const auto g = log_lift(params, M, c.threads);
  const auto coeffs = coefficients(g);
  double sup = 0.0, min_re = std::numeric_limits<double>::infinity(), max_im = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const auto f = holo_boundary(params, g.point(m));
    sup = std::max(sup, std::abs(f));
    min_re = std::min(min_re, f.real());
    max_im = std::max(max_im, std::abs(g[m].imag()));
  }
  // Positivity certificate: Re f > 0 on the boundary grid.
  const auto cert = Certificate::make(sup, min_re, 0.0);
  emit_json(c,
            {{"config", cmd.provenance()},
             {"k", params.k()},
             {"omega", io::number(params.omega())},
             {"epsilon", io::number(params.epsilon())},
             {"grid", M},
             {"max_abs_imag_log", io::number(max_im)},
             {"negative_frequency_mass", io::number(negative_frequency_mass(coeffs))},
             {"log_lift", io::to_json(coeffs)},
             {"certificates", io::to_json(cert)},
             {"holds", cert.holds() && cert.min_on_target_set > 0.0}},
            o);
  return cert.min_on_target_set > 0.0 ? 0 : 2;
}

inline json log_saturator_json(const LogSaturator& ls) {
  return {{"n", ls.n},
          {"eps_requested", io::number(ls.eps_requested)},
          {"eps", io::number(ls.eps)},
          {"floored", ls.floored},
          {"omega", io::number(ls.omega)},
          {"k", ls.k},
          {"grid", ls.grid},
          {"negative_mass", io::number(ls.negative_mass)}};
}

inline int construct_logsat(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  const double eps = c.eps > 0.0 ? c.eps : log_saturator_floor(c.n);
  const auto ls = log_saturator(c.n, eps, c.grid, c.threads);
  const auto cert = certify_log_saturator(ls);
  const bool spectrum_ok = ls.poly.spectrum_within(SpectrumInterval(0, 2 * c.n - 1));
  const bool ok = cert.holds() && cert.norm <= 1.0 + 1e-9 && spectrum_ok;
  emit_json(c,
            {{"config", cmd.provenance()},
             {"saturator", log_saturator_json(ls)},
             {"poly", io::to_json(ls.poly)},
             {"spectrum_within", spectrum_ok},
             {"certificates", io::to_json(cert)},
             {"holds", ok}},
            o);
  return ok ? 0 : 2;
}

inline int construct_witness(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  TrigPoly g;
  if (!c.g.empty()) {
    std::ifstream f(c.g);
    if (!f) throw precondition_error("cannot read polynomial file: " + c.g);
    const auto j = json::parse(f, nullptr, false);
    if (j.is_discarded()) throw precondition_error("polynomial file is not valid JSON: " + c.g);
    g = io::trig_poly_from_json(j.contains("poly") ? j.at("poly") : j);
  }
  const double eps = c.eps > 0.0 ? c.eps : log_saturator_floor(c.j);
  const double eta = c.eta > 0.0 ? c.eta : eps;
  const auto w = residual_witness(g, c.j, eta, eps, c.grid, c.threads);
  const auto cert = certify_witness(w);
  emit_json(c,
            {{"config", cmd.provenance()},
             {"j", w.j},
             {"eta", io::number(w.eta)},
             {"eps", io::number(w.eps)},
             {"saturator", log_saturator_json(w.saturator)},
             {"poly", io::to_json(w.h)},
             {"certificates", io::to_json(cert)},
             {"holds", cert.holds()}},
            o);
  return certificate_exit(cert);
}

// ---- verify ----

inline int verify_dirichlet(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  return report_exit(
      verify::check_variable_dirichlet(c.N, verify::parse_index_strategy(c.strategy), c.trials, c.seed, c.threads), cmd,
      o);
}

inline int verify_maximal(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  return report_exit(verify::sweep_weak_maximal(c.N, c.alpha, c.trials, c.seed, c.threads), cmd, o);
}

inline int verify_nikolsky(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  return report_exit(verify::sweep_nikolsky(c.N, parse_exponent(c.p, "--p"), parse_exponent(c.q, "--q"), c.trials,
                                            c.seed, c.threads),
                     cmd, o);
}

inline int verify_derivative(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  return report_exit(verify::sweep_derivative(c.N, parse_exponent(c.p, "--p"), c.trials, c.seed, c.threads), cmd, o);
}

inline int verify_localization(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  return report_exit(verify::sweep_localization(c.N, parse_exponent(c.p, "--p"), c.eps, c.trials, c.seed, c.threads),
                     cmd, o);
}

/// CSV rows: trial = bound index (0 Re f omega k, 1 c2, 2 c3, 3 |f'/f|/(omega k)), scale = k.
inline int verify_holo(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  require(c.kmin >= 3 && c.kmin <= c.kmax, "verify holo: need 3 <= kmin <= kmax");
  std::vector<long> ks;
  for (long k = c.kmin; k <= c.kmax; k *= 2) ks.push_back(k);
  const auto sweep = verify::sweep_holo_bounds(ks, c.grid == 0 ? std::size_t{1} << 14 : c.grid, c.interior, c.seed);
  io::CsvTable t({"trial", "seed", "scale", "ratio"});
  json reports = json::array();
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const auto& r = sweep.reports[i];
    const auto s = std::to_string(trial_seed(c.seed, i));
    const double values[] = {r.min_re_scaled, r.c2, r.c3, r.log_derivative_scaled};
    for (int b = 0; b < 4; ++b)
      t.add_row({std::to_string(b), s, std::to_string(r.k), io::format_number(values[b])});
    reports.push_back(verify::to_json(r));
  }
  emit_csv(c, t);
  emit_json(c,
            {{"config", cmd.provenance()},
             {"reports", reports},
             {"c1_holds", sweep.c1_holds},
             {"c2_spread", io::number(sweep.c2_spread)},
             {"c3_spread", io::number(sweep.c3_spread)},
             {"passed", sweep.passed()}},
            o);
  return sweep.passed() ? 0 : 2;
}

// ---- analyze ----

inline TrigPoly analysis_function(const RunConfig& c, std::vector<Frequency>& schedule) {
  if (c.source == "random") {
    const auto f = unit_random_poly(c.degree, c.seed);
    if (c.lo == 0 && c.hi == 0) {
      int top = 0;
      while ((std::int64_t{2} << top) <= c.degree) ++top;
      schedule = dyadic_schedule(4, std::max(top + 6, 8));
    } else {
      schedule = dyadic_schedule(c.lo, c.hi);
    }
    return f;
  }
  require(c.source == "saturator", "--source must be saturator or random");
  const auto fam = build_family(c, parse_exponent(c.p, "--p"));
  auto g = fam.member(c.r);
  schedule = analysis_schedule(c, g);
  return g;
}

inline int analyze_index(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  std::vector<Frequency> schedule;
  const auto f = analysis_function(c, schedule);
  const auto est = divergence_index(f, c.x, schedule);
  emit_json(c, {{"config", cmd.provenance()}, {"x", io::number(c.x)}, {"estimate", to_json(est)}}, o);
  return 0;
}

inline int analyze_levelset(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  std::vector<Frequency> schedule;
  const auto f = analysis_function(c, schedule);
  const auto field = beta_field(f, c.resolution, schedule, c.threads);
  const auto ls = level_set(field, c.beta, c.tol);
  io::CsvTable t({"x", "beta_hat", "member"});
  for (std::size_t m = 0; m < field.size(); ++m)
    t.add_row({io::format_number(field.point(m)), io::format_number(field.beta[m]), ls.members[m] ? "1" : "0"});
  emit_csv(c, t);
  const auto dim = setlib::box_dimension(ls.members, c.mlo, c.mhi);
  emit_json(c,
            {{"config", cmd.provenance()},
             {"members", ls.count()},
             {"points", field.size()},
             {"dimension", io::number(dim.slope)},
             {"r2", io::number(dim.r2)},
             {"schedule", schedule}},
            o);
  return 0;
}

inline int analyze_spectrum(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  const auto betas = parse_list(c.betas);
  const auto p = parse_exponent(c.p, "--p");
  std::vector<Frequency> schedule;
  const auto f = analysis_function(c, schedule);
  const auto field = beta_field(f, c.resolution, schedule, c.threads);
  const auto curve = spectrum_curve(field, betas, p, c.tol, c.mlo, c.mhi);
  emit_csv(c, spectrum_csv(curve));
  json rows = json::array();
  for (const auto& pt : curve)
    rows.push_back({{"beta", io::number(pt.beta)},
                    {"dimension", io::number(pt.dimension.slope)},
                    {"r2", io::number(pt.dimension.r2)},
                    {"theory", io::number(pt.theory)},
                    {"members", pt.members}});
  emit_json(c, {{"config", cmd.provenance()}, {"schedule", schedule}, {"curve", rows}}, o);
  return 0;
}

// ---- probe ----

inline int probe_prevalence(Command& cmd, Output& o) {
  const auto& c = cmd.cfg;
  ProbeConfig pc;
  pc.s = c.s;
  pc.alpha = c.alpha;
  const auto p = parse_exponent(c.p, "--p");
  require(!p.is_infinite(), "probe: p must be finite");
  pc.p = p.value();
  pc.R = c.R;
  pc.M_thresh = c.M_thresh;
  pc.trials = c.trials;
  pc.depth = c.depth;
  pc.jmax = c.jmax;
  if (c.beta >= 0.0) pc.beta = c.beta;
  pc.grid = c.grid;
  pc.seed = c.seed;
  pc.validate();
  require(c.source == "zero" || c.source == "random", "--f must be zero or random");
  const TrigPoly f = c.source == "random" ? unit_random_poly(c.degree, c.seed) : TrigPoly();
  const auto res = prevalence_probe(f, pc, c.threads);
  auto j = to_json(res);
  auto config = cmd.provenance();
  const auto resolved = to_json(pc);
  for (const auto& [key, value] : resolved.items()) config["resolved_" + key] = value;
  j["config"] = config;
  emit_json(c, j, o);
  return 0;
}

inline void bind_common(Command& cmd, bool csv) {
  auto& c = cmd.cfg;
  cmd.bind("seed", c.seed, "master seed (FDL_SEED overrides the default)");
  cmd.app->add_option("--threads", c.threads, "worker threads, 0 = machine parallelism");
  cmd.bind("config", c.config_file, "flat key = value file; flags override it");
  cmd.bind("out", c.out, "JSON output path (stdout when empty)");
  if (csv) cmd.bind("csv", c.csv, "CSV output path");
}

inline void bind_family(Command& cmd) {
  auto& c = cmd.cfg;
  cmd.bind("s", c.s, "family size")->check(CLI::Range(1, 64));
  cmd.bind("alpha", c.alpha, "dyadic approximation exponent");
  cmd.bind("p", c.p, "L^p exponent");
  cmd.bind("jmax", c.jmax, "truncation level")->check(CLI::Range(1, 24));
  cmd.bind("grid", c.grid, "family grid, 0 = smallest admissible");
}

inline void bind_analysis_source(Command& cmd) {
  auto& c = cmd.cfg;
  bind_family(cmd);
  c.jmax = 14;
  cmd.bind("r", c.r, "family member index");
  cmd.bind("source", c.source, "saturator (g_r of the family) or random (unit Rademacher polynomial)");
  cmd.bind("degree", c.degree, "degree of the random polynomial");
  cmd.bind("lo", c.lo, "schedule starts at 2^lo (0 with hi = 0: default schedule)");
  cmd.bind("hi", c.hi, "schedule ends at 2^hi");
}

}  // namespace detail

/// Parses and runs one command. Returns 0 on success, 2 when a certificate or
/// assertion fails and 1 on usage or validation errors.
inline int run(const std::vector<std::string>& argv_in, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::Command;
  detail::Output o{out, err};
  CLI::App app{"Finite-scale experiments on divergence of Fourier partial sums", "fdl"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::deque<Command> commands;
  std::uint64_t default_seed = kDefaultSeed;

  auto group = [&](const std::string& name, const std::string& desc) {
    auto* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  };
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& desc, bool csv,
                 std::function<int(Command&, detail::Output&)> action) -> Command& {
    auto& cmd = commands.emplace_back();
    cmd.path = parent->get_name() + " " + name;
    cmd.app = parent->add_subcommand(name, desc);
    cmd.action = std::move(action);
    cmd.cfg.seed = default_seed;
    detail::bind_common(cmd, csv);
    return cmd;
  };

  try {
    if (auto s = detail::env_seed()) default_seed = *s;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  auto* construct = group("construct", "build a certified construction");
  {
    auto& c = add(construct, "pj", "saturator P_j for the dyadic family", false, detail::construct_pj);
    c.cfg.p = "1";
    c.bind("j", c.cfg.j, "level j");
    c.bind("alpha", c.cfg.alpha, "dyadic approximation exponent");
    c.bind("p", c.cfg.p, "L^p exponent");
    c.bind("grid", c.cfg.grid, "grid size, 0 = 16 * 2^j");
  }
  {
    auto& c = add(construct, "family", "disjoint-spectrum family g_1..g_s", false, detail::construct_family);
    detail::bind_family(c);
  }
  {
    auto& c = add(construct, "holo", "holomorphic comb kernel and its log-lift", false, detail::construct_holo);
    c.bind("k", c.cfg.k, "number of teeth");
    c.bind("omega", c.cfg.omega, "sharpness, 0 = max(log k, 3)");
    c.bind("grid", c.cfg.grid, "grid size, 0 = max(64k, 32 omega k)");
  }
  {
    auto& c = add(construct, "logsat", "log-saturator P_n", false, detail::construct_logsat);
    c.bind("n", c.cfg.n, "degree parameter");
    c.bind("eps", c.cfg.eps, "target rate, 0 = floor (log log n)/(4 pi log n)");
    c.bind("grid", c.cfg.grid, "grid size, 0 = automatic");
  }
  {
    auto& c = add(construct, "witness", "residual witness h_j = g + (eta/eps) e_j P_j", false,
                  detail::construct_witness);
    c.bind("j", c.cfg.j, "index j");
    c.cfg.j = 4096;
    c.bind("eta", c.cfg.eta, "rate eta_j, 0 = eps_j");
    c.bind("eps", c.cfg.eps, "rate eps_j, 0 = floor");
    c.bind("g", c.cfg.g, "TrigPoly JSON file for g (default 0)");
    c.bind("grid", c.cfg.grid, "grid size, 0 = automatic");
  }

  auto* verify = group("verify", "sweep an inequality over seeded trials and dyadic scales");
  auto add_sweep = [&](const std::string& name, const std::string& desc,
                       std::function<int(Command&, detail::Output&)> action) -> Command& {
    auto& c = add(verify, name, desc, true, std::move(action));
    c.bind("N", c.cfg.N, "largest scale")->check(CLI::Range(std::int64_t{4}, std::int64_t{1} << 20));
    c.bind("trials", c.cfg.trials, "number of trials")->check(CLI::Range(1, 100000));
    return c;
  };
  {
    auto& c = add_sweep("dirichlet", "variable-index Dirichlet integral against log N", detail::verify_dirichlet);
    c.cfg.trials = 4;
    c.bind("strategy", c.cfg.strategy, "constant, random or greedy");
  }
  {
    auto& c = add_sweep("maximal", "weak maximal inequality", detail::verify_maximal);
    c.cfg.N = 4096;
    c.cfg.alpha = 0.5;
    c.bind("alpha", c.cfg.alpha, "log exponent a in (log n)^-(1+a)");
  }
  {
    auto& c = add_sweep("nikolsky", "Nikolsky inequality", detail::verify_nikolsky);
    c.cfg.trials = 10;
    c.bind("p", c.cfg.p, "inner exponent");
    c.bind("q", c.cfg.q, "outer exponent");
  }
  {
    auto& c = add_sweep("derivative", "derivative bound for S_n", detail::verify_derivative);
    c.cfg.trials = 10;
    c.bind("p", c.cfg.p, "L^p exponent");
  }
  {
    auto& c = add_sweep("localization", "localization lemma; trials = random family members",
                        detail::verify_localization);
    c.cfg.trials = 20;
    c.cfg.p = "1";
    c.cfg.eps = 0.5;
    c.bind("p", c.cfg.p, "L^p exponent");
    c.bind("eps", c.cfg.eps, "epsilon of the hypothesis");
  }
  {
    auto& c = add(verify, "holo", "holomorphic kernel bounds over k = kmin..kmax (powers of two)", true,
                  detail::verify_holo);
    c.cfg.grid = std::size_t{1} << 14;
    c.bind("kmin", c.cfg.kmin, "smallest k");
    c.bind("kmax", c.cfg.kmax, "largest k");
    c.bind("grid", c.cfg.grid, "boundary grid size");
    c.bind("interior", c.cfg.interior, "interior disk samples");
  }

  auto* analyze = group("analyze", "divergence index, level sets and spectrum curves");
  {
    auto& c = add(analyze, "index", "divergence index at one point", false, detail::analyze_index);
    detail::bind_analysis_source(c);
    c.bind("x", c.cfg.x, "point of the torus");
  }
  {
    auto& c = add(analyze, "levelset", "level set of beta_hat on a grid", true, detail::analyze_levelset);
    detail::bind_analysis_source(c);
    c.cfg.beta = 0.25;
    c.bind("beta", c.cfg.beta, "level");
    c.bind("tol", c.cfg.tol, "half-width of the level band");
    c.bind("resolution", c.cfg.resolution, "number of grid points (power of two)");
    c.bind("mlo", c.cfg.mlo, "coarsest box scale 2^-mlo");
    c.bind("mhi", c.cfg.mhi, "finest box scale 2^-mhi");
  }
  {
    auto& c = add(analyze, "spectrum", "box dimension of level sets against 1 - beta p", true,
                  detail::analyze_spectrum);
    detail::bind_analysis_source(c);
    c.bind("betas", c.cfg.betas, "comma-separated beta values");
    c.bind("tol", c.cfg.tol, "half-width of the level band");
    c.bind("resolution", c.cfg.resolution, "number of grid points (power of two)");
    c.bind("mlo", c.cfg.mlo, "coarsest box scale 2^-mlo");
    c.bind("mhi", c.cfg.mhi, "finest box scale 2^-mhi");
  }

  auto* probe = group("probe", "finite-scale prevalence probe");
  {
    auto& c = add(probe, "prevalence", "success fraction of f + sum c_r g_r over random c", false,
                  detail::probe_prevalence);
    c.cfg.s = 9;
    c.cfg.jmax = 10;
    c.cfg.trials = 200;
    c.cfg.source = "zero";
    c.bind("s", c.cfg.s, "family size");
    c.bind("alpha", c.cfg.alpha, "dyadic approximation exponent");
    c.bind("p", c.cfg.p, "L^p exponent");
    c.bind("R", c.cfg.R, "cube half-width");
    c.bind("M", c.cfg.M_thresh, "growth threshold");
    c.bind("trials", c.cfg.trials, "number of sampled coefficient vectors");
    c.bind("depth", c.cfg.depth, "dyadic test depth");
    c.bind("jmax", c.cfg.jmax, "family truncation level");
    c.bind("beta", c.cfg.beta, "growth exponent, negative = 0.8 (1/p)(1 - 1/alpha)");
    c.bind("grid", c.cfg.grid, "family grid, 0 = smallest admissible");
    c.bind("f", c.cfg.source, "base function: zero or random");
    c.bind("degree", c.cfg.degree, "degree of the random base function");
  }

  std::vector<std::string> args;
  try {
    args = detail::expand_config(argv_in);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> raw;
  for (const auto& a : args) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  for (auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      detail::check_writable(cmd.cfg.out);
      detail::check_writable(cmd.cfg.csv);
      return cmd.action(cmd, o);
    } catch (const precondition_error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    } catch (const aliasing_error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  err << "error: no command selected\n";
  return 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fdl::cli
