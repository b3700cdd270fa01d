#pragma once

// Command-line front end. Exit codes: 0 ok, 1 verification failure,
// 2 usage or domain error, 3 malformed input file.

#include <dyadic/dyadic.hpp>
#include <dyadic/io.hpp>
#include <dyadic/sampling.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dyadic::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kMalformed = 3 };

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct RunConfig {
  Format format = Format::json;
  int precision = 12;
  std::size_t depth = 12;
  std::size_t depth_cap = 20;
  std::string out_path;
};

/// A table with fixed columns; rendered as CSV or as a JSON array of rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (auto const& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "");
        if (row[i].is_string()) {
          os << row[i].get<std::string>();
        } else {
          os << row[i].dump();
        }
      }
      os << '\n';
    }
    return os.str();
  }

  Json json() const {
    Json out = Json::array();
    for (auto const& row : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      out.push_back(obj);
    }
    return out;
  }
};

inline Rational parse_rational_arg(std::string const& text, char const* name) {
  try {
    return parse_rational(text);
  } catch (std::invalid_argument const& e) {
    throw usage_error(std::string("--") + name + ": " + e.what());
  }
}

inline BernoulliParam parse_param(std::string const& text, char const* name = "a") {
  return BernoulliParam(parse_rational_arg(text, name));
}

inline std::vector<std::string> split_list(std::vector<std::string> const& items) {
  std::vector<std::string> out;
  for (auto const& item : items) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!piece.empty()) out.push_back(piece);
    }
  }
  return out;
}

inline Json exact_and_decimal(Rational const& r, int precision) {
  return Json{{"exact", to_string(r)}, {"decimal", to_decimal(r, precision)}};
}

inline void check_depth(RunConfig const& cfg, std::size_t depth) {
  if (depth > cfg.depth_cap) {
    throw usage_error("working depth " + std::to_string(depth) + " exceeds the cap " +
                      std::to_string(cfg.depth_cap) + " (raise it with --max-depth)");
  }
}

inline Json read_json_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw malformed_input("cannot open state file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (Json::parse_error const& e) {
    throw malformed_input("state file '" + path + "' is not valid JSON: " + e.what());
  }
}

struct Output {
  Json json;
  Table table;
  int code = kOk;
};

// ---------------------------------------------------------------- lemma

inline Output cmd_lemma(RunConfig const& cfg, std::string const& a_text, std::size_t terms) {
  auto const param = parse_param(a_text);
  auto const dist = tv_sigma_vs_identity(param);
  auto const rn = rn_integral_check(param, terms);
  bool const ok = dist.value == param.t() && dist.positive_half == 1 - 2 * param.a() &&
                  dist.negative_half == 1 - 2 * param.a() && rn.partial + rn.tail == 1;
  Output out;
  out.json = Json{{"a", to_string(param.a())},
                  {"value", to_string(dist.value)},
                  {"decimal", to_decimal(dist.value, cfg.precision)},
                  {"expected", to_string(param.t())},
                  {"positive_half", to_string(dist.positive_half)},
                  {"negative_half", to_string(dist.negative_half)},
                  {"rn_terms", terms},
                  {"rn_partial", to_string(rn.partial)},
                  {"rn_tail", to_string(rn.tail)},
                  {"rn_integral", to_string(rn.partial + rn.tail)},
                  {"verified", ok}};
  out.table.columns = {"quantity", "exact", "decimal"};
  auto const row = [&](char const* name, Rational const& r) {
    out.table.rows.push_back({name, to_string(r), to_decimal(r, cfg.precision)});
  };
  row("value", dist.value);
  row("positive_half", dist.positive_half);
  row("negative_half", dist.negative_half);
  row("rn_partial", rn.partial);
  row("rn_tail", rn.tail);
  row("rn_integral", rn.partial + rn.tail);
  out.code = ok ? kOk : kVerificationFailed;
  return out;
}

// ---------------------------------------------------------------- converge

template <class Rows>
Table convergence_rows(Rows const& rows, int precision) {
  Table table{{"n", "lo", "hi", "decimal_lo", "decimal_hi", "stabilized"}, {}};
  for (auto const& r : rows) {
    table.rows.push_back({r.n, to_string(r.interval.lo), to_string(r.interval.hi),
                          to_decimal(r.interval.lo, precision), to_decimal(r.interval.hi, precision),
                          r.stabilized});
  }
  return table;
}

inline Output cmd_converge(RunConfig const& cfg, std::string const& path, std::size_t n_max,
                           std::optional<std::string> const& a_text) {
  check_depth(cfg, cfg.depth);
  auto const state = state_from_json(read_json_file(path));
  Output out;
  auto const check_param = [&](BernoulliParam const& p) {
    if (a_text && !(parse_param(*a_text) == p)) throw usage_error("--a does not match the state file");
  };
  if (auto const* phi = std::get_if<CylinderState>(&state)) {
    check_param(phi->param());
    if (cfg.depth < phi->depth()) throw usage_error("--depth must be at least the state depth");
    out.table = convergence_rows(convergence_table(*phi, n_max, cfg.depth), cfg.precision);
    out.json = Json{{"kind", "cylinder"}, {"a", to_string(phi->param().a())}, {"depth", phi->depth()},
                    {"t", to_string(phi->param().t())}};
  } else {
    auto const& psi = std::get<SuspensionState>(state);
    check_param(psi.param());
    if (cfg.depth < psi.base_depth()) throw usage_error("--depth must be at least the base depth");
    if (n_max < psi.base_depth()) throw usage_error("--n-max must be at least the base depth");
    out.table = convergence_rows(flow_limit_table(psi, n_max, cfg.depth), cfg.precision);
    out.json = Json{{"kind", "suspension"}, {"a", to_string(psi.param().a())},
                    {"base_depth", psi.base_depth()}, {"time_depth", psi.time_depth()},
                    {"t", to_string(psi.param().t())}};
  }
  out.json["working_depth"] = cfg.depth;
  out.json["rows"] = out.table.json();
  return out;
}

// ---------------------------------------------------------------- eigen

inline Output cmd_eigen(RunConfig const& cfg, std::size_t n, std::uint64_t k, bool suspension,
                        std::vector<std::string> const& s_items) {
  (void)cfg;
  if (n < 1 || n > 16) throw usage_error("--n must lie in 1..16");
  if (k >= (std::uint64_t{1} << n)) throw usage_error("--k must satisfy 0 <= k < 2^n");
  auto const u = eigen_unitary(n, k);
  bool all_ok = verify_sigma_eigen(u, n, k);
  Output out;
  out.json = Json{{"n", n}, {"k", k}, {"tau", DyadicAngle(static_cast<std::int64_t>(k), std::int64_t{1} << n).str()},
                  {"unitary", unitary_to_json(u)}, {"sigma_eigen", all_ok}};
  out.table.columns = {"kind", "key", "value"};
  for (std::uint64_t j = 0; j < u.exponents.size(); ++j) {
    out.table.rows.push_back({"exponent", std::to_string(j), std::to_string(u.exponents[j])});
  }
  out.table.rows.push_back({"verdict", "sigma", all_ok ? "pass" : "fail"});
  if (suspension) {
    auto const samples = eigen_sample_grid(n);
    Json checks = Json::object();
    for (auto const& item : split_list(s_items)) {
      auto const s = parse_rational_arg(item, "s");
      bool const ok = suspension_eigen_check(n, k, s, samples);
      all_ok = all_ok && ok;
      checks[to_string(s)] = ok;
      out.table.rows.push_back({"verdict", "suspension s=" + to_string(s), ok ? "pass" : "fail"});
    }
    out.json["suspension_eigen"] = checks;
    out.json["sample_points"] = samples.size();
  }
  out.json["verdict"] = all_ok ? "pass" : "fail";
  out.code = all_ok ? kOk : kVerificationFailed;
  return out;
}

// ---------------------------------------------------------------- tinv

inline std::size_t bit_length(std::int64_t q) {
  std::size_t n = 0;
  for (auto v = static_cast<std::uint64_t>(q); v != 0; v >>= 1) ++n;
  return n;
}

inline Output cmd_tinv(RunConfig const& cfg, std::vector<std::string> const& tau_items) {
  auto const items = split_list(tau_items);
  if (items.empty()) throw usage_error("--tau needs at least one fraction p/q");
  Output out;
  out.table.columns = {"tau", "member", "preperiod", "cycle", "min_sq_distance", "max_sq_distance", "exact"};
  Json entries = Json::array();
  for (auto const& item : items) {
    DyadicAngle tau(0, 1);
    try {
      tau = DyadicAngle::parse(item);
    } catch (std::invalid_argument const& e) {
      throw usage_error(std::string("--tau: ") + e.what());
    }
    bool const member = dyadic_membership(tau);
    auto const cycle = residue_cycle(tau);
    auto const profile = orbit_distance_profile(tau, 0, 2 * bit_length(tau.q()));
    // extremes over the eventual cycle, which is what the limit sees
    std::optional<Rational> lo, hi;
    bool exact = true;
    for (auto r : cycle.cycle) {
      bool e = true;
      auto const v = squared_chord(r, tau.q(), e);
      exact = exact && e;
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
    auto const join = [](std::vector<std::int64_t> const& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
      return s;
    };
    Json profile_json = Json::array();
    for (auto const& c : profile) {
      profile_json.push_back(Json{{"n", c.n}, {"residue", c.residue}, {"sq_distance", to_string(c.value)},
                                  {"decimal", to_decimal(c.value, cfg.precision)}, {"exact", c.exact}});
    }
    entries.push_back(Json{{"tau", tau.str()},
                           {"member", member},
                           {"preperiod", cycle.preperiod},
                           {"cycle", cycle.cycle},
                           {"cycle_min_sq_distance", to_decimal(*lo, cfg.precision)},
                           {"cycle_max_sq_distance", to_decimal(*hi, cfg.precision)},
                           {"exact", exact},
                           {"profile", profile_json}});
    out.table.rows.push_back({tau.str(), member, join(cycle.preperiod), join(cycle.cycle),
                              to_decimal(*lo, cfg.precision), to_decimal(*hi, cfg.precision), exact});
  }
  out.json = Json{{"angles", entries},
                  {"note", "membership does not depend on t: every flow parameter t in [0, 2) has the same T-set"}};
  return out;
}

// ---------------------------------------------------------------- separate

inline Output cmd_separate(RunConfig const& cfg, std::string const& a1_text, std::string const& a2_text,
                           std::size_t state_depth, std::size_t time_depth, std::optional<std::size_t> n_max_opt,
                           std::uint64_t seed) {
  auto const p1 = parse_param(a1_text, "a1");
  auto const p2 = parse_param(a2_text, "a2");
  if (p1 == p2) throw usage_error("--a1 and --a2 must differ");
  std::size_t const n_max = n_max_opt.value_or(state_depth + 4);
  if (n_max < state_depth) throw usage_error("--n-max must be at least --state-depth");
  check_depth(cfg, std::max(cfg.depth, state_depth));
  std::mt19937_64 rng(seed);
  auto const stabilized = [&](BernoulliParam const& p) {
    auto const phi = random_suspension_state(p, state_depth, time_depth, rng);
    auto const rows = flow_limit_table(phi, n_max, std::max(cfg.depth, state_depth));
    auto const& last = rows.back();
    if (!last.stabilized) throw std::logic_error("flow table did not stabilize");
    return last.interval.lo;
  };
  Rational const t1 = stabilized(p1);
  Rational const t2 = stabilized(p2);
  Rational const gap = abs(t1 - t2);
  bool const ok = sgn(gap) != 0 && gap == abs(4 * p1.a() - 4 * p2.a());
  Output out;
  out.json = Json{{"a1", to_string(p1.a())},     {"a2", to_string(p2.a())},
                  {"t1", exact_and_decimal(t1, cfg.precision)},
                  {"t2", exact_and_decimal(t2, cfg.precision)},
                  {"gap", exact_and_decimal(gap, cfg.precision)},
                  {"state_depth", state_depth}, {"time_depth", time_depth}, {"n_max", n_max},
                  {"separated", ok}};
  out.table.columns = {"quantity", "exact", "decimal"};
  out.table.rows.push_back({"t1", to_string(t1), to_decimal(t1, cfg.precision)});
  out.table.rows.push_back({"t2", to_string(t2), to_decimal(t2, cfg.precision)});
  out.table.rows.push_back({"gap", to_string(gap), to_decimal(gap, cfg.precision)});
  out.code = ok ? kOk : kVerificationFailed;
  return out;
}

// ---------------------------------------------------------------- oracle

inline Output cmd_oracle(RunConfig const& cfg, std::string const& a_text, std::optional<std::string> const& path,
                         std::size_t state_depth, std::size_t count, std::size_t m_max, std::uint64_t seed) {
  check_depth(cfg, cfg.depth);
  std::vector<CylinderState> states;
  if (path) {
    auto const state = state_from_json(read_json_file(*path));
    auto const* phi = std::get_if<CylinderState>(&state);
    if (!phi) throw usage_error("oracle takes a cylinder state file");
    states.push_back(*phi);
  } else {
    auto const param = parse_param(a_text);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) states.push_back(random_state(param, state_depth, rng));
  }
  Output out;
  out.table.columns = {"state", "m", "depth", "engine_lo", "engine_hi", "oracle_lo", "oracle_hi", "intersect",
                       "width_ok"};
  bool all_ok = true;
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto const& phi = states[s];
    if (cfg.depth < std::max(phi.depth(), m_max + 1)) {
      throw usage_error("--depth must be at least max(state depth, m-max + 1)");
    }
    for (std::size_t m = 0; m <= m_max; ++m) {
      auto const engine = tv_pushforward_pow2(phi, m, cfg.depth);
      auto const oracle = brute_force_tv_pow2(phi, m, cfg.depth);
      Rational const width_bound =
          2 * pow(phi.param().one_minus_a(), static_cast<std::int64_t>(cfg.depth - m));
      bool const meet = engine.intersects(oracle);
      bool const widths = engine.width() <= width_bound && oracle.width() <= width_bound;
      all_ok = all_ok && meet;
      out.table.rows.push_back({s, m, cfg.depth, to_decimal(engine.lo, cfg.precision),
                                to_decimal(engine.hi, cfg.precision), to_decimal(oracle.lo, cfg.precision),
                                to_decimal(oracle.hi, cfg.precision), meet, widths});
    }
  }
  out.json = Json{{"rows", out.table.json()}, {"verdict", all_ok ? "pass" : "fail"}};
  out.code = all_ok ? kOk : kVerificationFailed;
  return out;
}

// ---------------------------------------------------------------- driver

inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact dyadic odometer and suspension flow engine"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", cfg.precision, "Decimal digits in rendered output")->check(CLI::Range(1, 200));
  app.add_option("--depth", cfg.depth, "Working depth D");
  app.add_option("--max-depth", cfg.depth_cap, "Hard cap on the working depth")->check(CLI::Range(1, 24));
  app.add_option("--out", cfg.out_path, "Write output to this path");

  auto* lemma = app.add_subcommand("lemma", "||nu_a o sigma - nu_a|| = 2 - 4a and the Radon-Nikodym integral");
  std::string a_text;
  std::size_t terms = 16;
  lemma->add_option("--a", a_text, "Bernoulli parameter p/q in (0, 1/2]")->required();
  lemma->add_option("--terms", terms, "K_n terms in the partial Radon-Nikodym integral")->check(CLI::Range(1, 4096));

  auto* converge = app.add_subcommand("converge", "Intervals for ||phi o sigma^(2^n) - phi|| from a state file");
  std::string state_path;
  std::size_t n_max = 6;
  std::optional<std::string> a_check;
  converge->add_option("--state", state_path, "Cylinder or suspension state JSON")->required();
  converge->add_option("--n-max", n_max, "Largest exponent n");
  converge->add_option("--a", a_check, "Expected parameter (must match the file)");

  auto* eigen = app.add_subcommand("eigen", "Eigen-unitaries u_0 and their flow identities");
  std::size_t eigen_n = 1;
  std::uint64_t eigen_k = 0;
  bool eigen_susp = false;
  std::vector<std::string> s_items{"1"};
  eigen->add_option("--n", eigen_n, "Block depth n")->required();
  eigen->add_option("--k", eigen_k, "Character index k, 0 <= k < 2^n")->required();
  eigen->add_flag("--suspension", eigen_susp, "Also check theta_s u = e^{i tau s} u");
  eigen->add_option("--s", s_items, "Flow times (comma separated rationals)")->delimiter(',')->allow_extra_args(false);

  auto* tinv = app.add_subcommand("tinv", "Dyadic membership of angles tau = 2 pi p/q");
  std::vector<std::string> tau_items;
  tinv->add_option("--tau", tau_items, "Angles p/q (comma separated or repeated)")->required()->allow_extra_args(false);

  auto* separate = app.add_subcommand("separate", "Stabilized flow limits for two parameters");
  std::string a1_text, a2_text;
  std::size_t sep_depth = 2, sep_time_depth = 1;
  std::optional<std::size_t> sep_n_max;
  std::uint64_t seed = 1;
  separate->add_option("--a1", a1_text, "First parameter")->required();
  separate->add_option("--a2", a2_text, "Second parameter")->required();
  separate->add_option("--state-depth", sep_depth, "Base depth of the test states")->check(CLI::Range(0, 12));
  separate->add_option("--time-depth", sep_time_depth, "Dyadic cells exponent m")->check(CLI::Range(0, 6));
  separate->add_option("--n-max", sep_n_max, "Largest exponent n");
  separate->add_option("--seed", seed, "Seed for the test states");

  auto* oracle = app.add_subcommand("oracle", "Cross-check carry resolution against the rotation oracle");
  std::string oracle_a = "1/3";
  std::optional<std::string> oracle_state;
  std::size_t oracle_depth = 4, oracle_count = 5, oracle_m_max = 3;
  oracle->add_option("--a", oracle_a, "Parameter for random states");
  oracle->add_option("--state", oracle_state, "Check this cylinder state instead of random ones");
  oracle->add_option("--state-depth", oracle_depth, "Depth of random states")->check(CLI::Range(0, 12));
  oracle->add_option("--count", oracle_count, "Number of random states");
  oracle->add_option("--m-max", oracle_m_max, "Largest exponent m");
  oracle->add_option("--seed", seed, "Seed for random states");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const&) {
    out << app.help();
    return kOk;
  } catch (CLI::ParseError const& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;

  Output result;
  try {
    if (*lemma) {
      result = cmd_lemma(cfg, a_text, terms);
    } else if (*converge) {
      result = cmd_converge(cfg, state_path, n_max, a_check);
    } else if (*eigen) {
      result = cmd_eigen(cfg, eigen_n, eigen_k, eigen_susp, s_items);
    } else if (*tinv) {
      result = cmd_tinv(cfg, tau_items);
    } else if (*separate) {
      result = cmd_separate(cfg, a1_text, a2_text, sep_depth, sep_time_depth, sep_n_max, seed);
    } else if (*oracle) {
      result = cmd_oracle(cfg, oracle_a, oracle_state, oracle_depth, oracle_count, oracle_m_max, seed);
    }
  } catch (malformed_input const& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (invalid_state const& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (usage_error const& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (std::domain_error const& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (std::invalid_argument const& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::string const text = cfg.format == Format::csv ? result.table.csv() : result.json.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out_path);
    if (!file) {
      err << "error: cannot write '" << cfg.out_path << "'\n";
      return kUsage;
    }
    file << text;
  }
  return result.code;
}

}  // namespace dyadic::cli
