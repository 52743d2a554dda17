// Command-line surface for the juggling chain library: exact stationary
// tables, partition functions, verification suite, seeded simulation, and
// the random-matrix projection report. JSON output by default, CSV on
// request; exact mode prints rationals as strings and never emits floats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rjug/errors.hpp"
#include "rjug/imrjmc.hpp"
#include "rjug/irjmc.hpp"
#include "rjug/matrixmodel.hpp"
#include "rjug/mrjmc.hpp"
#include "rjug/numerics.hpp"
#include "rjug/oracle.hpp"
#include "rjug/rjmc.hpp"
#include "rjug/states.hpp"

using nlohmann::ordered_json;
using namespace rjug;

namespace {

constexpr std::size_t kTableCap = 100000;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string chain;
  int m = 0;
  int b = 0;
  std::vector<int> content;
  std::vector<Rat> x;
  std::vector<Rat> s;
  std::vector<Rat> alpha;
  long long q = 0;
  bool knutson = false;
  std::string mode = "exact";
  std::uint64_t seed = 0;
  long long steps = 10000;
  long long burnin = 1000;
  long long cutoff = 12;
  std::string format = "json";
  std::string out;
  bool perturb = false;
};

struct Flags {
  std::optional<std::string> chain, content, x, s, alpha, mode, format, out, config;
  std::optional<int> m, b;
  std::optional<long long> q, steps, burnin, cutoff;
  std::optional<std::uint64_t> seed;
  bool knutson = false;
  bool perturb = false;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<Rat> parse_rat_list(const std::string& text, const char* what) {
  std::vector<Rat> out;
  for (const std::string& p : split_commas(text)) {
    if (p.empty()) throw ParseError(std::string(what) + ": empty entry in list");
    out.push_back(rat_from_string(p));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const std::string& p : split_commas(text)) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(p, &pos);
      if (pos != p.size()) throw std::invalid_argument(p);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(std::string(what) + ": bad integer '" + p + "'");
    }
  }
  return out;
}

// Config-file values may be strings ("1/2,1/3"), numbers, or arrays; all are
// normalized to the comma-joined string form the flags use.
std::string json_to_list_string(const ordered_json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) {
      if (!joined.empty()) joined += ",";
      if (e.is_string()) {
        joined += e.get<std::string>();
      } else if (e.is_number_integer()) {
        joined += std::to_string(e.get<long long>());
      } else {
        throw ParseError("config key '" + key + "': array entries must be strings or integers");
      }
    }
    return joined;
  }
  throw ParseError("config key '" + key + "': expected string, integer, or array");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "chain") {
      cfg.chain = value.get<std::string>();
    } else if (key == "m") {
      cfg.m = value.is_string() ? std::stoi(value.get<std::string>()) : value.get<int>();
    } else if (key == "b") {
      cfg.b = value.is_string() ? std::stoi(value.get<std::string>()) : value.get<int>();
    } else if (key == "content") {
      cfg.content = parse_int_list(json_to_list_string(value, key), "content");
    } else if (key == "x") {
      cfg.x = parse_rat_list(json_to_list_string(value, key), "x");
    } else if (key == "s") {
      cfg.s = parse_rat_list(json_to_list_string(value, key), "s");
    } else if (key == "alpha") {
      cfg.alpha = parse_rat_list(json_to_list_string(value, key), "alpha");
    } else if (key == "q") {
      cfg.q = value.is_string() ? std::stoll(value.get<std::string>()) : value.get<long long>();
    } else if (key == "knutson") {
      cfg.knutson = value.get<bool>();
    } else if (key == "mode") {
      cfg.mode = value.get<std::string>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "steps") {
      cfg.steps = value.get<long long>();
    } else if (key == "burnin") {
      cfg.burnin = value.get<long long>();
    } else if (key == "cutoff") {
      cfg.cutoff = value.get<long long>();
    } else if (key == "format") {
      cfg.format = value.get<std::string>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else {
      throw ParseError("config file: unknown key '" + key + "'");
    }
  }
}

RunConfig make_config(const Flags& f) {
  RunConfig cfg;
  if (f.config) apply_config_file(cfg, *f.config);
  if (f.chain) cfg.chain = *f.chain;
  if (f.m) cfg.m = *f.m;
  if (f.b) cfg.b = *f.b;
  if (f.content) cfg.content = parse_int_list(*f.content, "content");
  if (f.x) cfg.x = parse_rat_list(*f.x, "x");
  if (f.s) cfg.s = parse_rat_list(*f.s, "s");
  if (f.alpha) cfg.alpha = parse_rat_list(*f.alpha, "alpha");
  if (f.q) cfg.q = *f.q;
  if (f.knutson) cfg.knutson = true;
  if (f.mode) cfg.mode = *f.mode;
  if (f.seed) cfg.seed = *f.seed;
  if (f.steps) cfg.steps = *f.steps;
  if (f.burnin) cfg.burnin = *f.burnin;
  if (f.cutoff) cfg.cutoff = *f.cutoff;
  if (f.format) cfg.format = *f.format;
  if (f.out) cfg.out = *f.out;
  cfg.perturb = f.perturb;
  if (cfg.mode != "exact" && cfg.mode != "float") {
    throw ParseError("mode must be 'exact' or 'float'");
  }
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ParseError("format must be 'json' or 'csv'");
  }
  return cfg;
}

ordered_json rat_list_json(const std::vector<Rat>& v) {
  ordered_json a = ordered_json::array();
  for (const Rat& r : v) a.push_back(rat_to_string(r));
  return a;
}

ordered_json echo_config(const RunConfig& cfg) {
  ordered_json j;
  if (!cfg.chain.empty()) j["chain"] = cfg.chain;
  if (cfg.m > 0) j["m"] = cfg.m;
  if (cfg.b > 0) j["b"] = cfg.b;
  if (!cfg.content.empty()) j["content"] = cfg.content;
  if (!cfg.x.empty()) j["x"] = rat_list_json(cfg.x);
  if (!cfg.s.empty()) j["s"] = rat_list_json(cfg.s);
  if (!cfg.alpha.empty()) j["alpha"] = rat_list_json(cfg.alpha);
  if (cfg.q > 0) j["q"] = cfg.q;
  if (cfg.knutson) j["knutson"] = true;
  j["mode"] = cfg.mode;
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["burnin"] = cfg.burnin;
  j["cutoff"] = cfg.cutoff;
  j["format"] = cfg.format;
  if (cfg.perturb) j["perturb"] = true;
  return j;
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

std::string csv_field(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

void write_atomically(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
    os << data;
    if (!os) throw std::runtime_error("write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

void emit(const RunConfig& cfg, const std::string& data) {
  if (cfg.out.empty()) {
    std::cout << data;
  } else {
    write_atomically(cfg.out, data);
  }
}

// Probability cell: exact mode keeps the rational string, float mode a double.
ordered_json prob_json(const RunConfig& cfg, const Rat& p) {
  if (cfg.mode == "float") return to_double(p);
  return rat_to_string(p);
}

std::string prob_csv(const RunConfig& cfg, const Rat& p) {
  if (cfg.mode == "float") return double_to_string(to_double(p));
  return rat_to_string(p);
}

// ---------------------------------------------------------------------------
// Chain construction
// ---------------------------------------------------------------------------

ProbVec resolve_x(const RunConfig& cfg, int b, const char* chain) {
  if (cfg.knutson) {
    if (cfg.q < 2) throw ParseError("--knutson needs --q");
    return knutson_weights(cfg.q, b);
  }
  if (cfg.x.empty()) {
    throw ParseError(std::string(chain) + " needs --x (b+1 values) or --knutson with --q");
  }
  return ProbVec{cfg.x};
}

RjmcChain build_rjmc(const RunConfig& cfg) {
  if (cfg.m < 1) throw ParseError("rjmc needs --m >= 1");
  if (cfg.b < 0 || cfg.b > cfg.m) throw ParseError("rjmc needs 0 <= b <= m");
  return RjmcChain(cfg.m, cfg.b, resolve_x(cfg, cfg.b, "rjmc"));
}

IrjmcChain build_irjmc(const RunConfig& cfg) {
  if (cfg.b < 1) throw ParseError("irjmc needs --b >= 1");
  return IrjmcChain(cfg.b, resolve_x(cfg, cfg.b, "irjmc"));
}

MrjmcChain build_mrjmc(const RunConfig& cfg) {
  if (cfg.content.empty()) throw ParseError("mrjmc needs --content");
  if (cfg.knutson) throw ParseError("--knutson does not apply to mrjmc (it has s, not x)");
  int b = 0;
  for (int c : cfg.content) b += c;
  if (static_cast<int>(cfg.s.size()) != b) throw ParseError("mrjmc needs --s with b values");
  return MrjmcChain(cfg.content, ProbVec{cfg.s}, cfg.alpha);
}

ImrjmcChain build_imrjmc(const RunConfig& cfg) {
  if (cfg.content.empty()) throw ParseError("imrjmc needs --content");
  if (cfg.knutson) {
    if (cfg.q < 2) throw ParseError("--knutson needs --q");
    return knutson_chain(cfg.content, cfg.q);
  }
  int b = 0;
  for (int c : cfg.content) b += c;
  return ImrjmcChain(cfg.content, resolve_x(cfg, b, "imrjmc"), cfg.alpha);
}

void check_table_cap(std::size_t n) {
  if (n > kTableCap) {
    throw StateSpaceTooLarge("table would have " + std::to_string(n) +
                             " rows, cap is " + std::to_string(kTableCap));
  }
}

// ---------------------------------------------------------------------------
// stationary
// ---------------------------------------------------------------------------

struct StationaryTable {
  std::vector<std::pair<std::string, Rat>> rows;
  Rat total = 0;
  bool has_tail = false;
  Rat tail = 0;
};

StationaryTable stationary_table(const RunConfig& cfg) {
  StationaryTable t;
  if (cfg.chain == "rjmc") {
    RjmcChain chain = build_rjmc(cfg);
    std::vector<BinaryWord> words = enumerate_binary_words(chain.m, chain.b);
    check_table_cap(words.size());
    for (const BinaryWord& w : words) t.rows.emplace_back(to_string(w), stationary(chain, w));
  } else if (cfg.chain == "irjmc") {
    IrjmcChain chain = build_irjmc(cfg);
    std::vector<BallTuple> tuples = enumerate_tuples(chain.b, cfg.cutoff);
    check_table_cap(tuples.size());
    for (const BallTuple& n : tuples) t.rows.emplace_back(to_string(n), stationary(chain, n));
    t.has_tail = true;
    t.tail = tail_mass_beyond(chain, cfg.cutoff);
  } else if (cfg.chain == "mrjmc") {
    MrjmcChain chain = build_mrjmc(cfg);
    std::vector<Multipermutation> words = enumerate_multipermutations(chain.content);
    check_table_cap(words.size());
    for (const Multipermutation& w : words) t.rows.emplace_back(to_string(w), stationary(chain, w));
  } else if (cfg.chain == "imrjmc") {
    ImrjmcChain chain = build_imrjmc(cfg);
    std::vector<LabeledConfig> states = enumerate_states(chain.content, cfg.cutoff);
    check_table_cap(states.size());
    for (const LabeledConfig& s : states) t.rows.emplace_back(to_string(s), stationary(chain, s));
    t.has_tail = true;
    t.tail = tail_mass_beyond(chain, cfg.cutoff);
  } else {
    throw ParseError("stationary needs --chain rjmc|irjmc|mrjmc|imrjmc");
  }
  for (const auto& [_, p] : t.rows) t.total += p;
  return t;
}

int cmd_stationary(const RunConfig& cfg) {
  StationaryTable t = stationary_table(cfg);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "state,probability\n";
    for (const auto& [s, p] : t.rows) os << csv_field(s) << "," << csv_field(prob_csv(cfg, p)) << "\n";
    if (t.has_tail) os << csv_field("(beyond cutoff)") << "," << csv_field(prob_csv(cfg, t.tail)) << "\n";
    emit(cfg, os.str());
    return 0;
  }
  ordered_json j;
  j["command"] = "stationary";
  j["config"] = echo_config(cfg);
  ordered_json rows = ordered_json::array();
  for (const auto& [s, p] : t.rows) {
    rows.push_back(ordered_json{{"state", s}, {"probability", prob_json(cfg, p)}});
  }
  j["rows"] = std::move(rows);
  j["total"] = prob_json(cfg, t.total);
  if (t.has_tail) j["tail_beyond_cutoff"] = prob_json(cfg, t.tail);
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------------

int cmd_partition(const RunConfig& cfg) {
  Rat value;
  std::vector<Rat> factors;
  if (cfg.chain == "irjmc") {
    IrjmcChain chain = build_irjmc(cfg);
    factors = partition_factors(chain);
    value = partition(chain);
  } else if (cfg.chain == "mrjmc") {
    if (cfg.content.empty()) throw ParseError("mrjmc needs --content");
    factors = partition_factors(cfg.content, cfg.alpha);
    value = partition(cfg.content, cfg.alpha);
  } else if (cfg.chain == "imrjmc") {
    ImrjmcChain chain = build_imrjmc(cfg);
    factors = partition_factors(chain);
    value = partition(chain);
  } else {
    throw ParseError("partition needs --chain irjmc|mrjmc|imrjmc");
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "name,value\n";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      os << "factor_" << (i + 1) << "," << csv_field(prob_csv(cfg, factors[i])) << "\n";
    }
    os << "value," << csv_field(prob_csv(cfg, value)) << "\n";
    emit(cfg, os.str());
    return 0;
  }
  ordered_json j;
  j["command"] = "partition";
  j["config"] = echo_config(cfg);
  ordered_json fac = ordered_json::array();
  for (const Rat& f : factors) fac.push_back(prob_json(cfg, f));
  j["factors"] = std::move(fac);
  j["value"] = prob_json(cfg, value);
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

// Runs the chain, optionally capturing the trajectory, and returns the
// summary JSON. The stationary lookup is used for the TV distance when the
// chain parameters admit one.
template <class State, class StepFn, class PiFn>
ordered_json run_simulation(const RunConfig& cfg, State init, StepFn step, PiFn pi,
                            std::string* trajectory_csv) {
  if (cfg.steps <= cfg.burnin) throw ParseError("simulate needs --steps > --burnin");
  Rng rng(cfg.seed);
  std::map<State, long long> counts;
  std::ostringstream traj;
  if (trajectory_csv) traj << "step,state\n" << 0 << "," << csv_field(to_string(init)) << "\n";
  State current = init;
  for (long long t = 1; t <= cfg.steps; ++t) {
    current = sample_kernel(step(current), rng);
    if (trajectory_csv) traj << t << "," << csv_field(to_string(current)) << "\n";
    if (t > cfg.burnin) ++counts[current];
  }
  if (trajectory_csv) *trajectory_csv = traj.str();

  long long total = cfg.steps - cfg.burnin;
  ordered_json visited = ordered_json::array();
  for (const auto& [state, c] : counts) {
    visited.push_back(ordered_json{{"state", to_string(state)},
                                   {"count", c},
                                   {"frequency", prob_json(cfg, rat_ll(c, total))}});
  }

  ordered_json j;
  j["command"] = "simulate";
  j["config"] = echo_config(cfg);
  j["samples"] = total;
  j["visited"] = std::move(visited);

  // TV distance: half the visited discrepancy plus half the unvisited mass.
  try {
    Rat tv = 0;
    Rat seen_mass = 0;
    for (const auto& [state, c] : counts) {
      Rat p = pi(state);
      seen_mass += p;
      Rat d = rat_ll(c, total) - p;
      tv += d < 0 ? -d : d;
    }
    tv = (tv + (1 - seen_mass)) / 2;
    j["tv_distance"] = prob_json(cfg, tv);
  } catch (const DegenerateParameters&) {
    // No stationary law to compare against; omit the field.
  }
  return j;
}

ordered_json projection_report_json(const RunConfig& cfg, const ProjectionReport& r) {
  ordered_json j;
  j["command"] = "simulate";
  j["config"] = echo_config(cfg);
  ordered_json first = ordered_json::array();
  for (const MoveClassStat& s : r.first_projection) {
    first.push_back(ordered_json{{"move", s.name},
                                 {"count", s.count},
                                 {"expected_p", s.expected_p},
                                 {"z", s.z}});
  }
  ordered_json second = ordered_json::array();
  for (const KernelCellStat& c : r.second_projection) {
    second.push_back(ordered_json{{"source", c.source},
                                  {"target", c.target},
                                  {"source_visits", c.source_visits},
                                  {"count", c.count},
                                  {"expected_p", c.expected_p},
                                  {"z", c.z}});
  }
  j["report"] = ordered_json{{"steps", r.steps},
                             {"classified_steps", r.classified_steps},
                             {"visit_threshold", r.visit_threshold},
                             {"first_projection", std::move(first)},
                             {"frequent_sources", r.frequent_sources},
                             {"second_projection", std::move(second)},
                             {"unexpected_transition", r.unexpected_transition},
                             {"max_abs_z", r.max_abs_z},
                             {"all_within_4sigma", r.all_within(4.0)}};
  return j;
}

int cmd_simulate(const RunConfig& cfg) {
  if (cfg.chain == "matrixmodel") {
    if (cfg.b < 1) throw ParseError("matrixmodel needs --b >= 1");
    if (cfg.q < 2) throw ParseError("matrixmodel needs --q (a prime)");
    // z-scores are inherently floating point; the report always uses them.
    RunConfig shown = cfg;
    shown.mode = "float";
    ProjectionReport report = empirical_projection_check(cfg.b, cfg.q, cfg.steps, cfg.seed);
    emit(cfg, projection_report_json(shown, report).dump(2) + "\n");
    return 0;
  }

  std::string trajectory;
  std::string* capture = cfg.out.empty() ? nullptr : &trajectory;
  ordered_json summary;
  if (cfg.chain == "rjmc") {
    RjmcChain chain = build_rjmc(cfg);
    BinaryWord init(static_cast<std::size_t>(chain.m), 0);
    summary = run_simulation(
        cfg, init, [&](const BinaryWord& w) { return step_distribution(chain, w); },
        [&](const BinaryWord& w) { return stationary(chain, w); }, capture);
  } else if (cfg.chain == "irjmc") {
    IrjmcChain chain = build_irjmc(cfg);
    BallTuple init;
    for (int i = 1; i <= chain.b; ++i) init.push_back(i);
    if (!chain.recurrent()) {
      std::fprintf(stderr, "warning: x_b = 0, the chain is transient; simulating anyway\n");
    }
    summary = run_simulation(
        cfg, init, [&](const BallTuple& n) { return step_distribution(chain, n); },
        [&](const BallTuple& n) -> Rat {
          if (!chain.recurrent()) throw DegenerateParameters("transient");
          return stationary(chain, n);
        },
        capture);
  } else if (cfg.chain == "mrjmc") {
    MrjmcChain chain = build_mrjmc(cfg);
    std::vector<int> word;
    for (std::size_t i = 0; i < chain.content.size(); ++i) {
      for (int k = 0; k < chain.content[i]; ++k) word.push_back(static_cast<int>(i) + 1);
    }
    Multipermutation init{word, chain.content};
    if (!chain.proper()) {
      std::fprintf(stderr, "warning: degenerate parameters, the walk may be reducible; "
                           "simulating anyway\n");
    }
    summary = run_simulation(
        cfg, init, [&](const Multipermutation& t) { return step_distribution(chain, t); },
        [&](const Multipermutation& t) { return stationary(chain, t); }, capture);
  } else if (cfg.chain == "imrjmc") {
    ImrjmcChain chain = build_imrjmc(cfg);
    std::vector<int> word;
    for (std::size_t i = 0; i < chain.content.size(); ++i) {
      for (int k = 0; k < chain.content[i]; ++k) word.push_back(static_cast<int>(i) + 1);
    }
    BallTuple pos;
    for (int i = 1; i <= chain.b(); ++i) pos.push_back(i);
    LabeledConfig init{Multipermutation{word, chain.content}, pos};
    if (!chain.proper()) {
      std::fprintf(stderr, "warning: degenerate parameters, the walk may be reducible or "
                           "transient; simulating anyway\n");
    }
    summary = run_simulation(
        cfg, init, [&](const LabeledConfig& s) { return step_distribution(chain, s); },
        [&](const LabeledConfig& s) { return stationary(chain, s); }, capture);
  } else {
    throw ParseError("simulate needs --chain rjmc|irjmc|mrjmc|imrjmc|matrixmodel");
  }

  if (!cfg.out.empty()) {
    write_atomically(cfg.out, trajectory);
    summary["trajectory_file"] = cfg.out;
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string params;
  Rat max_residual = 0;
  bool pass = true;
  bool exact = true;  // false when the check is boolean rather than a residual
};

// Deterministic proper parameters for the suite.
ProbVec geometric_x(int b) {
  std::vector<Rat> w;
  Rat total = 0;
  for (int i = 0; i <= b; ++i) {
    w.push_back(rat_pow(Rat(1, 2), i + 1));
    total += w.back();
  }
  w[static_cast<std::size_t>(b)] += 1 - total;
  return ProbVec{w};
}

ProbVec uniform_s(int b) {
  return ProbVec{std::vector<Rat>(static_cast<std::size_t>(b), Rat(1, b))};
}

std::vector<Rat> default_alpha(int k) {
  std::vector<Rat> a;
  for (int i = 1; i <= k; ++i) a.push_back(Rat(1, i + 2));
  return a;
}

void track(Check& c, const Rat& residual) {
  Rat r = residual < 0 ? Rat(-residual) : residual;
  if (r > c.max_residual) c.max_residual = r;
  if (r != 0) c.pass = false;
}

Check check_rjmc_formula_vs_oracle() {
  Check c{"rjmc formula vs oracle", "(m,b) up to (5,3), geometric x", 0, true, true};
  for (auto [m, b] : std::vector<std::pair<int, int>>{
           {1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}, {5, 3}}) {
    RjmcChain chain(m, b, geometric_x(b));
    std::vector<BinaryWord> words = enumerate_binary_words(m, b);
    DenseKernel M = build_matrix(
        words, [&](const BinaryWord& w) { return step_distribution(chain, w); },
        [](const BinaryWord& w) { return to_string(w); });
    std::vector<Rat> sol = solve_stationary(M);
    Rat total = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      Rat pi = stationary(chain, words[i]);
      total += pi;
      track(c, sol[i] - pi);
    }
    track(c, total - 1);
  }
  return c;
}

Check check_rjmc_ultrafast() {
  Check c{"rjmc finite-step convergence", "(m,b) up to (5,3), geometric x", 0, true, false};
  for (auto [m, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 2}, {4, 3}, {5, 3}}) {
    RjmcChain chain(m, b, geometric_x(b));
    UltrafastReport r = verify_ultrafast(chain);
    if (!r.idempotent || !r.rows_match_formula) c.pass = false;
  }
  return c;
}

Check check_rjmc_lumping() {
  Check c{"rjmc shift-register projection", "", 0, true, false};
  RjmcChain chain(3, 2, geometric_x(2));
  LumpingReport r = verify_lumping(chain);
  c.params = std::to_string(r.enriched_states) + " enriched states onto " +
             std::to_string(r.word_states) + " words, (m,b)=(3,2)";
  if (!r.kernels_commute || !r.weights_project) c.pass = false;
  return c;
}

Check check_rjmc_pair_identity() {
  Check c{"rjmc tail-pair identity", "(m,b)=(4,2), geometric x", 0, true, false};
  RjmcChain chain(4, 2, geometric_x(2));
  for (const BinaryWord& v : enumerate_binary_words(4, 2)) {
    if (v.front() != 0) continue;
    try {
      sum_pair_identity(chain, v);
    } catch (const std::logic_error&) {
      c.pass = false;
    }
  }
  return c;
}

Check check_irjmc_master() {
  Check c{"irjmc master equation", "b <= 3, states with n_b <= 8", 0, true, true};
  for (int b = 1; b <= 3; ++b) {
    IrjmcChain chain(b, geometric_x(b));
    for (const BallTuple& n : enumerate_tuples(b, 8)) {
      track(c, master_residual_truncated(chain, n, 8));
    }
  }
  return c;
}

Check check_irjmc_partition_tail() {
  Check c{"irjmc partition vs truncated sum", "b <= 3, window n_b <= 25", 0, true, true};
  for (int b = 1; b <= 3; ++b) {
    IrjmcChain chain(b, geometric_x(b));
    Rat mass = 0;
    for (const BallTuple& n : enumerate_tuples(b, 25)) mass += stationary(chain, n);
    track(c, mass + tail_mass_beyond(chain, 25) - 1);
  }
  return c;
}

Check check_irjmc_knutson() {
  Check c{"irjmc geometric specialization", "q in {2,3}, b <= 3, n_b <= 8", 0, true, true};
  for (long long q : {2LL, 3LL}) {
    for (int b = 1; b <= 3; ++b) {
      IrjmcChain chain(b, knutson_weights(q, b));
      Rat prefactor = 1;
      for (int i = 1; i <= b; ++i) prefactor *= 1 - rat_pow(rat_ll(1, q), i);
      for (const BallTuple& n : enumerate_tuples(b, 8)) {
        long long ell = 0;
        for (int i = 0; i < b; ++i) ell += n[static_cast<std::size_t>(i)] - (i + 1);
        track(c, stationary(chain, n) - rat_pow(rat_ll(1, q), ell) * prefactor);
      }
    }
  }
  return c;
}

const std::vector<std::vector<int>>& small_contents() {
  static const std::vector<std::vector<int>> contents{
      {1, 1}, {2, 1}, {1, 2}, {1, 1, 1}, {3}};
  return contents;
}

Check check_mrjmc_formula_vs_oracle(bool perturb) {
  Check c{"mrjmc formula vs oracle", "contents with b <= 3, uniform s, alpha_i = 1/(i+2)",
          0, true, true};
  if (perturb) c.params += ", alpha perturbed on the formula side";
  for (const auto& content : small_contents()) {
    int b = 0;
    for (int v : content) b += v;
    MrjmcChain chain(content, uniform_s(b), default_alpha(b - content.back()));
    std::vector<Multipermutation> words = enumerate_multipermutations(content);
    DenseKernel M = build_matrix(
        words, [&](const Multipermutation& t) { return step_distribution(chain, t); },
        [](const Multipermutation& t) { return to_string(t); });
    std::vector<Rat> sol = solve_stationary(M);

    std::vector<Rat> alpha = chain.alpha;
    if (perturb && !alpha.empty()) alpha[0] += Rat(1, 97);
    Rat z = partition(content, alpha);
    for (std::size_t i = 0; i < words.size(); ++i) {
      track(c, sol[i] - alpha_weight(words[i], alpha) / z);
    }
  }
  return c;
}

Check check_mrjmc_flow_refinements() {
  Check c{"mrjmc stationary flow refinements", "contents with b <= 3, all (tau, t, r)",
          0, true, true};
  for (const auto& content : small_contents()) {
    int b = 0;
    for (int v : content) b += v;
    MrjmcChain chain(content, uniform_s(b), default_alpha(b - content.back()));
    for (const Multipermutation& tau : enumerate_multipermutations(content)) {
      for (int t = 1; t <= b; ++t) {
        for (int r = 1; r <= t; ++r) {
          RefineResiduals res = verify_refine_lemmas(chain, tau, t, r);
          if (r == 1) track(c, res.start_group);
          track(c, res.last_jump_group);
        }
      }
    }
  }
  return c;
}

Check check_mrjmc_partition_recursion() {
  Check c{"mrjmc partition recursion vs brute force", "contents with b <= 4", 0, true, true};
  std::vector<std::vector<int>> contents{{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}, {1, 2, 1}, {1, 1, 1, 1}};
  for (const auto& content : contents) {
    int b = 0;
    for (int v : content) b += v;
    std::vector<Rat> alpha = default_alpha(b - content.back());
    Rat brute = 0;
    for (const Multipermutation& tau : enumerate_multipermutations(content)) {
      brute += alpha_weight(tau, alpha);
    }
    track(c, partition(content, alpha) - brute);
  }
  return c;
}

Check check_imrjmc_master() {
  Check c{"imrjmc master equation", "contents (1,1) and (2,1), n_b <= 6", 0, true, true};
  for (const auto& content : std::vector<std::vector<int>>{{1, 1}, {2, 1}}) {
    int b = 0;
    for (int v : content) b += v;
    ImrjmcChain chain(content, geometric_x(b), default_alpha(b - content.back()));
    for (const LabeledConfig& state : enumerate_states(content, 6)) {
      track(c, master_residual_truncated(chain, state, 6));
    }
  }
  return c;
}

Check check_imrjmc_separability() {
  Check c{"imrjmc product-form separability", "contents (1,1) and (2,1), n_b <= 6",
          0, true, true};
  for (const auto& content : std::vector<std::vector<int>>{{1, 1}, {2, 1}}) {
    int b = 0;
    for (int v : content) b += v;
    ImrjmcChain chain(content, geometric_x(b), default_alpha(b - content.back()));
    IrjmcChain pos_chain(b, geometric_x(b));
    Rat zc = partition(content, chain.alpha);
    Rat gt = gap_total(chain.ps);
    track(c, partition(chain) - zc * gt);
    // Pointwise factorization and the position marginal.
    for (const BallTuple& n : enumerate_tuples(b, 6)) {
      Rat marginal = 0;
      for (const Multipermutation& tau : enumerate_multipermutations(content)) {
        LabeledConfig state{tau, n};
        Rat pi = stationary(chain, state);
        marginal += pi;
        track(c, pi - (alpha_weight(tau, chain.alpha) / zc) * (gap_weight(chain.ps, n) / gt));
      }
      track(c, marginal - stationary(pos_chain, n));
    }
  }
  return c;
}

Check check_imrjmc_degenerate_limits() {
  Check c{"imrjmc degenerate limits", "alpha=0 position kernel; x_0=0 word kernel; b <= 3",
          0, true, true};
  // alpha -> 0: from a sorted word the positions move as the single-species
  // chain and the word never changes.
  {
    std::vector<int> content{1, 2};
    ImrjmcChain chain(content, geometric_x(3), {Rat(0)});
    IrjmcChain pos_chain(3, geometric_x(3));
    Multipermutation sorted = make_multipermutation({1, 2, 2});
    for (const BallTuple& n : enumerate_tuples(3, 5)) {
      std::map<BallTuple, Rat> projected;
      for (const auto& [target, p] : step_distribution(chain, LabeledConfig{sorted, n})) {
        if (target.tau != sorted) {
          c.pass = false;
          continue;
        }
        projected[target.n] += p;
      }
      for (const auto& [np, p] : step_distribution(pos_chain, n)) {
        track(c, projected[np] - p);
        projected.erase(np);
      }
      if (!projected.empty()) c.pass = false;
    }
  }
  // x_0 = 0 with x_i = s_i: the word marginal of every step is the finite
  // multispecies kernel, whatever the positions do.
  {
    std::vector<int> content{2, 1};
    ProbVec s = uniform_s(3);
    std::vector<Rat> x{Rat(0)};
    for (const Rat& v : s.w) x.push_back(v);
    std::vector<Rat> alpha = default_alpha(2);
    ImrjmcChain chain(content, ProbVec{x}, alpha);
    MrjmcChain word_chain(content, s, alpha);
    for (const Multipermutation& tau : enumerate_multipermutations(content)) {
      for (const BallTuple& n : enumerate_tuples(3, 5)) {
        std::map<Multipermutation, Rat> projected;
        for (const auto& [target, p] : step_distribution(chain, LabeledConfig{tau, n})) {
          projected[target.tau] += p;
        }
        for (const auto& [word, p] : step_distribution(word_chain, tau)) {
          track(c, projected[word] - p);
          projected.erase(word);
        }
        if (!projected.empty()) c.pass = false;
      }
    }
  }
  return c;
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<Check> checks;
  checks.push_back(check_rjmc_formula_vs_oracle());
  checks.push_back(check_rjmc_ultrafast());
  checks.push_back(check_rjmc_lumping());
  checks.push_back(check_rjmc_pair_identity());
  checks.push_back(check_irjmc_master());
  checks.push_back(check_irjmc_partition_tail());
  checks.push_back(check_irjmc_knutson());
  checks.push_back(check_mrjmc_formula_vs_oracle(cfg.perturb));
  checks.push_back(check_mrjmc_flow_refinements());
  checks.push_back(check_mrjmc_partition_recursion());
  checks.push_back(check_imrjmc_master());
  checks.push_back(check_imrjmc_separability());
  checks.push_back(check_imrjmc_degenerate_limits());

  bool all_pass = true;
  for (const Check& c : checks) all_pass = all_pass && c.pass;

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "name,params,max_residual,pass\n";
    for (const Check& c : checks) {
      os << csv_field(c.name) << "," << csv_field(c.params) << ","
         << csv_field(rat_to_string(c.max_residual)) << "," << (c.pass ? "true" : "false")
         << "\n";
    }
    emit(cfg, os.str());
  } else {
    ordered_json j;
    j["command"] = "verify";
    j["config"] = echo_config(cfg);
    ordered_json arr = ordered_json::array();
    for (const Check& c : checks) {
      arr.push_back(ordered_json{{"name", c.name},
                                 {"params", c.params},
                                 {"max_residual", rat_to_string(c.max_residual)},
                                 {"pass", c.pass}});
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = all_pass;
    emit(cfg, j.dump(2) + "\n");
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact engine for reverse juggling chains and their random-matrix origin"};
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--chain", flags.chain, "rjmc|irjmc|mrjmc|imrjmc|matrixmodel");
    sub->add_option("--m", flags.m, "word length (rjmc)");
    sub->add_option("--b", flags.b, "ball count");
    sub->add_option("--content", flags.content, "letter multiplicities, e.g. 1,1,2");
    sub->add_option("--x", flags.x, "jump weights x_0..x_b, rationals");
    sub->add_option("--s", flags.s, "position weights s_1..s_b, rationals");
    sub->add_option("--alpha", flags.alpha, "pass-over weights, rationals");
    sub->add_option("--q", flags.q, "modulus for geometric weights / field size");
    sub->add_flag("--knutson", flags.knutson, "use the geometric modulus-q weights");
    sub->add_option("--mode", flags.mode, "exact|float (default exact)");
    sub->add_option("--seed", flags.seed, "rng seed (default 0)");
    sub->add_option("--steps", flags.steps, "simulation steps");
    sub->add_option("--burnin", flags.burnin, "discarded prefix steps");
    sub->add_option("--cutoff", flags.cutoff, "position window for infinite chains");
    sub->add_option("--format", flags.format, "json|csv (default json)");
    sub->add_option("--out", flags.out, "output path (default stdout)");
    sub->add_option("--config", flags.config, "JSON config file; flags override");
  };

  CLI::App* stat = app.add_subcommand("stationary", "exact stationary table");
  CLI::App* verify = app.add_subcommand("verify", "run the exact verification suite");
  verify->add_flag("--perturb", flags.perturb, "negative control: perturb one check");
  CLI::App* simulate = app.add_subcommand("simulate", "seeded trajectory + summary");
  CLI::App* part = app.add_subcommand("partition", "partition function and factors");
  for (CLI::App* sub : {stat, verify, simulate, part}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    RunConfig cfg = make_config(flags);
    if (stat->parsed()) return cmd_stationary(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (part->parsed()) return cmd_partition(cfg);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const StateSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
