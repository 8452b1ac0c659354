#pragma once

// End-to-end orchestration: configuration, the construct -> validate ->
// compile -> simulate -> report pipeline, and rendering as comma-separated
// tables or a structured object. Every sampled number is accompanied by its
// exact counterpart; exact columns never depend on shots or seed, and a fixed
// (config, seed) renders byte-identically.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsw/algebra.hpp"
#include "lsw/cascade.hpp"
#include "lsw/errors.hpp"
#include "lsw/inequality.hpp"
#include "lsw/optics.hpp"
#include "lsw/povm.hpp"
#include "lsw/sampling.hpp"

namespace lsw {

enum class OutputFormat { table, object };

struct ExperimentConfig {
  double eta = 0.67;
  std::string axes_spec = "trine";
  std::array<Vec3, 3> axes = trine_axes();
  std::string state = "phi0";
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::table;
};

// ---- configuration parsing ----

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw config_error("trailing characters in " + key + ": '" + v + "'");
    return x;
  } catch (const contract_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("cannot parse " + key + " value '" + v + "'");
  }
}

inline std::uint64_t parse_count(const std::string& v, const std::string& key) {
  // stoull wraps negative input instead of failing
  if (v.find('-') != std::string::npos)
    throw config_error(key + " must be a non-negative integer, got '" + v + "'");
  try {
    size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw config_error("trailing characters in " + key + ": '" + v + "'");
    return static_cast<std::uint64_t>(x);
  } catch (const contract_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("cannot parse " + key + " value '" + v + "'");
  }
}

inline std::vector<double> parse_reals(const std::string& v, char sep, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_real(trim(item), key));
  return out;
}

}  // namespace detail

// axes: "trine" or three semicolon-separated comma triples in the z-x plane
inline void set_axes(ExperimentConfig& cfg, const std::string& value) {
  std::string v = detail::trim(value);
  if (v == "trine") {
    cfg.axes_spec = "trine";
    cfg.axes = trine_axes();
    return;
  }
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ';')) parts.push_back(item);
  if (parts.size() != 3) throw config_error("axes needs 'trine' or three ';'-separated triples");
  for (int k = 0; k < 3; ++k) {
    auto nums = detail::parse_reals(parts[k], ',', "axes");
    if (nums.size() != 3) throw config_error("each axis needs three comma-separated components");
    cfg.axes[k] = {nums[0], nums[1], nums[2]};
  }
  cfg.axes_spec = v;
}

inline void set_format(ExperimentConfig& cfg, const std::string& value) {
  std::string v = detail::trim(value);
  if (v == "table") cfg.format = OutputFormat::table;
  else if (v == "object") cfg.format = OutputFormat::object;
  else throw config_error("format must be 'table' or 'object'");
}

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "eta") cfg.eta = detail::parse_real(value, "eta");
  else if (key == "axes") set_axes(cfg, value);
  else if (key == "state") cfg.state = detail::trim(value);
  else if (key == "shots") cfg.shots = detail::parse_count(value, "shots");
  else if (key == "seed") cfg.seed = detail::parse_count(value, "seed");
  else if (key == "format") set_format(cfg, value);
  else throw config_error("unknown configuration key '" + key + "'");
}

// flat key=value lines; '#' starts a comment; unknown keys are rejected
inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open configuration file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_config_entry(cfg, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
  }
}

inline QubitState resolve_state(const std::string& name) {
  if (name == "phi0") return optimal_state();
  if (name == "H") return QubitState::H();
  if (name == "V") return QubitState::V();
  if (name == "D") return QubitState::D();
  if (name == "R") return QubitState::R();
  auto nums = detail::parse_reals(name, ',', "state");
  if (nums.size() != 4)
    throw config_error("state must be phi0|H|V|D|R or four comma-separated amplitude parts");
  try {
    return QubitState::from_amplitudes({cplx(nums[0], nums[1]), cplx(nums[2], nums[3])});
  } catch (const invalid_state_error& e) {
    throw config_error(std::string("state amplitudes rejected: ") + e.what());
  }
}

inline std::array<JointPovm, 3> build_pairs(const ExperimentConfig& cfg) {
  return {joint_povm(cfg.eta, cfg.axes[0], cfg.axes[1], 1, 2),
          joint_povm(cfg.eta, cfg.axes[1], cfg.axes[2], 2, 3),
          joint_povm(cfg.eta, cfg.axes[0], cfg.axes[2], 1, 3)};
}

// ---- validation ----

struct ValidationCheck {
  std::string name;
  double value = 0.0;      // worst residual observed
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = false;
};

// every structural contract, checked in pipeline order; sampling never runs
// on a configuration that fails here
inline ValidationReport validate_pipeline(const std::array<JointPovm, 3>& pairs,
                                          const std::array<Cascade, 3>& cascades,
                                          const std::array<OpticalCircuit, 3>& circuits,
                                          const std::vector<QubitState>& probes) {
  ValidationReport rep;
  auto add = [&rep](const std::string& name, double value, double tol) {
    rep.checks.push_back({name, value, tol, value <= tol});
  };

  double eigen_viol = 0.0, marg = 0.0, comp = 0.0, rank1 = 0.0;
  for (const JointPovm& G : pairs) {
    Operator2 sum;
    for (int k = 0; k < 4; ++k) {
      auto ev = hermitian_eigenvalues(G.g[k]);
      eigen_viol = std::max({eigen_viol, -ev[1], ev[0] - 1.0});
      rank1 = std::max(rank1, std::abs(det(G.g[k])));
      sum = sum + G.g[k];
    }
    comp = std::max(comp, distance(sum, identity()));
    MarginalReport m = check_marginals(G);
    for (double r : m.residual) marg = std::max(marg, r);
  }
  add("effect_eigenvalues", std::max(eigen_viol, 0.0), tol_psd);
  add("completeness", comp, tol_marginal);
  add("marginal_condition", marg, tol_marginal);
  add("rank1_determinant", rank1, tol_rank);

  double casc = 0.0;
  for (int t = 0; t < 3; ++t) {
    auto eff = cascade_effects(cascades[t]);
    for (int k = 0; k < 4; ++k) casc = std::max(casc, distance(eff[k], pairs[t].g[k]));
  }
  add("cascade_reconstruction", casc, 1e-10);

  double chan = 0.0;
  for (int t = 0; t < 3; ++t)
    for (const QubitState& probe : probes) {
      auto p = circuit_outcome_probabilities(circuits[t], probe);
      for (int k = 0; k < 4; ++k)
        chan = std::max(chan, std::abs(p[k] - expectation(pairs[t].g[k], probe)));
    }
  add("channel_equivalence", chan, 1e-9);

  rep.pass = true;
  for (const ValidationCheck& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

// ---- marginal table ----

struct MarginalRow {
  std::string element;        // E+1 .. E-3
  std::string pair;           // route, or "exact" for the theory row
  std::array<double, 4> p{};  // probe order H, V, R, D
};

struct MarginalTable {
  std::vector<MarginalRow> routes;  // twelve rows: six marginals, two routes each
  std::vector<MarginalRow> theory;  // six rows from the defining effects
  double max_route_disagreement = 0.0;
};

inline MarginalTable marginal_table(const std::array<JointPovm, 3>& pairs,
                                    const std::array<Vec3, 3>& axes, double eta) {
  const std::array<QubitState, 4> probes{QubitState::H(), QubitState::V(), QubitState::R(),
                                         QubitState::D()};
  MarginalTable tab;
  for (int k = 1; k <= 3; ++k) {
    for (int sign = 0; sign < 2; ++sign) {
      std::string name = std::string("E") + (sign == 0 ? "+" : "-") + std::to_string(k);
      std::vector<std::array<double, 4>> rows;
      for (const JointPovm& G : pairs) {
        Operator2 sum;
        if (G.i == k)
          sum = sign == 0 ? G[Outcome::pp] + G[Outcome::pm] : G[Outcome::mp] + G[Outcome::mm];
        else if (G.j == k)
          sum = sign == 0 ? G[Outcome::pp] + G[Outcome::mp] : G[Outcome::pm] + G[Outcome::mm];
        else
          continue;
        MarginalRow row;
        row.element = name;
        row.pair = G.pair_label();
        for (int s = 0; s < 4; ++s) row.p[s] = expectation(sum, probes[s]);
        tab.routes.push_back(row);
        rows.push_back(row.p);
      }
      if (rows.size() == 2)
        for (int s = 0; s < 4; ++s)
          tab.max_route_disagreement =
              std::max(tab.max_route_disagreement, std::abs(rows[0][s] - rows[1][s]));
      NoisyObservable obs{eta, axes[k - 1]};
      MarginalRow th;
      th.element = name;
      th.pair = "exact";
      Operator2 E = sign == 0 ? obs.plus() : obs.minus();
      for (int s = 0; s < 4; ++s) th.p[s] = expectation(E, probes[s]);
      tab.theory.push_back(th);
    }
  }
  return tab;
}

inline MarginalTable marginal_table(const ExperimentConfig& cfg) {
  return marginal_table(build_pairs(cfg), cfg.axes, cfg.eta);
}

// ---- full pipeline ----

struct PairReport {
  int i = 0, j = 0;
  std::array<double, 4> exact{};  // Tr(G rho), element order
  CountRecord record;
  double anticorr_exact = 0.0;
  double anticorr_sampled = 0.0;
  double anticorr_stderr = 0.0;

  std::string pair_label() const { return std::to_string(i) + std::to_string(j); }
};

struct RunReport {
  ExperimentConfig config;
  ValidationReport validation;
  std::array<JointPovm, 3> pairs{};
  std::array<Cascade, 3> cascades{};
  std::array<OpticalCircuit, 3> circuits{};
  std::array<PairReport, 3> pair_reports{};
  LswReport lsw;                   // exact
  double r3_sampled = 0.0;
  double r3_stderr = 0.0;          // combined over the three pairs
  SignificanceReport significance; // sampled value against the bound
  ConditionReport condition;
  MarginalTable marginals;
};

inline RunReport run(const ExperimentConfig& cfg) {
  RunReport rep;
  rep.config = cfg;
  QubitState rho = resolve_state(cfg.state);

  rep.pairs = build_pairs(cfg);
  for (int t = 0; t < 3; ++t) rep.cascades[t] = compile_cascade(rep.pairs[t]);
  for (int t = 0; t < 3; ++t) rep.circuits[t] = build_circuit(rep.cascades[t]);

  std::vector<QubitState> probes{rho, QubitState::H(), QubitState::V(), QubitState::D(),
                                 QubitState::R()};
  rep.validation = validate_pipeline(rep.pairs, rep.cascades, rep.circuits, probes);

  rep.lsw = r3(rep.pairs, rho);
  rep.condition = necessary_condition(rep.pairs, rho);
  rep.marginals = marginal_table(rep.pairs, cfg.axes, cfg.eta);

  double var_sum = 0.0;
  for (int t = 0; t < 3; ++t) {
    PairReport& pr = rep.pair_reports[t];
    pr.i = rep.pairs[t].i;
    pr.j = rep.pairs[t].j;
    for (int k = 0; k < 4; ++k) pr.exact[k] = expectation(rep.pairs[t].g[k], rho);
    pr.record = monte_carlo(rep.circuits[t], rho, cfg.shots, derive_seed(cfg.seed, t));
    pr.anticorr_exact = pr.exact[1] + pr.exact[2];
    pr.anticorr_sampled = pr.record.probabilities[1] + pr.record.probabilities[2];
    pr.anticorr_stderr = std::sqrt(pr.anticorr_sampled * (1.0 - pr.anticorr_sampled) /
                                   static_cast<double>(cfg.shots));
    rep.r3_sampled += pr.anticorr_sampled / 3.0;
    var_sum += pr.anticorr_stderr * pr.anticorr_stderr;
  }
  rep.r3_stderr = std::sqrt(var_sum) / 3.0;
  if (rep.r3_stderr > 0.0)
    rep.significance = significance(rep.r3_sampled, rep.r3_stderr, rep.lsw.lsw_bound);
  else
    rep.significance = {rep.r3_sampled, 0.0, rep.lsw.lsw_bound, 0.0};
  return rep;
}

struct CircuitSet {
  double eta = 0.0;
  std::array<Cascade, 3> cascades{};
  std::array<OpticalCircuit, 3> circuits{};
};

inline CircuitSet compile_circuits(const ExperimentConfig& cfg) {
  CircuitSet set;
  set.eta = cfg.eta;
  auto pairs = build_pairs(cfg);
  for (int t = 0; t < 3; ++t) set.cascades[t] = compile_cascade(pairs[t]);
  for (int t = 0; t < 3; ++t) set.circuits[t] = build_circuit(set.cascades[t]);
  return set;
}

// validations only: everything the full pipeline checks before sampling
inline ValidationReport check_all(const ExperimentConfig& cfg) {
  auto pairs = build_pairs(cfg);
  std::array<Cascade, 3> cascades;
  std::array<OpticalCircuit, 3> circuits;
  for (int t = 0; t < 3; ++t) cascades[t] = compile_cascade(pairs[t]);
  for (int t = 0; t < 3; ++t) circuits[t] = build_circuit(cascades[t]);
  std::vector<QubitState> probes{resolve_state(cfg.state), QubitState::H(), QubitState::V(),
                                 QubitState::D(), QubitState::R()};
  return validate_pipeline(pairs, cascades, circuits, probes);
}

// ---- rendering ----

// 6 significant digits for exact values, 4 for sampled, 4 decimals for
// hardware settings
inline std::string fmt_sig(double x, int digits) {
  if (x == 0.0) x = 0.0;  // never print -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}
inline std::string fmt_exact(double x) { return fmt_sig(x, 6); }
inline std::string fmt_sampled(double x) { return fmt_sig(x, 4); }
inline std::string fmt_setting(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

namespace detail {

inline double round_sig(double x, int digits) {
  return parse_real(fmt_sig(x, digits), "internal");
}

inline const char* bool_word(bool b) { return b ? "true" : "false"; }

inline void lsw_csv(std::ostringstream& out, const LswReport& l) {
  out << "# lsw\n";
  out << "eta,anticorr_12,anticorr_23,anticorr_13,r3,lsw_bound,ks_bound,margin,violated\n";
  out << fmt_exact(l.eta) << ',' << fmt_exact(l.anticorr[0]) << ',' << fmt_exact(l.anticorr[1])
      << ',' << fmt_exact(l.anticorr[2]) << ',' << fmt_exact(l.r3) << ','
      << fmt_exact(l.lsw_bound) << ',' << fmt_exact(l.ks_bound) << ',' << fmt_exact(l.margin)
      << ',' << bool_word(l.violated) << '\n';
}

inline void validation_csv(std::ostringstream& out, const ValidationReport& v) {
  out << "# validation\n";
  out << "check,value,tolerance,pass\n";
  for (const ValidationCheck& c : v.checks)
    out << c.name << ',' << fmt_exact(c.value) << ',' << fmt_exact(c.tolerance) << ','
        << bool_word(c.pass) << '\n';
}

inline void marginals_csv(std::ostringstream& out, const MarginalTable& tab) {
  out << "# marginals\n";
  out << "element,pair,H,V,R,D\n";
  for (const MarginalRow& r : tab.routes)
    out << r.element << ',' << r.pair << ',' << fmt_exact(r.p[0]) << ',' << fmt_exact(r.p[1])
        << ',' << fmt_exact(r.p[2]) << ',' << fmt_exact(r.p[3]) << '\n';
  out << "# marginals_exact\n";
  out << "element,H,V,R,D\n";
  for (const MarginalRow& r : tab.theory)
    out << r.element << ',' << fmt_exact(r.p[0]) << ',' << fmt_exact(r.p[1]) << ','
        << fmt_exact(r.p[2]) << ',' << fmt_exact(r.p[3]) << '\n';
}

inline void circuits_csv(std::ostringstream& out, const CircuitSet& set) {
  out << "# circuits\n";
  out << "pair,stage,element,theta_q1,theta_h,theta_q2,t_v\n";
  for (const OpticalCircuit& c : set.circuits)
    for (int t = 0; t < 3; ++t) {
      const CircuitStage& s = c.stages[t];
      out << c.pair_label() << ',' << (t + 1) << ',' << label(s.label) << ','
          << fmt_setting(s.plates.theta_q1) << ',' << fmt_setting(s.plates.theta_h) << ','
          << fmt_setting(s.plates.theta_q2) << ',' << fmt_setting(s.ppbs.t_v) << '\n';
    }
}

inline nlohmann::ordered_json lsw_json(const LswReport& l) {
  nlohmann::ordered_json j;
  j["eta"] = round_sig(l.eta, 6);
  j["anticorr_12"] = round_sig(l.anticorr[0], 6);
  j["anticorr_23"] = round_sig(l.anticorr[1], 6);
  j["anticorr_13"] = round_sig(l.anticorr[2], 6);
  j["r3"] = round_sig(l.r3, 6);
  j["lsw_bound"] = round_sig(l.lsw_bound, 6);
  j["ks_bound"] = round_sig(l.ks_bound, 6);
  j["margin"] = round_sig(l.margin, 6);
  j["violated"] = l.violated;
  return j;
}

inline nlohmann::ordered_json validation_json(const ValidationReport& v) {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const ValidationCheck& c : v.checks) {
    nlohmann::ordered_json jc;
    jc["check"] = c.name;
    jc["value"] = round_sig(c.value, 6);
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    j["checks"].push_back(jc);
  }
  j["pass"] = v.pass;
  return j;
}

inline nlohmann::ordered_json marginals_json(const MarginalTable& tab) {
  nlohmann::ordered_json j;
  auto rows = [](const std::vector<MarginalRow>& src, bool with_pair) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MarginalRow& r : src) {
      nlohmann::ordered_json jr;
      jr["element"] = r.element;
      if (with_pair) jr["pair"] = r.pair;
      jr["H"] = round_sig(r.p[0], 6);
      jr["V"] = round_sig(r.p[1], 6);
      jr["R"] = round_sig(r.p[2], 6);
      jr["D"] = round_sig(r.p[3], 6);
      arr.push_back(jr);
    }
    return arr;
  };
  j["routes"] = rows(tab.routes, true);
  j["exact"] = rows(tab.theory, false);
  j["max_route_disagreement"] = round_sig(tab.max_route_disagreement, 6);
  return j;
}

inline nlohmann::ordered_json circuits_json(const CircuitSet& set) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const OpticalCircuit& c : set.circuits)
    for (int t = 0; t < 3; ++t) {
      const CircuitStage& s = c.stages[t];
      nlohmann::ordered_json js;
      js["pair"] = c.pair_label();
      js["stage"] = t + 1;
      js["element"] = label(s.label);
      js["theta_q1"] = parse_real(fmt_setting(s.plates.theta_q1), "internal");
      js["theta_h"] = parse_real(fmt_setting(s.plates.theta_h), "internal");
      js["theta_q2"] = parse_real(fmt_setting(s.plates.theta_q2), "internal");
      js["t_v"] = parse_real(fmt_setting(s.ppbs.t_v), "internal");
      arr.push_back(js);
    }
  return arr;
}

inline nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["eta"] = round_sig(cfg.eta, 6);
  j["axes"] = cfg.axes_spec;
  j["state"] = cfg.state;
  j["shots"] = cfg.shots;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace detail

inline std::string render_sweep(const std::vector<SweepRow>& rows, OutputFormat format) {
  if (format == OutputFormat::table) {
    std::ostringstream out;
    out << "# sweep\n";
    out << "eta,r3,lsw_bound,margin\n";
    for (const SweepRow& r : rows)
      out << fmt_exact(r.eta) << ',' << fmt_exact(r.r3) << ',' << fmt_exact(r.lsw_bound) << ','
          << fmt_exact(r.margin) << '\n';
    return out.str();
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json jr;
    jr["eta"] = detail::round_sig(r.eta, 6);
    jr["r3"] = detail::round_sig(r.r3, 6);
    jr["lsw_bound"] = detail::round_sig(r.lsw_bound, 6);
    jr["margin"] = detail::round_sig(r.margin, 6);
    arr.push_back(jr);
  }
  nlohmann::ordered_json j;
  j["sweep"] = arr;
  return j.dump(2) + "\n";
}

inline std::string render_marginals(const MarginalTable& tab, OutputFormat format) {
  if (format == OutputFormat::table) {
    std::ostringstream out;
    detail::marginals_csv(out, tab);
    return out.str();
  }
  nlohmann::ordered_json j;
  j["marginals"] = detail::marginals_json(tab);
  return j.dump(2) + "\n";
}

inline std::string render_circuits(const CircuitSet& set, OutputFormat format) {
  if (format == OutputFormat::table) {
    std::ostringstream out;
    detail::circuits_csv(out, set);
    return out.str();
  }
  nlohmann::ordered_json j;
  j["circuits"] = detail::circuits_json(set);
  return j.dump(2) + "\n";
}

inline std::string render_validation(const ValidationReport& v, OutputFormat format) {
  if (format == OutputFormat::table) {
    std::ostringstream out;
    detail::validation_csv(out, v);
    return out.str();
  }
  nlohmann::ordered_json j;
  j["validation"] = detail::validation_json(v);
  return j.dump(2) + "\n";
}

inline std::string render_report(const RunReport& rep, OutputFormat format) {
  CircuitSet set{rep.config.eta, rep.cascades, rep.circuits};
  if (format == OutputFormat::table) {
    std::ostringstream out;
    out << "# config\n";
    out << "eta,axes,state,shots,seed\n";
    out << fmt_exact(rep.config.eta) << ',' << rep.config.axes_spec << ',' << rep.config.state
        << ',' << rep.config.shots << ',' << rep.config.seed << '\n';
    detail::validation_csv(out, rep.validation);
    detail::lsw_csv(out, rep.lsw);
    out << "# probabilities\n";
    out << "pair,element,exact,counts,probability,stderr\n";
    for (const PairReport& pr : rep.pair_reports)
      for (int k = 0; k < 4; ++k)
        out << pr.pair_label() << ',' << outcome_labels[k] << ',' << fmt_exact(pr.exact[k]) << ','
            << pr.record.counts[k] << ',' << fmt_sampled(pr.record.probabilities[k]) << ','
            << fmt_sampled(pr.record.stderrs[k]) << '\n';
    out << "# anticorrelation\n";
    out << "pair,exact,sampled,stderr\n";
    for (const PairReport& pr : rep.pair_reports)
      out << pr.pair_label() << ',' << fmt_exact(pr.anticorr_exact) << ','
          << fmt_sampled(pr.anticorr_sampled) << ',' << fmt_sampled(pr.anticorr_stderr) << '\n';
    out << "# significance\n";
    out << "r3_sampled,r3_stderr,measured,sigma,bound,n_sigma\n";
    out << fmt_sampled(rep.r3_sampled) << ',' << fmt_sampled(rep.r3_stderr) << ','
        << fmt_sampled(rep.significance.measured) << ',' << fmt_sampled(rep.significance.sigma)
        << ',' << fmt_exact(rep.significance.bound) << ','
        << fmt_sampled(rep.significance.n_sigma) << '\n';
    out << "# condition\n";
    out << "lhs,rhs,satisfied\n";
    out << fmt_exact(rep.condition.lhs) << ',' << fmt_exact(rep.condition.rhs) << ','
        << detail::bool_word(rep.condition.satisfied) << '\n';
    detail::marginals_csv(out, rep.marginals);
    detail::circuits_csv(out, set);
    return out.str();
  }

  nlohmann::ordered_json j;
  j["config"] = detail::config_json(rep.config);
  j["validation"] = detail::validation_json(rep.validation);
  j["lsw"] = detail::lsw_json(rep.lsw);
  j["probabilities"] = nlohmann::ordered_json::array();
  for (const PairReport& pr : rep.pair_reports)
    for (int k = 0; k < 4; ++k) {
      nlohmann::ordered_json jr;
      jr["pair"] = pr.pair_label();
      jr["element"] = outcome_labels[k];
      jr["exact"] = detail::round_sig(pr.exact[k], 6);
      jr["counts"] = pr.record.counts[k];
      jr["probability"] = detail::round_sig(pr.record.probabilities[k], 4);
      jr["stderr"] = detail::round_sig(pr.record.stderrs[k], 4);
      j["probabilities"].push_back(jr);
    }
  j["anticorrelation"] = nlohmann::ordered_json::array();
  for (const PairReport& pr : rep.pair_reports) {
    nlohmann::ordered_json jr;
    jr["pair"] = pr.pair_label();
    jr["exact"] = detail::round_sig(pr.anticorr_exact, 6);
    jr["sampled"] = detail::round_sig(pr.anticorr_sampled, 4);
    jr["stderr"] = detail::round_sig(pr.anticorr_stderr, 4);
    j["anticorrelation"].push_back(jr);
  }
  {
    nlohmann::ordered_json js;
    js["r3_sampled"] = detail::round_sig(rep.r3_sampled, 4);
    js["r3_stderr"] = detail::round_sig(rep.r3_stderr, 4);
    js["measured"] = detail::round_sig(rep.significance.measured, 4);
    js["sigma"] = detail::round_sig(rep.significance.sigma, 4);
    js["bound"] = detail::round_sig(rep.significance.bound, 6);
    js["n_sigma"] = detail::round_sig(rep.significance.n_sigma, 4);
    j["significance"] = js;
  }
  {
    nlohmann::ordered_json jc;
    jc["lhs"] = detail::round_sig(rep.condition.lhs, 6);
    jc["rhs"] = detail::round_sig(rep.condition.rhs, 6);
    jc["satisfied"] = rep.condition.satisfied;
    j["condition"] = jc;
  }
  j["marginals"] = detail::marginals_json(rep.marginals);
  j["circuits"] = detail::circuits_json(set);
  return j.dump(2) + "\n";
}

}  // namespace lsw
