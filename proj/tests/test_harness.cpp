#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "lsw/harness.hpp"

using namespace lsw;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& text) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("lsw_cfg_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".cfg");
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("Configuration entries apply by key and reject everything else", "[harness]") {
  ExperimentConfig cfg;
  CHECK(cfg.eta == 0.67);
  CHECK(cfg.state == "phi0");
  CHECK(cfg.shots == 100000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.format == OutputFormat::table);
  CHECK(cfg.axes_spec == "trine");

  apply_config_entry(cfg, "eta", "0.7");
  CHECK(cfg.eta == 0.7);
  apply_config_entry(cfg, "state", " H ");
  CHECK(cfg.state == "H");
  apply_config_entry(cfg, "shots", "5000");
  CHECK(cfg.shots == 5000);
  apply_config_entry(cfg, "seed", "99");
  CHECK(cfg.seed == 99);
  apply_config_entry(cfg, "format", "object");
  CHECK(cfg.format == OutputFormat::object);

  CHECK_THROWS_AS(apply_config_entry(cfg, "etaa", "0.5"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "eta", "fast"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "eta", "0.5x"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "shots", "-5"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "format", "yaml"), config_error);
}

TEST_CASE("Configuration files accept comments and reject malformed lines", "[harness]") {
  TempFile good(
      "# run settings\n"
      "\n"
      "eta = 0.69\n"
      "state=V\n"
      "  shots = 777  \n"
      "seed=3\n"
      "format = table\n");
  ExperimentConfig cfg;
  apply_config_file(cfg, good.path.string());
  CHECK(cfg.eta == 0.69);
  CHECK(cfg.state == "V");
  CHECK(cfg.shots == 777);
  CHECK(cfg.seed == 3);

  TempFile bad("eta 0.5\n");
  ExperimentConfig cfg2;
  CHECK_THROWS_AS(apply_config_file(cfg2, bad.path.string()), config_error);

  CHECK_THROWS_AS(apply_config_file(cfg2, "/nonexistent/lsw.cfg"), config_error);
}

TEST_CASE("Named and literal states resolve to the right Bloch vectors", "[harness]") {
  Vec3 r = resolve_state("phi0").bloch();
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 1.0);
  CHECK(r[2] == 0.0);
  CHECK(std::abs(resolve_state("H").bloch()[2] - 1.0) <= 1e-15);
  CHECK(std::abs(resolve_state("V").bloch()[2] + 1.0) <= 1e-15);
  CHECK(std::abs(resolve_state("D").bloch()[0] - 1.0) <= 1e-15);
  CHECK(std::abs(resolve_state("R").bloch()[1] - 1.0) <= 1e-15);

  Vec3 lit = resolve_state("0.6,0,0.8,0").bloch();
  CHECK(std::abs(lit[0] - 0.96) <= 1e-12);
  CHECK(std::abs(lit[1]) <= 1e-12);
  CHECK(std::abs(lit[2] + 0.28) <= 1e-12);

  CHECK_THROWS_AS(resolve_state("diagonal"), config_error);
  CHECK_THROWS_AS(resolve_state("1,0,0"), config_error);
  CHECK_THROWS_AS(resolve_state("0.6,0,0.6,0"), config_error);
}

TEST_CASE("Axis strings parse into three unit directions", "[harness]") {
  ExperimentConfig cfg;
  set_axes(cfg, "0,0,1;0.8660254037844386,0,-0.5;-0.8660254037844386,0,-0.5");
  for (int k = 0; k < 3; ++k)
    for (int s = 0; s < 3; ++s) CHECK(std::abs(cfg.axes[k][s] - trine_axes()[k][s]) <= 1e-15);

  set_axes(cfg, "trine");
  CHECK(cfg.axes_spec == "trine");

  CHECK_THROWS_AS(set_axes(cfg, "0,0,1;1,0,0"), config_error);
  CHECK_THROWS_AS(set_axes(cfg, "0,0,1;1,0,0;a,b,c"), config_error);
  CHECK_THROWS_AS(set_axes(cfg, "0,0;1,0,0;0,1,0"), config_error);
}

TEST_CASE("Pair construction tags the axis indices", "[harness]") {
  ExperimentConfig cfg;
  auto pairs = build_pairs(cfg);
  CHECK(pairs[0].pair_label() == "12");
  CHECK(pairs[1].pair_label() == "23");
  CHECK(pairs[2].pair_label() == "13");
  for (const JointPovm& G : pairs) CHECK(G.eta == 0.67);
}

TEST_CASE("The default run reproduces the frozen exact and sampled numbers", "[harness]") {
  ExperimentConfig cfg;
  RunReport rep = run(cfg);

  CHECK(rep.validation.pass);
  CHECK(std::abs(rep.lsw.r3 - 0.807531043493282) <= 1e-12);
  CHECK(std::abs(rep.lsw.lsw_bound - 0.776666666666667) <= 1e-12);
  CHECK(rep.lsw.violated);

  const std::array<std::array<std::uint64_t, 4>, 3> counts{{
      {9718, 40188, 40312, 9782},
      {9751, 40107, 40392, 9750},
      {9528, 40438, 40535, 9499},
  }};
  for (int t = 0; t < 3; ++t) {
    CHECK(rep.pair_reports[t].record.counts == counts[t]);
    CHECK(rep.pair_reports[t].record.shots == 100000);
    CHECK(std::abs(rep.pair_reports[t].anticorr_exact - 0.807531043493282) <= 1e-12);
    CHECK(rep.pair_reports[t].anticorr_stderr <= 1.5e-3);
    // sampled anticorrelation is the sum of the two mixed-outcome rates
    double mixed = rep.pair_reports[t].record.probabilities[1] +
                   rep.pair_reports[t].record.probabilities[2];
    CHECK(rep.pair_reports[t].anticorr_sampled == mixed);
  }

  CHECK(std::abs(rep.r3_sampled - 0.806573333333333) <= 1e-12);
  CHECK(std::abs(rep.r3_sampled - rep.lsw.r3) <= 5.0 * rep.r3_stderr);
  CHECK(std::abs(rep.r3_stderr - 0.000721128) <= 1e-8);
  CHECK(std::abs(rep.significance.n_sigma - 41.472047) <= 1e-4);
  CHECK(rep.significance.n_sigma > 6.4);

  CHECK(std::abs(rep.condition.lhs - 1.15481373904031) <= 1e-11);
  CHECK(rep.condition.satisfied);

  // a second run with the same settings is bit-identical end to end
  RunReport again = run(cfg);
  CHECK(render_report(again, OutputFormat::table) == render_report(rep, OutputFormat::table));
  CHECK(render_report(again, OutputFormat::object) == render_report(rep, OutputFormat::object));

  // a different seed moves the counts but not the exact columns
  ExperimentConfig reseeded = cfg;
  reseeded.seed = 2;
  RunReport other = run(reseeded);
  CHECK(other.pair_reports[0].record.counts != rep.pair_reports[0].record.counts);
  CHECK(other.lsw.r3 == rep.lsw.r3);
}

TEST_CASE("Above the threshold the run reports no violation", "[harness]") {
  ExperimentConfig cfg;
  cfg.eta = 0.71;
  cfg.shots = 2000;
  RunReport rep = run(cfg);
  CHECK_FALSE(rep.lsw.violated);
  CHECK(std::abs(rep.lsw.margin + 0.0196975318523468) <= 1e-12);
  CHECK(rep.validation.pass);
}

TEST_CASE("Marginal tables agree between routes and match the defining effects", "[harness]") {
  ExperimentConfig cfg;
  MarginalTable tab = marginal_table(cfg);
  REQUIRE(tab.routes.size() == 12);
  REQUIRE(tab.theory.size() == 6);
  CHECK(tab.max_route_disagreement <= 1e-12);

  // probe order H, V, R, D; published four-place values
  const std::array<std::array<double, 4>, 6> published{{
      {0.8350, 0.1650, 0.5000, 0.5000},  // E+1
      {0.1650, 0.8350, 0.5000, 0.5000},  // E-1
      {0.3325, 0.6675, 0.5000, 0.7901},  // E+2
      {0.6675, 0.3325, 0.5000, 0.2099},  // E-2
      {0.3325, 0.6675, 0.5000, 0.2099},  // E+3
      {0.6675, 0.3325, 0.5000, 0.7901},  // E-3
  }};
  const std::array<std::string, 6> names{"E+1", "E-1", "E+2", "E-2", "E+3", "E-3"};
  for (int k = 0; k < 6; ++k) {
    CHECK(tab.theory[k].element == names[k]);
    for (int s = 0; s < 4; ++s) CHECK(std::abs(tab.theory[k].p[s] - published[k][s]) <= 5e-5);
  }
  for (const MarginalRow& row : tab.routes) {
    int k = int(std::find(names.begin(), names.end(), row.element) - names.begin());
    REQUIRE(k < 6);
    for (int s = 0; s < 4; ++s) CHECK(std::abs(row.p[s] - published[k][s]) <= 5e-5);
    // the circular probe is blind to every equatorial marginal
    CHECK(std::abs(row.p[2] - 0.5) <= 1e-12);
  }
}

TEST_CASE("Pipeline validation runs the six named checks and catches tampering", "[harness]") {
  ExperimentConfig cfg;
  auto pairs = build_pairs(cfg);
  std::array<Cascade, 3> cascades;
  std::array<OpticalCircuit, 3> circuits;
  for (int t = 0; t < 3; ++t) {
    cascades[t] = compile_cascade(pairs[t]);
    circuits[t] = build_circuit(cascades[t]);
  }
  std::vector<QubitState> probes{optimal_state(), QubitState::H(), QubitState::R()};

  ValidationReport rep = validate_pipeline(pairs, cascades, circuits, probes);
  REQUIRE(rep.checks.size() == 6);
  const std::array<std::string, 6> names{"effect_eigenvalues", "completeness",
                                         "marginal_condition", "rank1_determinant",
                                         "cascade_reconstruction", "channel_equivalence"};
  for (int k = 0; k < 6; ++k) CHECK(rep.checks[k].name == names[k]);
  CHECK(rep.pass);

  auto tampered = pairs;
  tampered[0].g[0] = tampered[0].g[0] + 0.01 * identity();
  ValidationReport bad = validate_pipeline(tampered, cascades, circuits, probes);
  CHECK_FALSE(bad.pass);
  bool completeness_failed = false, marginal_failed = false;
  for (const ValidationCheck& c : bad.checks) {
    if (c.name == "completeness" && !c.pass) completeness_failed = true;
    if (c.name == "marginal_condition" && !c.pass) marginal_failed = true;
  }
  CHECK(completeness_failed);
  CHECK(marginal_failed);
}

TEST_CASE("Compiled circuit sets expose the frozen transmissions", "[harness]") {
  ExperimentConfig cfg;
  CircuitSet set = compile_circuits(cfg);
  CHECK(set.eta == 0.67);
  for (int t = 0; t < 3; ++t) {
    CHECK(std::abs(set.circuits[t].stages[0].ppbs.t_v - 0.387775) <= 1e-12);
    CHECK(std::abs(set.circuits[t].stages[1].ppbs.t_v - 0.289407517245825) <= 1e-12);
    CHECK(set.circuits[t].stages[2].ppbs.t_v <= 1e-9);
  }
  CHECK(check_all(cfg).pass);
}

TEST_CASE("Table output carries every section with the fixed headers", "[harness]") {
  ExperimentConfig cfg;
  cfg.shots = 4000;
  RunReport rep = run(cfg);
  std::string text = render_report(rep, OutputFormat::table);

  for (const char* section :
       {"# config", "# validation", "# lsw", "# probabilities", "# anticorrelation",
        "# significance", "# condition", "# marginals", "# marginals_exact", "# circuits"}) {
    INFO(section);
    CHECK(text.find(section) != std::string::npos);
  }
  CHECK(text.find("eta,anticorr_12,anticorr_23,anticorr_13,r3,lsw_bound,ks_bound,margin,"
                  "violated") != std::string::npos);
  CHECK(text.find("pair,element,exact,counts,probability,stderr") != std::string::npos);
  CHECK(text.find("pair,stage,element,theta_q1,theta_h,theta_q2,t_v") != std::string::npos);
  CHECK(text.find("0.807531") != std::string::npos);
  CHECK(text.find("-0.0000") == std::string::npos);
}

TEST_CASE("Object output is parseable JSON mirroring the table", "[harness]") {
  ExperimentConfig cfg;
  cfg.shots = 4000;
  RunReport rep = run(cfg);
  auto j = nlohmann::json::parse(render_report(rep, OutputFormat::object));

  for (const char* key : {"config", "validation", "lsw", "probabilities", "anticorrelation",
                          "significance", "condition", "marginals", "circuits"}) {
    INFO(key);
    CHECK(j.contains(key));
  }
  CHECK(j["lsw"]["violated"].get<bool>());
  CHECK(std::abs(j["lsw"]["r3"].get<double>() - 0.807531) <= 1e-6);
  REQUIRE(j["probabilities"].size() == 12);
  double total = 0.0;
  for (const auto& row : j["probabilities"])
    if (row["pair"] == "12") total += row["probability"].get<double>();
  // rows are rounded to four significant digits before serialization
  CHECK(std::abs(total - 1.0) <= 5e-4);
  CHECK(j["circuits"].size() == 9);
}

TEST_CASE("Sweep and marginal renderers emit their own headers", "[harness]") {
  auto rows = sweep_eta(2.0 / 3.0, eta_max_trine(), 8);
  std::string table = render_sweep(rows, OutputFormat::table);
  CHECK(table.find("# sweep") != std::string::npos);
  CHECK(table.find("eta,r3,lsw_bound,margin") != std::string::npos);
  auto js = nlohmann::json::parse(render_sweep(rows, OutputFormat::object));
  CHECK(js["sweep"].size() == 8);

  ExperimentConfig cfg;
  std::string marg = render_marginals(marginal_table(cfg), OutputFormat::table);
  CHECK(marg.find("# marginals") != std::string::npos);
  CHECK(marg.find("element,pair,H,V,R,D") != std::string::npos);

  std::string circ = render_circuits(compile_circuits(cfg), OutputFormat::table);
  CHECK(circ.find("# circuits") != std::string::npos);

  std::string val = render_validation(check_all(cfg), OutputFormat::table);
  CHECK(val.find("# validation") != std::string::npos);
  CHECK(val.find("check,value,tolerance,pass") != std::string::npos);
}

TEST_CASE("Number formatting is stable at the stated precisions", "[harness]") {
  CHECK(fmt_exact(0.807531043493282) == "0.807531");
  CHECK(fmt_exact(0.776666666666667) == "0.776667");
  CHECK(fmt_sampled(0.806573333) == "0.8066");
  CHECK(fmt_sampled(0.000721128) == "0.0007211");
  CHECK(fmt_setting(-0.0) == "0.0000");
  CHECK(fmt_setting(12.3456789) == "12.3457");
  CHECK(fmt_exact(-0.0) == "0");
  CHECK(fmt_exact(2.0 / 3.0) == "0.666667");
}
