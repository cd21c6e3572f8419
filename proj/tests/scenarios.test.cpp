// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctcsim/scenarios.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ctcsim/run_config.hpp"
#include "test_support.hpp"

using namespace ctcsim;
using ctcsim::testing::TestRng;
using ctcsim::testing::random_unitary;

namespace {

Scenario coin_scenario(const std::string& gate, std::vector<std::size_t> n_list) {
  Scenario s;
  s.interaction = gate;
  s.ensemble = {EnsembleMemberSpec{0.5, "0", std::string("0")},
                EnsembleMemberSpec{0.5, "1", std::string("1")}};
  s.n_list = std::move(n_list);
  return s;
}

Scenario bell_scenario(const std::string& gate, std::vector<std::size_t> n_list) {
  Scenario s;
  s.interaction = gate;
  s.entangled = "bell:phi+";
  s.lift = LiftChoice::Density;
  s.n_list = std::move(n_list);
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ctcsim-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("uncoupled interaction keeps prepared correlations at every n") {
  const auto reports = run_prepared_experiment(coin_scenario("identity", {1, 2, 4, 8}));
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CAPTURE(r.n);
    CHECK(r.zz == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.dist_to_deutsch <= 1e-10);
  }
}

TEST_CASE("swap keeps prepared correlations with one bit of mutual information") {
  const auto reports = run_prepared_experiment(coin_scenario("swap", {1, 2, 4, 8, 16}));
  for (const auto& r : reports) {
    CAPTURE(r.n);
    CHECK(r.zz == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.mutual_information_bits == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("prepared cnot run matches the unrolled-oracle computation") {
  const std::size_t n = 8;
  Scenario s = coin_scenario("cnot", {n});
  const auto reports = run_prepared_experiment(s);
  REQUIRE(reports.size() == 1);

  // oracle: unroll each component separately and mix with its label
  const Unitary u = build_gate("cnot");
  ComplexMatrix joint(4, 4);
  const char* labels[2] = {"0", "1"};
  for (int k = 0; k < 2; ++k) {
    const DensityMatrix copy = DensityMatrix::from_pure(parse_state(labels[k]));
    const EquivCircuitResult res = equiv_circuit_unrolled(u, copy, n);
    ComplexMatrix term = kron(copy.matrix(), res.output.matrix());
    term *= Complex(0.5, 0.0);
    joint += term;
  }
  const CorrelationMetrics oracle = correlation_metrics(DensityMatrix(joint, {2, 2}));
  CHECK(reports[0].zz == doctest::Approx(oracle.zz).epsilon(1e-10));
  CHECK(reports[0].mutual_information_bits ==
        doctest::Approx(oracle.mutual_information_bits).epsilon(1e-10));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(reports[0].joint_distribution[i] == doctest::Approx(oracle.joint_probs[i]).epsilon(1e-10));
  }
}

TEST_CASE("prepared run requires reference labels") {
  Scenario s;
  s.interaction = "swap";
  s.ensemble = {EnsembleMemberSpec{1.0, "0", std::nullopt}};
  CHECK_THROWS_AS(run_prepared_experiment(s), std::invalid_argument);
}

TEST_CASE("entangled swap run is fully de-correlated") {
  const auto reports = run_entangled_experiment(bell_scenario("swap", {1, 2, 4, 8}));
  for (const auto& r : reports) {
    CAPTURE(r.n);
    CHECK(std::abs(r.zz) <= 1e-10);
    CHECK(r.mutual_information_bits <= 1e-12);
  }
}

TEST_CASE("entangled run under an uncoupled interaction still shows no correlation") {
  const auto reports = run_entangled_experiment(bell_scenario("identity", {1, 4}));
  for (const auto& r : reports) {
    CHECK(std::abs(r.zz) <= 1e-10);
    CHECK(r.mutual_information_bits <= 1e-12);
  }
}

TEST_CASE("entangled cnot run matches iterating the channel on the mixed copy") {
  const std::size_t n = 16;
  const auto reports = run_entangled_experiment(bell_scenario("cnot", {n}));
  REQUIRE(reports.size() == 1);

  // oracle: the Density lift iterates the induced channel on I/2 directly
  const Unitary u = build_gate("cnot");
  const DensityMatrix half = DensityMatrix::maximally_mixed({2});
  const DeutschMap map(u, half);
  ComplexMatrix rail = half.matrix();
  for (std::size_t k = 1; k < n; ++k) rail = deutsch_map_apply_matrix(map, rail);
  const DensityMatrix out = ctc_output(map, DensityMatrix(rail, {2}));
  const CorrelationMetrics oracle =
      correlation_metrics(DensityMatrix(kron(half.matrix(), out.matrix()), {2, 2}));
  CHECK(reports[0].zz == doctest::Approx(oracle.zz).epsilon(1e-10));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(reports[0].joint_distribution[i] == doctest::Approx(oracle.joint_probs[i]).epsilon(1e-10));
  }
}

TEST_CASE("the prepared rule is rejected on an unmeasured entangled source") {
  Scenario s = bell_scenario("swap", {2});
  s.lift = LiftChoice::Prepared;
  try {
    run_entangled_experiment(s);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("shot-by-shot") != std::string::npos);
  }
}

TEST_CASE("ordering check on an uncoupled interaction is frame-invariant") {
  Scenario s = bell_scenario("identity", {1, 2, 4});
  const OrderingCheckResult res = ordering_consistency_check(s);
  CHECK(res.max_discrepancy <= 1e-12);
  // the uncoupled circuit emits each shot unchanged, so the prepared-rule
  // contrast is the same half bit of total variation as for swap
  CHECK(res.contrast_discrepancy == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ordering check on swap: invariant predictions, half a bit of contrast") {
  const OrderingCheckResult res = ordering_consistency_check(bell_scenario("swap", {1, 2, 4, 8}));
  CHECK(res.max_discrepancy <= 1e-10);
  CHECK(res.contrast_discrepancy == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ordering check on cnot: invariant predictions, nonzero contrast") {
  const OrderingCheckResult res = ordering_consistency_check(bell_scenario("cnot", {1, 2, 4, 8}));
  CHECK(res.max_discrepancy <= 1e-10);
  CHECK(res.contrast_discrepancy > 0.0);
}

TEST_CASE("a partially entangled source keeps its marginal statistics, not its correlation") {
  // 0.8|00> + 0.6|11>: traveler marginal diag(0.64, 0.36)
  Scenario s;
  s.interaction = "swap";
  s.entangled = "amps:[[0.8,0],[0,0],[0,0],[0.6,0]]";
  s.lift = LiftChoice::Density;
  s.n_list = {1, 4};
  const auto reports = run_entangled_experiment(s);
  for (const auto& r : reports) {
    CHECK(r.mutual_information_bits <= 1e-12);
    CHECK(r.zz == doctest::Approx(0.28 * 0.28).epsilon(1e-10));  // (0.64 - 0.36)^2
    CHECK(r.joint_distribution[0] == doctest::Approx(0.64 * 0.64).epsilon(1e-10));
    CHECK(r.joint_distribution[3] == doctest::Approx(0.36 * 0.36).epsilon(1e-10));
  }

  const OrderingCheckResult check = ordering_consistency_check(s);
  CHECK(check.max_discrepancy <= 1e-10);
  // measured ensemble keeps p = (0.64, 0, 0, 0.36); the factorized joint
  // spreads it to the product of marginals; total variation by hand:
  const double tv = 0.5 * (std::abs(0.64 - 0.4096) + 0.2304 + 0.2304 + std::abs(0.36 - 0.1296));
  CHECK(check.contrast_discrepancy == doctest::Approx(tv).epsilon(1e-9));
}

TEST_CASE("semantics comparison separates the two trace conventions under swap") {
  const std::vector<PreparedMember> ensemble = {
      PreparedMember{0.5, parse_state("0"), parse_state("0")},
      PreparedMember{0.5, parse_state("1"), parse_state("1")}};
  const SemanticsComparison cmp = semantics_compare(build_gate("swap"), ensemble);
  CHECK(cmp.per_component.zz == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cmp.whole_ensemble.zz == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("semantics comparison: the uncoupled interaction preserves both readings") {
  const std::vector<PreparedMember> ensemble = {
      PreparedMember{0.5, parse_state("0"), parse_state("0")},
      PreparedMember{0.5, parse_state("1"), parse_state("1")}};
  const SemanticsComparison cmp = semantics_compare(build_gate("identity"), ensemble);
  CHECK(cmp.per_component.zz == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cmp.whole_ensemble.zz == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("semantics comparison against nullspace-based fixed points under cnot") {
  const std::vector<PreparedMember> ensemble = {
      PreparedMember{0.5, parse_state("0"), parse_state("0")},
      PreparedMember{0.5, parse_state("1"), parse_state("1")}};
  const Unitary u = build_gate("cnot");
  const SemanticsComparison cmp = semantics_compare(u, ensemble);

  // independent route: solve each consistency condition through the
  // superoperator nullspace projection and rebuild both joints
  auto solve = [&](const DensityMatrix& rho_sys, const DensityMatrix& seed) {
    const DeutschMap map(u, rho_sys);
    return canonical_fixed_point(map, seed);
  };
  ComplexMatrix per_comp(4, 4);
  const char* labels[2] = {"0", "1"};
  for (int k = 0; k < 2; ++k) {
    const DensityMatrix copy = DensityMatrix::from_pure(parse_state(labels[k]));
    const DensityMatrix fixed = solve(copy, copy);
    const DensityMatrix out = ctc_output(DeutschMap(u, copy), fixed);
    ComplexMatrix term = kron(copy.matrix(), out.matrix());
    term *= Complex(0.5, 0.0);
    per_comp += term;
  }
  const CorrelationMetrics pc_oracle = correlation_metrics(DensityMatrix(per_comp, {2, 2}));
  CHECK(cmp.per_component.zz == doctest::Approx(pc_oracle.zz).epsilon(1e-10));

  const DensityMatrix half = DensityMatrix::maximally_mixed({2});
  const DensityMatrix common = solve(half, half);
  ComplexMatrix whole(4, 4);
  for (int k = 0; k < 2; ++k) {
    const DensityMatrix copy = DensityMatrix::from_pure(parse_state(labels[k]));
    const DensityMatrix out = ctc_output(DeutschMap(u, copy), common);
    ComplexMatrix term = kron(copy.matrix(), out.matrix());
    term *= Complex(0.5, 0.0);
    whole += term;
  }
  const CorrelationMetrics we_oracle = correlation_metrics(DensityMatrix(whole, {2, 2}));
  CHECK(cmp.whole_ensemble.zz == doctest::Approx(we_oracle.zz).epsilon(1e-10));
}

TEST_CASE("fixed-point survey of the identity interaction") {
  const SurveyReport survey = fixed_point_survey("identity", "0");
  CHECK(survey.fixed_points.fixed_space_basis.size() == 4);
  CHECK(max_abs_diff(survey.fixed_points.canonical.matrix(),
                     DensityMatrix::from_pure(parse_state("0")).matrix()) <= 1e-10);
}

TEST_CASE("fixed-point survey of swap at |+>") {
  const SurveyReport survey = fixed_point_survey("swap", "+");
  CHECK(survey.fixed_points.fixed_space_basis.size() == 1);
  CHECK(survey.fixed_points.unique);
  CHECK(max_abs_diff(survey.fixed_points.canonical.matrix(),
                     DensityMatrix::from_pure(parse_state("+")).matrix()) <= 1e-10);
}

TEST_CASE("fixed-point survey of cnot at |1> reports the oscillating pair") {
  const SurveyReport survey = fixed_point_survey("cnot", "1");
  CHECK(survey.fixed_points.fixed_space_basis.size() == 2);
  CHECK(max_abs_diff(survey.fixed_points.canonical.matrix(),
                     DensityMatrix::maximally_mixed({2}).matrix()) <= 1e-8);
  CHECK(survey.fixed_points.oscillation_detected);
  REQUIRE(survey.fixed_points.oscillation_period.has_value());
  CHECK(*survey.fixed_points.oscillation_period == 2);
}

TEST_CASE("survey surfaces parse errors with their position") {
  CHECK_THROWS_AS(fixed_point_survey("swap(", "0"), ParseError);
  CHECK_THROWS_AS(fixed_point_survey("swap", "zz"), ParseError);
  CHECK_THROWS_AS(fixed_point_survey("x", "0"), std::invalid_argument);
}

TEST_CASE("minimal fixed-point config runs end to end") {
  const nlohmann::json config = {{"experiment", "fixed-point"},
                                 {"unitary", "swap"},
                                 {"system_state", "0"}};
  const RunOutcome outcome = run_config(config);
  CHECK(outcome.exit_code == 0);
  CHECK(outcome.human_text.find("fixed-space dimension: 1") != std::string::npos);
}

TEST_CASE("equiv config emits the declared CSV columns and rows") {
  TempDir dir;
  nlohmann::json config = {{"experiment", "equiv"},
                           {"unitary", "swap"},
                           {"ensemble",
                            {{{"p", 0.5}, {"traveler", "0"}, {"reference", "0"}},
                             {{"p", 0.5}, {"traveler", "1"}, {"reference", "1"}}}},
                           {"n_list", {1, 2, 4, 8}},
                           {"outputs", {{"csv", dir.file("out.csv")}}}};
  const RunOutcome outcome = run_config(config);
  REQUIRE(outcome.files_written.size() == 1);
  const std::string csv = slurp(dir.file("out.csv"));
  CHECK(csv.rfind("n,dist_to_deutsch,zz,mutual_info_bits,p00,p01,p10,p11,oscillation_flag\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("rerunning a config yields byte-identical output") {
  TempDir dir;
  nlohmann::json config = {{"experiment", "equiv"},
                           {"unitary", "cnot"},
                           {"ensemble",
                            {{{"p", 0.5}, {"traveler", "0"}, {"reference", "0"}},
                             {{"p", 0.5}, {"traveler", "+"}, {"reference", "1"}}}},
                           {"n_list", {1, 2, 4, 8}},
                           {"seed", 7},
                           {"outputs", {{"csv", dir.file("a.csv")}, {"json", dir.file("a.json")}}}};
  run_config(config);
  const std::string first_csv = slurp(dir.file("a.csv"));
  const std::string first_json = slurp(dir.file("a.json"));
  run_config(config);
  CHECK(slurp(dir.file("a.csv")) == first_csv);
  CHECK(slurp(dir.file("a.json")) == first_json);
}

TEST_CASE("an entangled config without an explicit lift defaults to the density rule") {
  const nlohmann::json config = {{"experiment", "entangled"},
                                 {"unitary", "swap"},
                                 {"entangled", "bell:phi+"},
                                 {"n_list", {1, 2}}};
  const RunOutcome outcome = run_config(config);
  CHECK(outcome.exit_code == 0);
  CHECK(outcome.human_text.find("zz=0") != std::string::npos);
}

TEST_CASE("config validation names the offending field") {
  try {
    run_config(nlohmann::json{{"experiment", "equiv"}});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unitary") != std::string::npos);
  }
  try {
    run_config(nlohmann::json{{"unitary", "swap"}});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("experiment") != std::string::npos);
  }
  CHECK_THROWS_AS(
      run_config(nlohmann::json{{"experiment", "equiv"}, {"unitary", "swap"}, {"n_list", {0}}}),
      ConfigError);
  // density-rule rows without reference labels are rejected, not crashed on
  CHECK_THROWS_AS(
      run_config(nlohmann::json{{"experiment", "equiv"},
                                {"unitary", "swap"},
                                {"lift", "density"},
                                {"ensemble", {{{"p", 1.0}, {"traveler", "0"}}}},
                                {"n_list", {1}}}),
      ConfigError);
}

TEST_CASE("lift=both produces the prepared block followed by the density block") {
  nlohmann::json config = {{"experiment", "equiv"},
                           {"unitary", "swap"},
                           {"lift", "both"},
                           {"ensemble",
                            {{{"p", 0.5}, {"traveler", "0"}, {"reference", "0"}},
                             {{"p", 0.5}, {"traveler", "1"}, {"reference", "1"}}}},
                           {"n_list", {1, 2}}};
  const RunOutcome outcome = run_config(config);
  // prepared rows keep zz = 1, density rows lose the correlation
  const std::string& text = outcome.human_text;
  CHECK(text.find("zz=1 ") != std::string::npos);
  CHECK(text.find("zz=0 ") != std::string::npos);
}

TEST_CASE("the density rule erases reference correlation for every corpus gate") {
  const DensityMatrix bell = DensityMatrix::from_pure(parse_state("bell:phi+"));
  const LiftedInput lifted = lift_density(partial_trace(bell, {1}), partial_trace(bell, {0}));
  for (const auto& [name, u] : ctcsim::testing::gate_corpus()) {
    CAPTURE(name);
    for (std::size_t n : {1u, 3u, 8u}) {
      const CorrelationMetrics metrics =
          correlation_metrics(equiv_circuit_contracted(u, lifted, n).output);
      CHECK(metrics.mutual_information_bits <= 1e-12);
      double total = 0.0;
      for (double p : metrics.joint_probs) {
        CHECK(p >= 0.0);
        total += p;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("prepared correlations survive any product interaction") {
  TestRng rng(777);
  const Unitary a = random_unitary({2}, rng);
  const Unitary b = random_unitary({2}, rng);
  const Unitary u(kron(a.matrix(), b.matrix()), {2, 2});
  const LiftedInput coin =
      lift_prepared({PreparedMember{0.5, parse_state("0"), parse_state("0")},
                     PreparedMember{0.5, parse_state("1"), parse_state("1")}});
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    // each label stays locked to its component, rotated by A only
    const DensityMatrix out = equiv_circuit_contracted(u, coin, n).output;
    ComplexMatrix expected(4, 4);
    for (int k = 0; k < 2; ++k) {
      const ComplexMatrix copy =
          DensityMatrix::from_pure(parse_state(k == 0 ? "0" : "1")).matrix();
      ComplexMatrix term = kron(copy, a.matrix() * copy * a.matrix().adjoint());
      term *= Complex(0.5, 0.0);
      expected += term;
    }
    CHECK(max_abs_diff(out.matrix(), expected) <= 1e-12);
  }
  // with the identity product the correlator itself stays at 1
  const Unitary id4 = build_gate("identity");
  for (std::size_t n : {1u, 5u, 9u}) {
    const CorrelationMetrics metrics =
        correlation_metrics(equiv_circuit_contracted(id4, coin, n).output);
    CHECK(metrics.zz == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("the per-component branch is the long-chain limit of the prepared circuit") {
  const std::vector<PreparedMember> ensemble = {
      PreparedMember{0.5, parse_state("0"), parse_state("0")},
      PreparedMember{0.5, parse_state("1"), parse_state("1")}};
  const LiftedInput lifted = lift_prepared(ensemble);
  for (const auto& [name, u] : ctcsim::testing::gate_corpus()) {
    CAPTURE(name);
    const DensityMatrix limit = deutsch_consistent_output(u, lifted);
    const DensityMatrix at64 = equiv_circuit_contracted(u, lifted, 64).output;
    CHECK(trace_distance(at64, limit) <= 1e-6);
  }
}

TEST_CASE("basis rotations move the correlation observable") {
  // X on both registers leaves a classically correlated pair correlated
  Scenario s = coin_scenario("swap", {2});
  s.ref_rotation = "x";
  s.out_rotation = "x";
  const auto reports = run_prepared_experiment(s);
  CHECK(reports[0].zz == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(reports[0].joint_distribution[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(reports[0].joint_distribution[3] == doctest::Approx(0.5).epsilon(1e-10));
}
