// Copyright 2026 The ckt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <random>

#include "gtest/gtest.h"

#include "ckt/robustness.hpp"
#include "ckt/target.hpp"
#include "dense_oracle.hpp"

using namespace ckt;

namespace {

std::string pauli_string(unsigned n, std::size_t a) {
    std::string s(n, 'I');
    for (unsigned q = 0; q < n; ++q) s[q] = "IXYZ"[(a >> (2 * q)) & 3];
    return s;
}

std::vector<double> oracle_b(const oracle::Vec &psi, unsigned n) {
    std::vector<double> b(pauli_count(n));
    for (std::size_t a = 0; a < b.size(); ++a) b[a] = oracle::expectation(psi, oracle::pauli(pauli_string(n, a)));
    return b;
}

oracle::Vec plus_n(unsigned n) { return oracle::Vec::Constant(std::size_t{1} << n, 1.0 / std::sqrt(double(1u << n))); }

void expect_b_near(const std::vector<double> &got, const std::vector<double> &want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t a = 0; a < got.size(); ++a) EXPECT_NEAR(got[a], want[a], tol) << "pauli index " << a;
}

double solve(const TargetState &t, const StateSet &s) { return solve_robustness(t, assemble_problem(t, s)).value; }

void expect_certificate(const LPProblem &p, const RobustnessResult &r) {
    const auto c = check_certificate(p, r);
    EXPECT_NEAR(c.coefficient_sum, 1.0, 1e-9);
    EXPECT_NEAR(c.l1, r.value, 1e-9);
    EXPECT_LE(c.max_residual, 1e-8);
    EXPECT_LE(c.dual_infeasibility, 1 + 1e-9);
    EXPECT_LE(std::abs(r.duality_gap), 1e-7);
    EXPECT_NEAR(r.decomposition.l1(), 1 + 2 * r.decomposition.negative_mass(), 1e-9);
    EXPECT_LE(r.lower_bound, r.value + 1e-9);
}

}  // namespace

// ---------------------------------------------------------------------------
// Target expressions

TEST(ParseTarget, Examples) {
    EXPECT_EQ(parse_target("tplus^3").n, 3u);
    EXPECT_EQ(parse_target("ccz").n, 3u);
    EXPECT_EQ(parse_target("cs*tplus^2*mixed(1)").n, 5u);
    EXPECT_EQ(parse_target("cs*tplus^2*mixed(1)").factors.size(), 3u);
    EXPECT_EQ(parse_target("sh").factors[0].count, 1u);
}

TEST(ParseTarget, DiagnosticsCarryByteOffsets) {
    auto offset_of = [](const char *text) -> std::size_t {
        try {
            parse_target(text);
        } catch (const TargetParseError &e) {
            return e.offset();
        }
        return SIZE_MAX;
    };
    EXPECT_EQ(offset_of("tplus^^2"), 6u);
    EXPECT_EQ(offset_of("bogus"), 0u);
    EXPECT_EQ(offset_of("tplus*"), 6u);
    EXPECT_EQ(offset_of("cs^2"), 2u);
    EXPECT_EQ(offset_of("tplus^0"), 6u);
    EXPECT_EQ(offset_of("mixed(2"), 7u);
    EXPECT_EQ(offset_of("tplus^2 "), 7u);
    EXPECT_EQ(offset_of(""), 0u);
}

TEST(ParseTarget, ArityOverflow) {
    EXPECT_NO_THROW(parse_target("tplus^4", 4));
    EXPECT_THROW(parse_target("tplus^5", 4), TargetParseError);
    EXPECT_THROW(parse_target("tplus^2*ccz", 4), TargetParseError);
    EXPECT_THROW(parse_target("mixed(9)"), TargetParseError);
}

TEST(BuildTarget, SingleQubitStatesMatchDenseOracle) {
    oracle::Vec zero(2);
    zero << 1, 0;
    const oracle::Vec plus = oracle::one_qubit('H') * zero;
    expect_b_near(build_target("tplus").b, oracle_b(oracle::one_qubit('T') * plus, 1));
    expect_b_near(build_target("plus").b, {1, 1, 0, 0});
    const double r2 = 1 / std::sqrt(2.0), r3 = 1 / std::sqrt(3.0);
    expect_b_near(build_target("tplus").b, {1, r2, r2, 0});
    expect_b_near(build_target("h").b, {1, r2, 0, r2});
    expect_b_near(build_target("sh").b, {1, r3, r3, r3});
    expect_b_near(build_target("mixed(2)").b, std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST(BuildTarget, TwoAndThreeQubitGatesMatchDenseOracle) {
    oracle::Mat cs = oracle::Mat::Identity(4, 4);
    cs(3, 3) = oracle::cd(0, 1);
    expect_b_near(build_target("cs").b, oracle_b(cs * plus_n(2), 2));
    oracle::Mat ccz = oracle::Mat::Identity(8, 8);
    ccz(7, 7) = -1;
    expect_b_near(build_target("ccz").b, oracle_b(ccz * plus_n(3), 3));
}

TEST(BuildTarget, ProductPutsFirstFactorOnLowQubits) {
    const auto t = build_target("tplus*plus");
    EXPECT_EQ(t.n, 2u);
    EXPECT_NEAR(t.b[1], 1 / std::sqrt(2.0), 1e-15);  // X on qubit 0
    EXPECT_NEAR(t.b[4], 1.0, 1e-15);                 // X on qubit 1
    EXPECT_NEAR(t.b[2 + 4], 1 / std::sqrt(2.0), 1e-15);
    ASSERT_TRUE(t.exact.has_value());
    expect_b_near(t.b, expectation_vector(*t.exact));
    EXPECT_FALSE(build_target("tplus*sh").exact.has_value());
    EXPECT_FALSE(build_target("tplus*mixed(1)").pure);
    EXPECT_TRUE(build_target("tplus*sh").pure);
}

TEST(BuildTarget, FileFactors) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto amp = dir / "ckt_target_amp.json", exp = dir / "ckt_target_exp.json", bad = dir / "ckt_target_bad.json";
    std::ofstream(amp) << R"({"n": 1, "amplitudes": [[0.7071067811865476, 0], [0.5, 0.5]]})";
    std::ofstream(exp) << R"({"n": 1, "expectations": [1, 0.5, 0, 0]})";
    std::ofstream(bad) << R"({"n": 1, "expectations": [1, 0.9, 0.9, 0]})";
    expect_b_near(build_target("file:" + amp.string()).b, build_target("tplus").b);
    const auto e = build_target("file:" + exp.string() + "*tplus");
    EXPECT_EQ(e.n, 2u);
    EXPECT_FALSE(e.pure);
    EXPECT_THROW(build_target("file:" + bad.string()), std::invalid_argument);
    EXPECT_THROW(build_target("file:/nonexistent/x.json"), TargetParseError);
}

TEST(BuildTarget, Invariants) {
    for (const char *expr : {"tplus^3", "sh^2", "cs", "ccz", "h*sh", "mixed(3)"}) {
        const auto t = build_target(expr);
        EXPECT_EQ(t.b[0], 1.0);
        EXPECT_LE(t.purity(), 1 + 1e-9);
        if (t.pure) {
            EXPECT_NEAR(t.purity(), 1.0, 1e-12) << expr;
        }
    }
    const auto m = mixture(0.25, build_target("tplus"), build_target("sh"));
    EXPECT_LT(m.purity(), 1.0);
    EXPECT_THROW(mixture(1.5, build_target("tplus"), build_target("sh")), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Analytic pieces

TEST(LowerBound, Examples) {
    EXPECT_NEAR(lower_bound(build_target("h"), 0), (1 + std::sqrt(2.0)) / 2, 1e-12);
    EXPECT_NEAR(lower_bound(build_target("h^3"), 0), std::pow((1 + std::sqrt(2.0)) / 2, 3), 1e-12);
    EXPECT_NEAR(lower_bound(build_target("sh^2"), 1), std::pow(1 + std::sqrt(3.0), 2) / (4 * std::sqrt(2.0)), 1e-12);
    EXPECT_NEAR(lower_bound(build_target("sh^2"), 1), 1.3194792, 1e-6);
    for (unsigned k = 0; k < 4; ++k) EXPECT_NEAR(lower_bound(build_target("mixed(2)"), k), 0.25 * std::pow(2.0, -0.5 * k), 1e-15);
}

TEST(GrowthThreshold, Values) {
    EXPECT_NEAR(growth_threshold(MagicFamily::H), 0.54311, 1e-5);
    EXPECT_NEAR(growth_threshold(MagicFamily::SH), 0.89997, 1e-5);
    EXPECT_DOUBLE_EQ(growth_threshold(MagicFamily::H), 2 * std::log2((1 + std::sqrt(2.0)) / 2));
}

TEST(Convertibility, Verdicts) {
    EXPECT_EQ(convertibility_check(1.0, std::sqrt(2.0)), Verdict::Inconvertible);
    EXPECT_EQ(convertibility_check(1.3, 1.3), Verdict::Undetermined);
    EXPECT_EQ(convertibility_check(1.3, 1.3 + 1e-12), Verdict::Undetermined);
    EXPECT_EQ(convertibility_check(2.0, 1.5), Verdict::Undetermined);
}

TEST(Convertibility, PlusCannotReachTPlusWithCliffords) {
    const auto stabs = enumerate_chain(1, 0)[0];
    const double r_plus = solve(build_target("plus"), stabs), r_t = solve(build_target("tplus"), stabs);
    EXPECT_NEAR(r_plus, 1.0, 1e-12);
    EXPECT_EQ(convertibility_check(r_plus, r_t), Verdict::Inconvertible);
}

TEST(Convertibility, SynthesisWrapperOnCCZ) {
    // R_{k+dk}(CCZ|+>^3) against R_k((T|+>)^(k'-dk)).
    const auto ccz = build_target("ccz");
    const auto chain3 = enumerate_chain(3, 1);
    const double r0_ccz = solve(ccz, chain3[0]), r1_ccz = solve(ccz, chain3[1]);
    const double r0_t3 = solve(build_target("tplus^3"), chain3[0]);
    const double r0_t2 = solve(build_target("tplus^2"), enumerate_chain(2, 0)[0]);
    const std::vector<SynthesisEvidence> three{{0, 0, r0_ccz, r0_t3}};
    const auto w = synthesis_lower_bound(3, three);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->k, 0u);
    EXPECT_EQ(w->dk, 0u);
    // with k' = 4 none of these comparisons rules the circuit out
    const std::vector<SynthesisEvidence> four{{0, 1, r1_ccz, r0_t3}};
    EXPECT_FALSE(synthesis_lower_bound(4, four).has_value());
    const std::vector<SynthesisEvidence> bad{{0, 3, r1_ccz, r0_t2}};
    EXPECT_THROW(synthesis_lower_bound(2, bad), std::invalid_argument);
}

TEST(ProductCost, Examples) {
    const std::vector<CostPart> ones{{1.0, 1, 3}};
    EXPECT_DOUBLE_EQ(product_cost(ones, 3), 1.0);
    const double r = (1 + 3 * std::sqrt(2.0)) / 3;
    const std::vector<CostPart> two{{r, 0, 2}};
    EXPECT_NEAR(product_cost(two, 0), 3.0539, 1e-4);
    EXPECT_DOUBLE_EQ(product_cost({}, 0), 1.0);
    EXPECT_THROW(product_cost(ones, 2), std::invalid_argument);
}

TEST(RecognizeSurd, KnownForms) {
    EXPECT_EQ(recognize_surd(std::sqrt(2.0)), "sqrt(2)");
    EXPECT_EQ(recognize_surd(7 - 4 * std::sqrt(2.0)), "7 - 4*sqrt(2)");
    EXPECT_EQ(recognize_surd((1 + 3 * std::sqrt(2.0)) / 3), "(1 + 3*sqrt(2))/3");
    EXPECT_EQ(recognize_surd(2.2), "11/5");
    EXPECT_EQ(recognize_surd(std::sqrt(3.0)), "sqrt(3)");
    EXPECT_EQ(recognize_surd(1.0), "1");
    EXPECT_EQ(recognize_surd(319 - 224 * std::sqrt(2.0)), "319 - 224*sqrt(2)");
    EXPECT_FALSE(recognize_surd(std::nan("")).has_value());
}

// ---------------------------------------------------------------------------
// Solving

TEST(SolveRobustness, Examples) {
    const auto one = enumerate_chain(1, 2);
    const auto two = enumerate_chain(2, 1);
    EXPECT_NEAR(solve(build_target("tplus"), one[0]), std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(solve(build_target("tplus^2"), two[1]), 7 - 4 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(solve(build_target("sh"), one[2]), std::sqrt(6.0) / (1 + std::sqrt(2.0)), 1e-9);
    EXPECT_NEAR(solve(build_target("sh"), one[0]), std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(solve(build_target("mixed(1)"), one[0]), 1.0, 1e-9);
}

TEST(SolveRobustness, CertificatesHold) {
    const auto two = enumerate_chain(2, 2);
    for (const char *expr : {"tplus^2", "sh^2", "cs", "tplus*sh", "h*plus"})
        for (unsigned k = 0; k <= 2; ++k) {
            const auto t = build_target(expr);
            const auto p = assemble_problem(t, two[k]);
            const auto r = solve_robustness(t, p);
            SCOPED_TRACE(std::string(expr) + " k=" + std::to_string(k));
            expect_certificate(p, r);
            EXPECT_NEAR(r.negativity, (r.value - 1) / 2, 1e-15);
            // lifted dual equals the row dual without symmetry
            for (std::size_t a = 0; a < r.dual.size(); ++a) EXPECT_EQ(r.dual[a], r.dual_rows[a]);
        }
}

TEST(SolveRobustness, InfeasibleWhenSetIsTooSmall) {
    StateSet tiny(1, 0, SetKind::Cumulative);
    tiny.add(ExactState::zero(1));
    tiny.finalize();
    const auto t = build_target("plus");
    EXPECT_THROW(solve_robustness(t, assemble_problem(t, tiny)), LPInfeasible);
}

TEST(SolveRobustness, Faithfulness) {
    const auto chain = enumerate_chain(2, 2);
    std::mt19937_64 rng(5);
    for (unsigned k = 0; k <= 2; ++k) {
        const LPProblem base = assemble_problem(build_target("mixed(2)"), chain[k]);
        std::uniform_int_distribution<std::size_t> pick(0, chain[k].size() - 1);
        for (int i = 0; i < 15; ++i) {
            const auto t = target_from_exact(chain[k].state(pick(rng)), "member");
            LPProblem p = base;
            p.lp.b = Eigen::Map<const Eigen::VectorXd>(t.b.data(), static_cast<Eigen::Index>(t.b.size()));
            EXPECT_NEAR(solve_robustness(t, p).value, 1.0, 1e-8);
        }
    }
}

TEST(SolveRobustness, MonotoneInK) {
    const auto chain = enumerate_chain(2, 3);
    for (const char *expr : {"sh^2", "tplus^2", "cs"}) {
        const auto t = build_target(expr);
        double prev = INFINITY;
        for (unsigned k = 0; k <= 3; ++k) {
            const double r = solve(t, chain[k]);
            EXPECT_LE(r, prev + 1e-9) << expr << " k=" << k;
            EXPECT_GE(r, 1 - 1e-9);
            prev = r;
        }
    }
}

TEST(SolveRobustness, SubMultiplicative) {
    const auto one = enumerate_chain(1, 2);
    const auto two = enumerate_chain(2, 2);
    const auto a = build_target("tplus"), b = build_target("sh");
    const auto ab = tensor(a, b);
    for (unsigned k = 0; k <= 1; ++k)
        for (unsigned kp = 0; kp + k <= 2; ++kp) EXPECT_LE(solve(ab, two[k + kp]), solve(a, one[k]) * solve(b, one[kp]) + 1e-7);
}

TEST(SolveRobustness, ConvexOnMixtures) {
    const auto one = enumerate_chain(1, 2);
    const auto a = build_target("tplus"), b = build_target("sh");
    for (unsigned k = 0; k <= 2; ++k)
        for (double p : {0.1, 0.5, 0.8}) EXPECT_LE(solve(mixture(p, a, b), one[k]), p * solve(a, one[k]) + (1 - p) * solve(b, one[k]) + 1e-7);
}

TEST(SolveRobustness, JsonDocument) {
    const auto t = build_target("tplus^2");
    const auto r = solve_robustness(t, assemble_problem(t, enumerate_chain(2, 1)[1]));
    const auto j = to_json(r);
    for (const char *key : {"target", "n", "k", "symmetry", "value", "lower_bound", "duality_gap", "negativity", "decomposition", "solver"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["symbolic_hint"], "7 - 4*sqrt(2)");
    EXPECT_EQ(j["value_display"], "1.3431458");
    EXPECT_TRUE(j["solver"].contains("time_ms"));
    EXPECT_FALSE(to_json(r, false)["solver"].contains("time_ms"));
    EXPECT_EQ(to_json(r, false).dump(), to_json(solve_robustness(t, assemble_problem(t, enumerate_chain(2, 1)[1])), false).dump());
}

TEST(Membership, MeetInTheMiddle) {
    const auto chain = enumerate_chain(3, 2);
    const auto t3 = build_target("tplus^3");
    EXPECT_TRUE(meet_in_the_middle(*t3.exact, chain[2], 1).has_value());
    EXPECT_FALSE(meet_in_the_middle(*t3.exact, chain[1], 1).has_value());
    EXPECT_TRUE(meet_in_the_middle(*t3.exact, chain[2], 0) == std::nullopt);
    const auto ccz = build_target("ccz");
    EXPECT_FALSE(meet_in_the_middle(*ccz.exact, chain[2], 1).has_value());
    const auto hit = meet_in_the_middle(*ccz.exact, chain[2], 2);
    ASSERT_TRUE(hit.has_value());
    const auto r = membership_result(ccz, 4, *hit, 2);
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.duality_gap, 0.0);
    EXPECT_LE(r.lower_bound, 1.0);
}
