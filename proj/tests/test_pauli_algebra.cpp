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

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "gtest/gtest.h"

#include "ckt/enumeration.hpp"
#include "ckt/exact_state.hpp"
#include "ckt/pauli.hpp"
#include "dense_oracle.hpp"

using namespace ckt;

namespace {

ExactState plus_state() { return apply_clifford_generator(ExactState::zero(1), {Gate::H, 0, 0}); }

ExactState t_plus() {
    ExactState s = plus_state();
    s.apply_t(0);
    return s;
}

/// |H> ~ S^dagger H T^dagger H |0>
ExactState h_magic() {
    ExactState s = ExactState::zero(1);
    s.apply_gate({Gate::H, 0, 0});
    s.apply_t(0, true);
    s.apply_gate({Gate::H, 0, 0});
    for (int i = 0; i < 3; ++i) s.apply_gate({Gate::S, 0, 0});
    return s;
}

GateOp random_gate(std::mt19937_64 &rng, unsigned n) {
    std::uniform_int_distribution<int> kind(0, n > 1 ? 5 : 4);
    std::uniform_int_distribution<unsigned> qubit(0, n - 1);
    const int g = kind(rng);
    const unsigned q = qubit(rng);
    switch (g) {
        case 0: return {Gate::H, q, 0};
        case 1: return {Gate::S, q, 0};
        case 2: return {Gate::X, q, 0};
        case 3: return {Gate::Y, q, 0};
        case 4: return {Gate::Z, q, 0};
        default: {
            unsigned t = qubit(rng);
            while (t == q) t = qubit(rng);
            return {Gate::CNOT, q, t};
        }
    }
}

oracle::Mat dense_gate(const GateOp &g, unsigned n) {
    switch (g.gate) {
        case Gate::H: return oracle::embed(oracle::one_qubit('H'), g.q0, n);
        case Gate::S: return oracle::embed(oracle::one_qubit('S'), g.q0, n);
        case Gate::X: return oracle::embed(oracle::one_qubit('X'), g.q0, n);
        case Gate::Y: return oracle::embed(oracle::one_qubit('Y'), g.q0, n);
        case Gate::Z: return oracle::embed(oracle::one_qubit('Z'), g.q0, n);
        case Gate::CNOT: return oracle::cnot(g.q0, g.q1, n);
    }
    return {};
}

/// Random Clifford+T state built from gates and T's.
ExactState random_state(std::mt19937_64 &rng, unsigned n, int steps) {
    ExactState s = ExactState::zero(n);
    std::uniform_int_distribution<int> coin(0, 3);
    std::uniform_int_distribution<unsigned> qubit(0, n - 1);
    for (int i = 0; i < steps; ++i) {
        if (coin(rng) == 0)
            s.apply_t(qubit(rng));
        else
            s.apply_gate(random_gate(rng, n));
    }
    return s;
}

}  // namespace

TEST(ZOmega, RingArithmeticMatchesComplex) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-50, 50);
    for (int trial = 0; trial < 500; ++trial) {
        const Amp x{coef(rng), coef(rng), coef(rng), coef(rng)};
        const Amp y{coef(rng), coef(rng), coef(rng), coef(rng)};
        EXPECT_LT(std::abs((x * y).to_complex() - x.to_complex() * y.to_complex()), 1e-9);
        EXPECT_LT(std::abs(x.conj().to_complex() - std::conj(x.to_complex())), 1e-9);
        EXPECT_LT(std::abs(x.mul_omega().to_complex() - x.to_complex() * std::polar(1.0, M_PI / 4)), 1e-9);
        EXPECT_NEAR(x.norm_sq().to_double(), std::norm(x.to_complex()), 1e-7);
        EXPECT_EQ(x.mul_sqrt2().div_sqrt2(), x);
        EXPECT_TRUE(x.mul_sqrt2().divisible_by_sqrt2());
        EXPECT_EQ(x.mul_omega_pow(8), x);
    }
}

TEST(ZOmega, ArbitraryPrecisionCoefficients) {
    using Big = boost::multiprecision::cpp_int;
    using ZB = ZOmega<Big>;
    ZB x{Big(1) << 70, 3, -5, Big(1) << 65};
    ZB y{7, Big(-1) << 66, 2, 1};
    const ZB p = x * y;
    // cross-check a small product against the int64 instance
    const ZB u{3, -2, 5, 1}, v{-4, 1, 1, 9};
    const Amp ui{3, -2, 5, 1}, vi{-4, 1, 1, 9};
    const Amp pi = ui * vi;
    const ZB pb = u * v;
    EXPECT_EQ(pb, (ZB{pi.a, pi.b, pi.c, pi.d}));
    EXPECT_EQ(p.mul_sqrt2().div_sqrt2(), p);
    EXPECT_EQ(x.conj().conj(), x);
}

TEST(ZRootTwo, ExactSign) {
    EXPECT_EQ((ZRootTwo<long>{3, -2}).sign(), 1);   // 3 - 2.83
    EXPECT_EQ((ZRootTwo<long>{-3, 2}).sign(), -1);
    EXPECT_EQ((ZRootTwo<long>{2, -1}).sign(), 1);   // 2 - 1.41
    EXPECT_EQ((ZRootTwo<long>{1, -1}).sign(), -1);
    EXPECT_EQ((ZRootTwo<long>{0, 0}).sign(), 0);
}

TEST(DyadicRootTwo, LowestTermsIsCanonical) {
    const auto a = DyadicRootTwo::make(4, 2, 3);
    const auto b = DyadicRootTwo::make(2, 1, 2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.exp, 2);
    EXPECT_EQ(DyadicRootTwo::make(0, 0, 9), (DyadicRootTwo{0, 0, 0}));
    EXPECT_DOUBLE_EQ(DyadicRootTwo::make(0, 1, 1).to_double(), M_SQRT1_2);
}

TEST(PauliOperator, IndexBijection) {
    for (unsigned n = 1; n <= 3; ++n) {
        for (std::uint64_t a = 0; a < pauli_count(n); ++a) {
            const auto p = PauliOperator::from_index(n, a);
            EXPECT_EQ(p.index(), a);
            EXPECT_EQ(PauliOperator::parse(p.str()), p);
        }
    }
    EXPECT_EQ(PauliOperator::parse("IXYZ").index(), 0u * 1 + 1u * 4 + 2u * 16 + 3u * 64);
    EXPECT_THROW(PauliOperator::parse("XQ"), std::invalid_argument);
    EXPECT_THROW(PauliOperator::parse(""), std::invalid_argument);
}

TEST(ApplyCliffordGenerator, HadamardOnZero) {
    const ExactState plus = plus_state();
    EXPECT_EQ(plus.denom_exp(), 1);
    EXPECT_EQ(plus.amp(0), Amp::one());
    EXPECT_EQ(plus.amp(1), Amp::one());
}

TEST(ApplyCliffordGenerator, PhaseOnPlus) {
    const ExactState s = apply_clifford_generator(plus_state(), {Gate::S, 0, 0});
    EXPECT_EQ(s.denom_exp(), 1);
    EXPECT_EQ(s.amp(0), Amp::one());
    EXPECT_EQ(s.amp(1), Amp::imag());
}

TEST(ApplyCliffordGenerator, CnotOnZeroZero) {
    const ExactState s = apply_clifford_generator(ExactState::zero(2), {Gate::CNOT, 0, 1});
    EXPECT_EQ(s, ExactState::zero(2));
}

TEST(ApplyCliffordGenerator, RejectsBadIndices) {
    EXPECT_THROW(apply_clifford_generator(ExactState::zero(2), {Gate::H, 2, 0}), std::out_of_range);
    EXPECT_THROW(apply_clifford_generator(ExactState::zero(2), {Gate::CNOT, 0, 5}), std::out_of_range);
    EXPECT_THROW(apply_clifford_generator(ExactState::zero(2), {Gate::CNOT, 1, 1}), std::invalid_argument);
}

TEST(ApplyCliffordGenerator, MatchesDenseOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + trial % 3;
        ExactState s = random_state(rng, n, 6);
        oracle::Vec v = oracle::to_vec(s.to_complex());
        const GateOp g = random_gate(rng, n);
        s.apply_gate(g);
        v = dense_gate(g, n) * v;
        EXPECT_LT((oracle::to_vec(s.to_complex()) - v).norm(), 1e-12);
        EXPECT_TRUE(s.is_normalized());
    }
}

TEST(ApplyPauliRotation, RzOnZeroIsZeroAfterCanonicalization) {
    const ExactState s = apply_pauli_rotation(ExactState::zero(1), PauliOperator::parse("Z"), 1);
    EXPECT_EQ(canonical_form(s), ExactState::zero(1));
}

TEST(ApplyPauliRotation, RzOnPlusIsTPlus) {
    const ExactState s = apply_pauli_rotation(plus_state(), PauliOperator::parse("Z"), 1);
    EXPECT_EQ(canonical_form(s), canonical_form(t_plus()));
}

TEST(ApplyPauliRotation, RxOnZeroMatchesFloatOracle) {
    // exact update is R_X(pi/4)|0> times exp(+i pi/8)
    const ExactState s = apply_pauli_rotation(ExactState::zero(1), PauliOperator::parse("X"), 1);
    oracle::Vec zero(2);
    zero << 1, 0;
    const oracle::Vec expected = oracle::rotation(oracle::pauli("X"), M_PI / 4) * zero;
    const oracle::Vec got = oracle::to_vec(s.to_complex()) * std::polar(1.0, -M_PI / 8);
    EXPECT_NEAR(std::abs(got(0) - std::cos(M_PI / 8)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(got(1) - oracle::cd(0, -std::sin(M_PI / 8))), 0.0, 1e-12);
    EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(ApplyPauliRotation, BothSignsMatchDenseOracleUpToPhase) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + trial % 3;
        const ExactState s = random_state(rng, n, 5);
        std::uniform_int_distribution<std::uint64_t> pick(0, pauli_count(n) - 1);
        const auto p = PauliOperator::from_index(n, pick(rng));
        const int sign = trial % 2 ? 1 : -1;
        const ExactState r = apply_pauli_rotation(s, p, sign);
        EXPECT_TRUE(r.is_normalized());
        const oracle::Vec expected = oracle::rotation(oracle::pauli(p.str()), sign * M_PI / 4) * oracle::to_vec(s.to_complex());
        const oracle::Vec got = oracle::to_vec(r.to_complex()) * std::polar(1.0, -sign * M_PI / 8);
        EXPECT_LT((got - expected).norm(), 1e-12);
    }
}

TEST(ConjugatePauli, HadamardMapsXToZ) {
    const auto [p, sign] = conjugate_pauli_by_clifford(PauliOperator::parse("X"), {{Gate::H, 0, 0}});
    EXPECT_EQ(p.str(), "Z");
    EXPECT_EQ(sign, 1);
}

TEST(ConjugatePauli, PhaseMapsYToMinusX) {
    const auto [p, sign] = conjugate_pauli_by_clifford(PauliOperator::parse("Y"), {{Gate::S, 0, 0}});
    EXPECT_EQ(p.str(), "X");
    EXPECT_EQ(sign, -1);
}

TEST(ConjugatePauli, EmptyWord) {
    const auto [p, sign] = conjugate_pauli_by_clifford(PauliOperator::parse("Z"), {});
    EXPECT_EQ(p.str(), "Z");
    EXPECT_EQ(sign, 1);
}

TEST(ConjugatePauli, OneQubitTable) {
    const std::vector<std::tuple<char, std::string, std::string, int>> table = {
        {'H', "X", "Z", 1}, {'H', "Y", "Y", -1}, {'H', "Z", "X", 1},
        {'S', "X", "Y", 1}, {'S', "Y", "X", -1}, {'S', "Z", "Z", 1},
    };
    for (const auto &[g, in, out, s] : table) {
        const auto [p, sign] = conjugate_pauli(PauliOperator::parse(in), {g == 'H' ? Gate::H : Gate::S, 0, 0});
        EXPECT_EQ(p.str(), out);
        EXPECT_EQ(sign, s);
    }
}

TEST(ConjugatePauli, MatchesDenseOracleAndInverts) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const unsigned n = 1 + trial % 3;
        CliffordWord word;
        for (int i = 0; i < 8; ++i) word.push_back(random_gate(rng, n));
        std::uniform_int_distribution<std::uint64_t> pick(0, pauli_count(n) - 1);
        const auto p = PauliOperator::from_index(n, pick(rng));
        const auto [q, sign] = conjugate_pauli_by_clifford(p, word);
        oracle::Mat c = oracle::Mat::Identity(std::size_t{1} << n, std::size_t{1} << n);
        for (const GateOp &g : word) c = dense_gate(g, n) * c;
        const oracle::Mat lhs = c * oracle::pauli(p.str()) * c.adjoint();
        EXPECT_LT((lhs - static_cast<double>(sign) * oracle::pauli(q.str())).norm(), 1e-10);
        if (!p.is_identity()) {
            EXPECT_FALSE(q.is_identity());
        }
        const auto [back, sign2] = conjugate_pauli_by_clifford(q, inverse_word(word));
        EXPECT_EQ(back, p);
        EXPECT_EQ(sign * sign2, 1);
    }
}

TEST(PauliExpectation, Examples) {
    EXPECT_EQ(pauli_expectation(ExactState::zero(1), PauliOperator::parse("Z")), 1.0);
    const ExactState h = h_magic();
    EXPECT_NEAR(pauli_expectation(h, PauliOperator::parse("X")), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(pauli_expectation(h, PauliOperator::parse("Z")), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(pauli_expectation(h, PauliOperator::parse("Y")), 0.0, 1e-15);
    EXPECT_EQ(pauli_expectation_exact(h, PauliOperator::parse("X")), DyadicRootTwo::make(0, 1, 1));
    // |SH> is outside Z[omega]; use the floating mirror built from its Bloch vector.
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    const ComplexVector sh = {std::cos(theta / 2), std::polar(std::sin(theta / 2), M_PI / 4)};
    EXPECT_NEAR(pauli_expectation(sh, PauliOperator::parse("Y")), 1.0 / std::sqrt(3.0), 1e-12);
    EXPECT_THROW(pauli_expectation(ExactState::zero(2), PauliOperator::parse("Z")), std::invalid_argument);
}

TEST(PauliExpectation, IdentityIsOneAndExactMatchesFloat) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned n = 1 + trial % 4;
        const ExactState s = random_state(rng, n, 10);
        const auto exact = expectation_vector(s);
        EXPECT_EQ(exact[0], 1.0);
        const oracle::Vec v = oracle::to_vec(s.to_complex());
        for (std::uint64_t a = 0; a < pauli_count(n); ++a) {
            const auto p = PauliOperator::from_index(n, a);
            const double direct = pauli_expectation(s, p);
            EXPECT_NEAR(exact[a], direct, 1e-12);
            EXPECT_NEAR(direct, oracle::expectation(v, oracle::pauli(p.str())), 1e-12);
            EXPECT_LE(std::abs(direct), 1.0 + 1e-12);
        }
    }
}

TEST(CanonicalForm, RemovesOmegaPhase) {
    ExactState s = ExactState::zero(1);
    s.multiply_phase(7);
    EXPECT_EQ(canonical_form(s), ExactState::zero(1));
    const ExactState plus = plus_state();
    EXPECT_EQ(canonical_form(plus), plus);
    EXPECT_EQ(canonical_form(canonical_form(t_plus())), canonical_form(t_plus()));
}

TEST(CanonicalForm, OmegaCubedInvariantOnEnumeratedStates) {
    const auto chain = enumerate_chain(2, 2);
    const StateSet &set = chain.back();
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const ExactState psi = set.state(pick(rng));
        ExactState rotated = psi;
        rotated.multiply_phase(3);
        EXPECT_EQ(canonical_form(rotated), canonical_form(psi));
        EXPECT_EQ(canonical_form(psi), psi);
    }
}

TEST(CanonicalForm, ZeroVectorRejected) {
    EXPECT_THROW(ExactState::from_raw(1, 0, {Amp{}, Amp{}}), std::invalid_argument);
}

TEST(ExactState, NormConservedUnderAllOperations) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + trial % 3;
        ExactState s = random_state(rng, n, 12);
        std::uniform_int_distribution<std::uint64_t> pick(0, pauli_count(n) - 1);
        s.apply_pauli_rotation(PauliOperator::from_index(n, pick(rng)), 1);
        s.apply_pauli(PauliOperator::from_index(n, pick(rng)));
        s.canonicalize();
        EXPECT_TRUE(s.is_normalized());
    }
}

TEST(ExactState, TensorProductMultipliesExpectations) {
    const ExactState a = t_plus();
    const ExactState b = h_magic();
    const ExactState ab = tensor(a, b);
    const auto ea = expectation_vector(a), eb = expectation_vector(b), eab = expectation_vector(ab);
    for (std::uint64_t i = 0; i < 4; ++i)
        for (std::uint64_t j = 0; j < 4; ++j) EXPECT_NEAR(eab[i + 4 * j], ea[i] * eb[j], 1e-14);
}
