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

#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ckt/exact_state.hpp"
#include "ckt/packed_states.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

enum class SetKind : std::uint8_t {
    Cumulative = 0,       ///< all Clifford+(<=k)T states
    Strict = 1,           ///< Clifford+kT states that need exactly k T gates
    Representatives = 2,  ///< one canonical member per symmetry orbit of the cumulative set
};

inline const char *to_string(SetKind kind) {
    switch (kind) {
        case SetKind::Cumulative: return "cumulative";
        case SetKind::Strict: return "strict";
        case SetKind::Representatives: return "representatives";
    }
    return "?";
}

/**
 * Deduplicated, canonicalized collection of pure states for fixed (n, k).
 *
 * Ids are positions in ascending canonical-key order once finalize() ran,
 * so the same content always yields the same ids.
 */
class StateSet {
public:
    StateSet() = default;
    StateSet(unsigned n, unsigned k, SetKind kind) : n_(n), k_(k), kind_(kind), states_(n) {}

    unsigned n() const { return n_; }
    unsigned k() const { return k_; }
    SetKind kind() const { return kind_; }
    std::size_t size() const { return states_.size(); }

    ExactState state(std::size_t id) const { return states_.state(id); }
    PackedStates::Key key(std::size_t id) const { return states_.key(id); }

    std::optional<std::uint32_t> find(const ExactState &s) const { return states_.find(canonical_form(s)); }
    std::optional<std::uint32_t> find(PackedStates::Key key) const { return states_.find(key); }
    bool contains(const ExactState &s) const { return find(s).has_value(); }

    /// Adds canonical_form(s); returns true when new.
    bool add(const ExactState &s) {
        if (s.n() != n_) throw std::invalid_argument("state qubit count does not match the set");
        return states_.insert(canonical_form(s)).second;
    }
    bool add_key(PackedStates::Key key) { return states_.insert(key).second; }

    void reserve(std::size_t count) { states_.reserve(count); }
    void finalize() { states_.sort_keys(); }

    const PackedStates &packed() const { return states_; }
    std::size_t memory_bytes() const { return states_.memory_bytes(); }

private:
    unsigned n_{0};
    unsigned k_{0};
    SetKind kind_{SetKind::Cumulative};
    PackedStates states_;
};

// ---------------------------------------------------------------------------
// Closed-form counts.

using BigInt = boost::multiprecision::cpp_int;

/// Number of n-qubit stabilizer states: 2^n prod_{j=0}^{n-1} (2^{n-j} + 1).
inline BigInt stabilizer_state_count(unsigned n) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    BigInt r = BigInt(1) << n;
    for (unsigned j = 0; j < n; ++j) r *= (BigInt(1) << (n - j)) + 1;
    return r;
}

/// Number of n-qubit Clifford gates up to phase: 2^{n^2+2n} prod_{j=1}^n (4^j - 1).
inline BigInt count_cliffords(unsigned n) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    BigInt r = BigInt(1) << (n * n + 2 * n);
    for (unsigned j = 1; j <= n; ++j) r *= (BigInt(1) << (2 * j)) - 1;
    return r;
}

// ---------------------------------------------------------------------------
// Enumeration.

struct EnumerationOptions {
    unsigned threads{1};
    /// Apply R_P(-pi/4) as well as R_P(+pi/4). Not needed for completeness; used to check that claim.
    bool both_signs{false};
};

/// Breadth-first closure of |0..0> under H, S and CNOT.
inline StateSet enumerate_stabilizer_states(unsigned n) {
    if (n == 0 || n > kMaxQubits) throw std::invalid_argument("n must be in 1.." + std::to_string(kMaxQubits));
    std::vector<GateOp> gens;
    for (unsigned q = 0; q < n; ++q) {
        gens.push_back({Gate::H, q, 0});
        gens.push_back({Gate::S, q, 0});
        for (unsigned t = 0; t < n; ++t)
            if (t != q) gens.push_back({Gate::CNOT, q, t});
    }
    StateSet set(n, 0, SetKind::Cumulative);
    std::deque<std::uint32_t> frontier;
    set.add(ExactState::zero(n));
    frontier.push_back(0);
    // The set is not yet sorted, so ids are insertion indices here.
    while (!frontier.empty()) {
        const ExactState s = set.state(frontier.front());
        frontier.pop_front();
        for (const GateOp &g : gens) {
            const std::size_t before = set.size();
            if (set.add(apply_clifford_generator(s, g))) frontier.push_back(static_cast<std::uint32_t>(before));
        }
    }
    set.finalize();
    return set;
}

namespace detail {

/// Non-identity Paulis on n qubits, ordered by dense index.
inline std::vector<PauliOperator> nontrivial_paulis(unsigned n) {
    std::vector<PauliOperator> ps;
    for (std::uint64_t a = 1; a < pauli_count(n); ++a) ps.push_back(PauliOperator::from_index(n, a));
    return ps;
}

}  // namespace detail

/**
 * Cumulative Clifford+(<=k)T states from the cumulative (k-1) set: applies
 * R_P(+pi/4) for every non-identity P to every base state and unions with
 * the base.
 */
inline StateSet enumerate_clifford_kT(unsigned n, unsigned k, const StateSet &base, const EnumerationOptions &opts = {}) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (base.n() != n || base.k() + 1 != k || base.kind() != SetKind::Cumulative)
        throw std::invalid_argument("base set must be the cumulative (n, k-1) set");
    const auto paulis = detail::nontrivial_paulis(n);
    StateSet out(n, k, SetKind::Cumulative);
    out.reserve(base.size() * 8);
    for (std::size_t i = 0; i < base.size(); ++i) out.add_key(base.key(i));

    // Workers expand chunks of base states into local arenas; the merge walks
    // chunks in order so the final content does not depend on scheduling.
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (base.size() + kChunk - 1) / kChunk;
    const unsigned threads = resolve_threads(opts.threads);
    const std::size_t window = std::max<std::size_t>(1, threads) * 4;
    for (std::size_t start = 0; start < chunks; start += window) {
        const std::size_t stop = std::min(chunks, start + window);
        std::vector<PackedStates> local(stop - start, PackedStates(n));
        parallel_chunks(stop - start, threads, [&](std::size_t c) {
            const std::size_t lo = (start + c) * kChunk, hi = std::min(base.size(), lo + kChunk);
            PackedStates &arena = local[c];
            for (std::size_t i = lo; i < hi; ++i) {
                const ExactState s = base.state(i);
                for (const PauliOperator &p : paulis) {
                    for (int sign : {1, -1}) {
                        if (sign < 0 && !opts.both_signs) break;
                        ExactState t = apply_pauli_rotation(s, p, sign);
                        t.canonicalize();
                        arena.insert(t);
                    }
                }
            }
        });
        for (const PackedStates &arena : local)
            for (std::size_t i = 0; i < arena.size(); ++i) out.add_key(arena.key(i));
    }
    out.finalize();
    return out;
}

/// strict(k) = cumulative(k) \ cumulative(k-1), by canonical key.
inline StateSet strict_partition(const StateSet &cumulative_k, const StateSet *cumulative_k_minus_1) {
    if (cumulative_k.kind() != SetKind::Cumulative) throw std::invalid_argument("expected a cumulative set");
    StateSet out(cumulative_k.n(), cumulative_k.k(), SetKind::Strict);
    if (cumulative_k_minus_1 == nullptr) {
        if (cumulative_k.k() != 0) throw std::invalid_argument("lower cumulative set required for k >= 1");
        for (std::size_t i = 0; i < cumulative_k.size(); ++i) out.add_key(cumulative_k.key(i));
        out.finalize();
        return out;
    }
    if (cumulative_k_minus_1->n() != cumulative_k.n()) throw std::invalid_argument("qubit counts differ");
    if (cumulative_k_minus_1->kind() != SetKind::Cumulative || cumulative_k_minus_1->k() + 1 != cumulative_k.k())
        throw std::invalid_argument("expected the cumulative (k-1) set");
    for (std::size_t i = 0; i < cumulative_k.size(); ++i)
        if (!cumulative_k_minus_1->find(cumulative_k.key(i))) out.add_key(cumulative_k.key(i));
    out.finalize();
    return out;
}

/// Cumulative sets for k = 0..k_max.
inline std::vector<StateSet> enumerate_chain(unsigned n, unsigned k_max, const EnumerationOptions &opts = {}) {
    std::vector<StateSet> chain;
    chain.push_back(enumerate_stabilizer_states(n));
    for (unsigned k = 1; k <= k_max; ++k) chain.push_back(enumerate_clifford_kT(n, k, chain.back(), opts));
    return chain;
}

// ---------------------------------------------------------------------------
// One-qubit state normal forms.

namespace detail {

inline void apply_syllable(ExactState &s, int syllable) {
    // Syllables as operators: 0 = T, 1 = H T, 2 = S H T. The rightmost factor acts first.
    s.apply_t(0);
    if (syllable >= 1) s.apply_gate({Gate::H, 0, 0});
    if (syllable == 2) s.apply_gate({Gate::S, 0, 0});
}

inline std::vector<ExactState> one_qubit_stabilizers_except_z_basis() {
    const ExactState zero = ExactState::zero(1);
    const ExactState plus = apply_clifford_generator(zero, {Gate::H, 0, 0});
    const ExactState minus = apply_clifford_generator(plus, {Gate::Z, 0, 0});
    const ExactState plus_i = apply_clifford_generator(plus, {Gate::S, 0, 0});
    const ExactState minus_i = apply_clifford_generator(plus_i, {Gate::Z, 0, 0});
    return {plus, minus, plus_i, minus_i};
}

}  // namespace detail

/**
 * States T (HT|SHT){k-1} |phi>, HT (HT|SHT){k-1} |phi> and SHT (HT|SHT){k-1} |phi>
 * for |phi> in {|+>, |->, |+i>, |-i>}: 3 * 2^{k-1} * 4 canonical states.
 */
inline std::vector<ExactState> normal_form_states_1q(unsigned k) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (k > 40) throw std::invalid_argument("k too large");
    std::vector<ExactState> out;
    const auto phis = detail::one_qubit_stabilizers_except_z_basis();
    const std::uint64_t tails = std::uint64_t{1} << (k - 1);
    for (int lead = 0; lead < 3; ++lead) {
        for (std::uint64_t mask = 0; mask < tails; ++mask) {
            for (const ExactState &phi : phis) {
                ExactState s = phi;
                // tail syllables act first, listed right to left
                for (unsigned i = 0; i + 1 < k; ++i) detail::apply_syllable(s, ((mask >> i) & 1u) ? 2 : 1);
                detail::apply_syllable(s, lead);
                s.canonicalize();
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

/**
 * States R_{P_k}(+pi/4) ... R_{P_1}(+pi/4) |psi> with |psi> a one-qubit stabilizer
 * state, P_i != I, P_{i+1} != P_i and P_1 |psi> != +-|psi>.
 */
inline std::vector<ExactState> rotation_normal_form_states_1q(unsigned k) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    const StateSet stabs = enumerate_stabilizer_states(1);
    const auto paulis = detail::nontrivial_paulis(1);
    std::vector<ExactState> out;
    struct Partial {
        ExactState s;
        std::uint64_t last;
    };
    std::vector<Partial> layer;
    for (std::size_t i = 0; i < stabs.size(); ++i) {
        const ExactState psi = stabs.state(i);
        for (const PauliOperator &p : paulis) {
            // P|psi> = +-|psi> iff |<P>| = 1
            if (std::abs(pauli_expectation(psi, p)) == 1.0) continue;
            layer.push_back({apply_pauli_rotation(psi, p, 1), p.index()});
        }
    }
    for (unsigned step = 1; step < k; ++step) {
        std::vector<Partial> next;
        for (const Partial &part : layer)
            for (const PauliOperator &p : paulis)
                if (p.index() != part.last) next.push_back({apply_pauli_rotation(part.s, p, 1), p.index()});
        layer = std::move(next);
    }
    for (Partial &part : layer) out.push_back(canonical_form(std::move(part.s)));
    return out;
}

/// Bytes the packed representation of `count` n-qubit states needs, including the index.
inline double projected_bytes(unsigned n, double count) {
    const double stride = 1.0 + 4.0 * static_cast<double>(std::size_t{1} << n);
    return count * (stride * sizeof(std::int32_t) + 2.0 * sizeof(std::uint32_t) * 2.0);
}

}  // namespace ckt
