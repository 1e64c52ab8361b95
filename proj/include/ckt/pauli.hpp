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

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ckt {

/// Largest qubit count supported by the dense representations.
inline constexpr unsigned kMaxQubits = 8;

/**
 * An n-qubit Pauli operator without global phase, stored as (x_bits, z_bits).
 *
 * Qubit q maps to bit q. x = z = 1 on a qubit denotes Y itself (Y = i X Z),
 * so no phase is ever stored.
 *
 * The dense index used for LP rows encodes one base-4 digit per qubit with
 * I = 0, X = 1, Y = 2, Z = 3; qubit 0 is the least significant digit.
 */
struct PauliOperator {
    unsigned n{0};
    std::uint32_t x{0};
    std::uint32_t z{0};

    static PauliOperator identity(unsigned n) { return {n, 0, 0}; }

    static PauliOperator from_index(unsigned n, std::uint64_t index) {
        PauliOperator p{n, 0, 0};
        for (unsigned q = 0; q < n; ++q) {
            const unsigned digit = static_cast<unsigned>((index >> (2 * q)) & 3u);
            if (digit == 1 || digit == 2) p.x |= 1u << q;
            if (digit == 2 || digit == 3) p.z |= 1u << q;
        }
        return p;
    }

    std::uint64_t index() const {
        std::uint64_t r = 0;
        for (unsigned q = 0; q < n; ++q) {
            const unsigned xb = (x >> q) & 1u, zb = (z >> q) & 1u;
            const unsigned digit = xb ? (zb ? 2u : 1u) : (zb ? 3u : 0u);
            r |= static_cast<std::uint64_t>(digit) << (2 * q);
        }
        return r;
    }

    bool is_identity() const { return x == 0 && z == 0; }

    /// Number of Y factors; P|j> picks up i^{y_count}.
    unsigned y_count() const { return static_cast<unsigned>(std::popcount(x & z)); }

    /// Character i of the string is qubit i; accepts I, X, Y, Z.
    static PauliOperator parse(std::string_view s) {
        if (s.empty() || s.size() > kMaxQubits) throw std::invalid_argument("pauli string must have 1.." + std::to_string(kMaxQubits) + " letters");
        PauliOperator p{static_cast<unsigned>(s.size()), 0, 0};
        for (unsigned q = 0; q < s.size(); ++q) {
            switch (s[q]) {
                case 'I': break;
                case 'X': p.x |= 1u << q; break;
                case 'Y': p.x |= 1u << q; p.z |= 1u << q; break;
                case 'Z': p.z |= 1u << q; break;
                default: throw std::invalid_argument(std::string("invalid pauli letter '") + s[q] + "'");
            }
        }
        return p;
    }

    std::string str() const {
        std::string s(n, 'I');
        for (unsigned q = 0; q < n; ++q) {
            const bool xb = (x >> q) & 1u, zb = (z >> q) & 1u;
            s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
        }
        return s;
    }

    friend bool operator==(const PauliOperator &, const PauliOperator &) = default;
};

inline std::uint64_t pauli_count(unsigned n) { return std::uint64_t{1} << (2 * n); }

enum class Gate : std::uint8_t { H, S, CNOT, X, Y, Z };

/// One Clifford generator; q1 is the CNOT target and ignored otherwise.
struct GateOp {
    Gate gate;
    unsigned q0{0};
    unsigned q1{0};

    friend bool operator==(const GateOp &, const GateOp &) = default;
};

/// Clifford circuit in application order: word[0] acts first.
using CliffordWord = std::vector<GateOp>;

inline void check_gate(const GateOp &g, unsigned n) {
    if (g.q0 >= n) throw std::out_of_range("qubit index " + std::to_string(g.q0) + " out of range for n=" + std::to_string(n));
    if (g.gate == Gate::CNOT) {
        if (g.q1 >= n) throw std::out_of_range("qubit index " + std::to_string(g.q1) + " out of range for n=" + std::to_string(n));
        if (g.q0 == g.q1) throw std::invalid_argument("CNOT needs distinct control and target");
    }
}

/**
 * Conjugates P by one generator: returns (G P G^dagger) as (P', sign).
 */
inline std::pair<PauliOperator, int> conjugate_pauli(PauliOperator p, const GateOp &g) {
    check_gate(g, p.n);
    const std::uint32_t m = 1u << g.q0;
    const bool xb = p.x & m, zb = p.z & m;
    int sign = 1;
    switch (g.gate) {
        case Gate::H:
            if (xb && zb) sign = -1;
            p.x = (p.x & ~m) | (zb ? m : 0u);
            p.z = (p.z & ~m) | (xb ? m : 0u);
            break;
        case Gate::S:
            // X -> Y, Y -> -X
            if (xb && zb) sign = -1;
            if (xb) p.z ^= m;
            break;
        case Gate::X:
            if (zb) sign = -1;
            break;
        case Gate::Z:
            if (xb) sign = -1;
            break;
        case Gate::Y:
            if (xb != zb) sign = -1;
            break;
        case Gate::CNOT: {
            const std::uint32_t t = 1u << g.q1;
            const bool xt = p.x & t, zt = p.z & t;
            if (xb && zt && (xt == zb)) sign = -1;
            if (xb) p.x ^= t;
            if (zt) p.z ^= m;
            break;
        }
    }
    return {p, sign};
}

/**
 * Conjugates P by the circuit C = word[m-1] ... word[0]: returns C P C^dagger.
 *
 * The sign is the +/-1 with C P C^dagger = sign * P'.
 */
inline std::pair<PauliOperator, int> conjugate_pauli_by_clifford(PauliOperator p, const CliffordWord &word) {
    int sign = 1;
    for (const GateOp &g : word) {
        auto [q, s] = conjugate_pauli(p, g);
        p = q;
        sign *= s;
    }
    return {p, sign};
}

/// Inverse circuit (S^dagger expressed as S^3).
inline CliffordWord inverse_word(const CliffordWord &word) {
    CliffordWord inv;
    inv.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (it->gate == Gate::S) {
            inv.insert(inv.end(), 3, *it);
        } else {
            inv.push_back(*it);
        }
    }
    return inv;
}

/// Swap of two qubits as three CNOTs.
inline CliffordWord swap_word(unsigned a, unsigned b) {
    return {{Gate::CNOT, a, b}, {Gate::CNOT, b, a}, {Gate::CNOT, a, b}};
}

}  // namespace ckt
