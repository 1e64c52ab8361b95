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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckt/pauli.hpp"
#include "ckt/zomega.hpp"

namespace ckt {

using Amp = ZOmega<std::int64_t>;

/// Coefficients are kept below this bound so that products never wrap.
inline constexpr std::int64_t kCoefficientLimit = std::int64_t{1} << 40;

/**
 * Pure n-qubit state with amplitudes amps[j] / sqrt(2)^denom_exp, amps in Z[omega].
 *
 * Basis index j has qubit q at bit q. Every operation returns a state in
 * lowest denominator exponent; sum_j |amps[j]|^2 == 2^denom_exp always holds.
 */
class ExactState {
public:
    ExactState() = default;

    /// |0...0>
    static ExactState zero(unsigned n) {
        if (n == 0 || n > kMaxQubits) throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
        ExactState s;
        s.n_ = n;
        s.amps_.assign(std::size_t{1} << n, Amp{});
        s.amps_[0] = Amp::one();
        return s;
    }

    /// Builds from raw numerators; reduces and validates the norm.
    static ExactState from_raw(unsigned n, int denom_exp, std::vector<Amp> amps) {
        if (n == 0 || n > kMaxQubits) throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
        if (amps.size() != (std::size_t{1} << n)) throw std::invalid_argument("amplitude count must be 2^n");
        if (denom_exp < 0) throw std::invalid_argument("negative denominator exponent");
        ExactState s;
        s.n_ = n;
        s.denom_exp_ = denom_exp;
        s.amps_ = std::move(amps);
        s.reduce();
        if (!s.is_normalized()) throw std::invalid_argument("state is not unit norm");
        return s;
    }

    unsigned n() const { return n_; }
    int denom_exp() const { return denom_exp_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Amp> amps() const { return amps_; }
    const Amp &amp(std::size_t j) const { return amps_[j]; }

    bool is_normalized() const {
        ZRootTwo<std::int64_t> total{};
        for (const Amp &x : amps_) total = total + x.norm_sq();
        return total.b == 0 && denom_exp_ < 62 && total.a == (std::int64_t{1} << denom_exp_);
    }

    std::vector<std::complex<double>> to_complex() const {
        std::vector<std::complex<double>> v(amps_.size());
        const double scale = std::pow(M_SQRT1_2, denom_exp_);
        for (std::size_t j = 0; j < amps_.size(); ++j) v[j] = amps_[j].to_complex() * scale;
        return v;
    }

    friend bool operator==(const ExactState &, const ExactState &) = default;

    /// Lexicographic order on (denom_exp, amplitude coefficients).
    friend bool operator<(const ExactState &x, const ExactState &y) {
        if (x.n_ != y.n_) return x.n_ < y.n_;
        if (x.denom_exp_ != y.denom_exp_) return x.denom_exp_ < y.denom_exp_;
        return x.amps_ < y.amps_;
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(denom_exp_) * 0x9e3779b97f4a7c15ULL + n_;
        for (const Amp &x : amps_) {
            detail::hash_combine(h, static_cast<std::uint64_t>(x.a));
            detail::hash_combine(h, static_cast<std::uint64_t>(x.b));
            detail::hash_combine(h, static_cast<std::uint64_t>(x.c));
            detail::hash_combine(h, static_cast<std::uint64_t>(x.d));
        }
        return h;
    }

    // ---- mutation in place (used by the free functions below) ----

    void reduce() {
        while (denom_exp_ > 0 && std::all_of(amps_.begin(), amps_.end(), [](const Amp &x) { return x.divisible_by_sqrt2(); })) {
            for (Amp &x : amps_) x = x.div_sqrt2();
            --denom_exp_;
        }
        check_bounds();
    }

    void multiply_phase(int omega_power) {
        for (Amp &x : amps_) x = x.mul_omega_pow(omega_power);
    }

    void apply_gate(const GateOp &g) {
        check_gate(g, n_);
        const std::size_t m = std::size_t{1} << g.q0;
        switch (g.gate) {
            case Gate::H:
                for (std::size_t j = 0; j < amps_.size(); ++j) {
                    if (j & m) continue;
                    const Amp a0 = amps_[j], a1 = amps_[j | m];
                    amps_[j] = a0 + a1;
                    amps_[j | m] = a0 - a1;
                }
                ++denom_exp_;
                reduce();
                break;
            case Gate::S:
                for (std::size_t j = 0; j < amps_.size(); ++j)
                    if (j & m) amps_[j] = amps_[j].mul_omega_pow(2);
                break;
            case Gate::CNOT: {
                const std::size_t t = std::size_t{1} << g.q1;
                for (std::size_t j = 0; j < amps_.size(); ++j)
                    if ((j & m) && !(j & t)) std::swap(amps_[j], amps_[j | t]);
                break;
            }
            case Gate::X:
            case Gate::Y:
            case Gate::Z: {
                PauliOperator p{n_, 0, 0};
                if (g.gate != Gate::Z) p.x = static_cast<std::uint32_t>(m);
                if (g.gate != Gate::X) p.z = static_cast<std::uint32_t>(m);
                apply_pauli(p);
                break;
            }
        }
    }

    /// T (or T^dagger) on qubit q: |1> picks up omega (or omega^-1).
    void apply_t(unsigned q, bool dagger = false) {
        if (q >= n_) throw std::out_of_range("qubit index out of range");
        const std::size_t m = std::size_t{1} << q;
        for (std::size_t j = 0; j < amps_.size(); ++j)
            if (j & m) amps_[j] = amps_[j].mul_omega_pow(dagger ? 7 : 1);
    }

    /// state <- P state (P = X^x Z^z with Y = iXZ per qubit).
    void apply_pauli(const PauliOperator &p) {
        check_dims(p);
        std::vector<Amp> out(amps_.size());
        const int base = 2 * static_cast<int>(p.y_count());
        for (std::size_t j = 0; j < amps_.size(); ++j) {
            const int phase = base + 4 * (std::popcount(static_cast<std::uint32_t>(j) & p.z) & 1);
            out[j ^ p.x] = amps_[j].mul_omega_pow(phase);
        }
        amps_ = std::move(out);
    }

    /**
     * state <- R_P(+-pi/4) state, up to the global phase exp(-+i pi/8).
     *
     * exp(-i pi/8 P) = exp(-i pi/8) ((1 + omega) I + (1 - omega) P) / 2, so the
     * exact update is ((1 + w) psi + (1 - w) P psi) / 2 with w = omega for
     * angle_sign = +1 and w = conj(omega) for -1.
     */
    void apply_pauli_rotation(const PauliOperator &p, int angle_sign) {
        check_dims(p);
        if (angle_sign != 1 && angle_sign != -1) throw std::invalid_argument("angle_sign must be +1 or -1");
        const int wpow = angle_sign > 0 ? 1 : 7;
        const int base = 2 * static_cast<int>(p.y_count());
        std::vector<Amp> out(amps_.size());
        for (std::size_t j = 0; j < amps_.size(); ++j) {
            // (P psi)[j ^ x] = phase(j) psi[j]
            const std::size_t src = j ^ p.x;
            const int phase = base + 4 * (std::popcount(static_cast<std::uint32_t>(src) & p.z) & 1);
            const Amp ppsi = amps_[src].mul_omega_pow(phase);
            out[j] = amps_[j] + amps_[j].mul_omega_pow(wpow) + ppsi - ppsi.mul_omega_pow(wpow);
        }
        amps_ = std::move(out);
        denom_exp_ += 2;
        reduce();
    }

    /// Multiplies by the unit omega^m making the first nonzero amplitude lexicographically maximal.
    void canonicalize() {
        auto it = std::find_if(amps_.begin(), amps_.end(), [](const Amp &x) { return !x.is_zero(); });
        if (it == amps_.end()) throw std::invalid_argument("cannot canonicalize the zero vector");
        int best = 0;
        Amp best_amp = *it;
        Amp cur = *it;
        for (int m = 1; m < 8; ++m) {
            cur = cur.mul_omega();
            if (cur > best_amp) {
                best_amp = cur;
                best = m;
            }
        }
        if (best != 0) multiply_phase(best);
    }

private:
    void check_dims(const PauliOperator &p) const {
        if (p.n != n_) throw std::invalid_argument("pauli/state qubit count mismatch");
    }

    void check_bounds() const {
        for (const Amp &x : amps_) {
            if (std::llabs(x.a) > kCoefficientLimit || std::llabs(x.b) > kCoefficientLimit || std::llabs(x.c) > kCoefficientLimit ||
                std::llabs(x.d) > kCoefficientLimit)
                throw ArithmeticOverflow("exact amplitude coefficient exceeds 64-bit working range");
        }
    }

    unsigned n_{0};
    int denom_exp_{0};
    std::vector<Amp> amps_;
};

struct ExactStateHash {
    std::size_t operator()(const ExactState &s) const { return s.hash(); }
};

// ---------------------------------------------------------------------------
// Pure-function surface.

inline ExactState apply_clifford_generator(ExactState s, const GateOp &g) {
    s.apply_gate(g);
    return s;
}

inline ExactState apply_clifford_word(ExactState s, const CliffordWord &word) {
    for (const GateOp &g : word) s.apply_gate(g);
    return s;
}

inline ExactState apply_pauli_rotation(ExactState s, const PauliOperator &p, int angle_sign) {
    s.apply_pauli_rotation(p, angle_sign);
    return s;
}

inline ExactState canonical_form(ExactState s) {
    s.canonicalize();
    return s;
}

/// <psi|P|psi> * 2^denom_exp as an element of Z[sqrt2].
inline ZRootTwo<std::int64_t> pauli_expectation_numerator(const ExactState &s, const PauliOperator &p) {
    if (p.n != s.n()) throw std::invalid_argument("pauli/state qubit count mismatch");
    Amp acc{};
    const int base = 2 * static_cast<int>(p.y_count());
    for (std::size_t j = 0; j < s.dim(); ++j) {
        const int phase = base + 4 * (std::popcount(static_cast<std::uint32_t>(j) & p.z) & 1);
        acc += s.amp(j ^ p.x).conj() * s.amp(j).mul_omega_pow(phase);
    }
    return acc.real_root_two();
}

inline DyadicRootTwo pauli_expectation_exact(const ExactState &s, const PauliOperator &p) {
    const auto num = pauli_expectation_numerator(s, p);
    return DyadicRootTwo::make(num.a, num.b, s.denom_exp());
}

inline double pauli_expectation(const ExactState &s, const PauliOperator &p) {
    return pauli_expectation_exact(s, p).to_double();
}

/**
 * All 4^n expectation numerators (Z[sqrt2] over 2^denom_exp), indexed by the
 * dense Pauli index. Uses a Walsh-Hadamard transform over the z-bits.
 */
inline std::vector<ZRootTwo<std::int64_t>> expectation_numerators(const ExactState &s) {
    const unsigned n = s.n();
    const std::size_t dim = s.dim();
    std::vector<ZRootTwo<std::int64_t>> out(pauli_count(n));
    std::vector<Amp> buf(dim);
    for (std::uint32_t x = 0; x < dim; ++x) {
        for (std::size_t j = 0; j < dim; ++j) buf[j] = s.amp(j ^ x).conj() * s.amp(j);
        for (std::size_t h = 1; h < dim; h <<= 1)
            for (std::size_t j = 0; j < dim; ++j)
                if (!(j & h)) {
                    const Amp u = buf[j], v = buf[j | h];
                    buf[j] = u + v;
                    buf[j | h] = u - v;
                }
        for (std::uint32_t z = 0; z < dim; ++z) {
            const PauliOperator p{n, x, z};
            const Amp val = buf[z].mul_omega_pow(2 * static_cast<int>(p.y_count()));
            out[p.index()] = val.real_root_two();
        }
    }
    return out;
}

inline std::vector<double> expectation_vector(const ExactState &s) {
    const auto nums = expectation_numerators(s);
    std::vector<double> v(nums.size());
    const double scale = std::ldexp(1.0, -s.denom_exp());
    for (std::size_t a = 0; a < nums.size(); ++a) v[a] = nums[a].to_double() * scale;
    return v;
}

/// Tensor product; `lo` occupies the low qubits.
inline ExactState tensor(const ExactState &lo, const ExactState &hi) {
    const unsigned n = lo.n() + hi.n();
    if (n > kMaxQubits) throw std::invalid_argument("tensor product exceeds the qubit limit");
    std::vector<Amp> amps(std::size_t{1} << n);
    for (std::size_t jh = 0; jh < hi.dim(); ++jh)
        for (std::size_t jl = 0; jl < lo.dim(); ++jl) amps[jl | (jh << lo.n())] = lo.amp(jl) * hi.amp(jh);
    return ExactState::from_raw(n, lo.denom_exp() + hi.denom_exp(), std::move(amps));
}

// ---------------------------------------------------------------------------
// Floating mirror, for targets outside Z[omega] and for cross-checks.

using ComplexVector = std::vector<std::complex<double>>;

inline double pauli_expectation(const ComplexVector &psi, const PauliOperator &p) {
    if (psi.size() != (std::size_t{1} << p.n)) throw std::invalid_argument("pauli/state qubit count mismatch");
    static constexpr std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> acc{};
    const std::complex<double> base = ipow[p.y_count() & 3u];
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double sgn = (std::popcount(static_cast<std::uint32_t>(j) & p.z) & 1) ? -1.0 : 1.0;
        acc += std::conj(psi[j ^ p.x]) * psi[j] * base * sgn;
    }
    return acc.real();
}

}  // namespace ckt
