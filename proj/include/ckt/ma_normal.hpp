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

// Single-qubit {H, S, T} words and their Matsumoto-Amano normal form
// (eps | T)(HT | SHT)* C.
//
// A GateWord is read as a matrix product: "HT" is the operator H*T, so T
// acts on a state first.

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ckt/enumeration.hpp"
#include "ckt/exact_state.hpp"

namespace ckt {

using GateWord = std::string;

inline void validate_gate_word(std::string_view word) {
    for (std::size_t i = 0; i < word.size(); ++i)
        if (word[i] != 'H' && word[i] != 'S' && word[i] != 'T')
            throw std::invalid_argument("gate word may only contain H, S, T (offset " + std::to_string(i) + ")");
}

/// Exact 2x2 matrix with entries in Z[omega] / sqrt2^exp.
struct Mat2 {
    std::array<Amp, 4> m{Amp::one(), Amp{}, Amp{}, Amp::one()};  // row-major
    int exp{0};

    static Mat2 identity() { return {}; }
    static Mat2 gate(char g) {
        switch (g) {
            case 'H': return {{Amp::one(), Amp::one(), Amp::one(), -Amp::one()}, 1};
            case 'S': return {{Amp::one(), Amp{}, Amp{}, Amp::imag()}, 0};
            case 'T': return {{Amp::one(), Amp{}, Amp{}, Amp::omega()}, 0};
            case 'X': return {{Amp{}, Amp::one(), Amp::one(), Amp{}}, 0};
        }
        throw std::invalid_argument(std::string("unknown gate ") + g);
    }

    friend Mat2 operator*(const Mat2 &x, const Mat2 &y) {
        Mat2 r;
        r.m[0] = x.m[0] * y.m[0] + x.m[1] * y.m[2];
        r.m[1] = x.m[0] * y.m[1] + x.m[1] * y.m[3];
        r.m[2] = x.m[2] * y.m[0] + x.m[3] * y.m[2];
        r.m[3] = x.m[2] * y.m[1] + x.m[3] * y.m[3];
        r.exp = x.exp + y.exp;
        r.reduce();
        return r;
    }

    Mat2 adjoint() const { return {{m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()}, exp}; }

    void reduce() {
        while (exp > 0 && std::ranges::all_of(m, [](const Amp &x) { return x.divisible_by_sqrt2(); })) {
            for (Amp &x : m) x = x.div_sqrt2();
            --exp;
        }
    }

    /// Removes the global omega^j phase (first nonzero entry made maximal).
    Mat2 canonical() const {
        Mat2 r = *this;
        r.reduce();
        const auto it = std::ranges::find_if(r.m, [](const Amp &x) { return !x.is_zero(); });
        int best = 0;
        Amp cur = *it, best_amp = *it;
        for (int j = 1; j < 8; ++j) {
            cur = cur.mul_omega();
            if (cur > best_amp) best_amp = cur, best = j;
        }
        for (Amp &x : r.m) x = x.mul_omega_pow(best);
        return r;
    }

    friend bool operator==(const Mat2 &, const Mat2 &) = default;
    friend auto operator<=>(const Mat2 &x, const Mat2 &y) {
        if (x.exp != y.exp) return x.exp <=> y.exp;
        for (int i = 0; i < 4; ++i)
            if (auto c = x.m[i] <=> y.m[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
};

/// Exact unitary of a word (product left to right).
inline Mat2 word_matrix(std::string_view word) {
    validate_gate_word(word);
    Mat2 r;
    for (char g : word) r = r * Mat2::gate(g);
    return r;
}

/// Equality of words as gates up to global phase.
inline bool same_gate(std::string_view a, std::string_view b) { return word_matrix(a).canonical() == word_matrix(b).canonical(); }

/**
 * The 24 one-qubit Cliffords, indexed in breadth-first order from I under
 * right multiplication by H then S. Each element is fingerprinted by its
 * images of |0> and |+> up to phase.
 */
class Clifford1Q {
public:
    static constexpr int kSize = 24;

    static const Clifford1Q &instance() {
        static const Clifford1Q table;
        return table;
    }

    const std::string &word(int c) const { return words_.at(c); }
    const Mat2 &matrix(int c) const { return mats_.at(c); }
    int mul(int a, int b) const { return mul_[a][b]; }
    int inverse(int c) const { return inv_[c]; }
    int h() const { return index_of_word("H"); }
    int s() const { return index_of_word("S"); }

    int index(const Mat2 &m) const {
        const auto key = fingerprint(m);
        const auto it = by_fp_.find(key);
        if (it == by_fp_.end()) throw std::invalid_argument("matrix is not a Clifford");
        return it->second;
    }
    int index_of_word(std::string_view w) const { return index(word_matrix(w)); }

    /// C = A * D with A in {I, H, SH} (0, 1, 2) and D mapping Z to +-Z.
    std::pair<int, int> coset(int c) const { return coset_[c]; }
    /// For D in the Z-axis normalizer: D' with D T = T D' up to phase.
    int push_through_t(int d) const { return push_t_[d]; }

private:
    using Fingerprint = std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>;

    static std::vector<std::int64_t> image_key(const Mat2 &m, const ExactState &in) {
        std::vector<Amp> amps{m.m[0] * in.amp(0) + m.m[1] * in.amp(1), m.m[2] * in.amp(0) + m.m[3] * in.amp(1)};
        ExactState s = ExactState::from_raw(1, m.exp + in.denom_exp(), std::move(amps));
        s.canonicalize();
        std::vector<std::int64_t> key{s.denom_exp()};
        for (const Amp &x : s.amps()) key.insert(key.end(), {x.a, x.b, x.c, x.d});
        return key;
    }

    static Fingerprint fingerprint(const Mat2 &m) {
        const ExactState zero = ExactState::zero(1);
        const ExactState plus = apply_clifford_generator(zero, {Gate::H, 0, 0});
        return {image_key(m, zero), image_key(m, plus)};
    }

    Clifford1Q() {
        words_.push_back("");
        mats_.push_back(Mat2::identity());
        by_fp_[fingerprint(mats_[0])] = 0;
        for (std::size_t head = 0; head < words_.size(); ++head) {
            for (char g : {'H', 'S'}) {
                const Mat2 next = mats_[head] * Mat2::gate(g);
                const auto fp = fingerprint(next);
                if (by_fp_.contains(fp)) continue;
                by_fp_[fp] = static_cast<int>(words_.size());
                words_.push_back(words_[head] + g);
                mats_.push_back(next);
            }
        }
        if (words_.size() != kSize) throw std::logic_error("one-qubit Clifford closure has wrong size");
        for (int a = 0; a < kSize; ++a)
            for (int b = 0; b < kSize; ++b) mul_[a][b] = index(mats_[a] * mats_[b]);
        for (int a = 0; a < kSize; ++a)
            for (int b = 0; b < kSize; ++b)
                if (mul_[a][b] == 0) inv_[a] = b;

        const Mat2 t = Mat2::gate('T'), tdg = t.adjoint();
        const std::array<int, 3> heads{0, index(Mat2::gate('H')), index(Mat2::gate('S') * Mat2::gate('H'))};
        auto in_z_normalizer = [&](int d) {
            // D Z D^dagger is diagonal exactly when D maps Z to +-Z.
            const Mat2 z{{Amp::one(), Amp{}, Amp{}, -Amp::one()}, 0};
            const Mat2 img = mats_[d] * z * mats_[d].adjoint();
            return img.m[1].is_zero() && img.m[2].is_zero();
        };
        for (int c = 0; c < kSize; ++c) {
            int found = 0;
            for (int a = 0; a < 3; ++a) {
                const int d = mul_[inv_[heads[a]]][c];
                if (in_z_normalizer(d)) {
                    coset_[c] = {a, d};
                    ++found;
                }
            }
            if (found != 1) throw std::logic_error("coset decomposition is not unique");
        }
        push_t_.fill(-1);
        for (int d = 0; d < kSize; ++d)
            if (in_z_normalizer(d)) push_t_[d] = index(tdg * mats_[d] * t);
    }

    std::vector<std::string> words_;
    std::vector<Mat2> mats_;
    std::map<Fingerprint, int> by_fp_;
    std::array<std::array<int, kSize>, kSize> mul_{};
    std::array<int, kSize> inv_{};
    std::array<std::pair<int, int>, kSize> coset_{};
    std::array<int, kSize> push_t_{};
};

enum class Syllable : std::uint8_t { T = 0, HT = 1, SHT = 2 };

inline const char *to_string(Syllable s) {
    switch (s) {
        case Syllable::T: return "T";
        case Syllable::HT: return "HT";
        case Syllable::SHT: return "SHT";
    }
    return "?";
}

struct NormalForm {
    std::vector<Syllable> syllables;
    int clifford{0};  // Clifford1Q index of the trailing Clifford

    std::size_t t_count() const { return syllables.size(); }

    /// Expansion back into an {H, S, T} word.
    GateWord word() const {
        GateWord w;
        for (Syllable s : syllables) w += to_string(s);
        return w + Clifford1Q::instance().word(clifford);
    }

    std::string str() const {
        std::string r;
        for (Syllable s : syllables) r += std::string(r.empty() ? "" : " ") + to_string(s);
        if (r.empty()) r = "-";
        return r + " | C" + std::to_string(clifford);
    }

    friend bool operator==(const NormalForm &, const NormalForm &) = default;
    friend auto operator<=>(const NormalForm &, const NormalForm &) = default;
};

namespace detail {

/// nf <- nf * T
inline void append_t(NormalForm &nf, const Clifford1Q &tab) {
    const auto [head, d] = tab.coset(nf.clifford);
    const int d_after = tab.push_through_t(d);
    if (head == 1 || head == 2) {
        nf.syllables.push_back(head == 1 ? Syllable::HT : Syllable::SHT);
        nf.clifford = d_after;
        return;
    }
    if (nf.syllables.empty()) {
        nf.syllables.push_back(Syllable::T);
        nf.clifford = d_after;
        return;
    }
    // last syllable times T collapses to a Clifford: T T = S, HT T = HS, SHT T = SHS
    static const std::array<const char *, 3> collapsed{"S", "HS", "SHS"};
    const Syllable last = nf.syllables.back();
    nf.syllables.pop_back();
    nf.clifford = tab.mul(tab.index_of_word(collapsed[static_cast<int>(last)]), d_after);
}

}  // namespace detail

/// Normal form of the unitary of `word`, scanning the product left to right.
inline NormalForm to_normal_form(std::string_view word) {
    validate_gate_word(word);
    const Clifford1Q &tab = Clifford1Q::instance();
    const int h = tab.h(), s = tab.s();
    NormalForm nf;
    for (char g : word) {
        if (g == 'H')
            nf.clifford = tab.mul(nf.clifford, h);
        else if (g == 'S')
            nf.clifford = tab.mul(nf.clifford, s);
        else
            detail::append_t(nf, tab);
    }
    return nf;
}

/// Adjoint word: reversed, with S^-1 = SSS and T^-1 = T^7.
inline GateWord inverse_gate_word(std::string_view word) {
    validate_gate_word(word);
    GateWord r;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it == 'H') r += 'H';
        if (*it == 'S') r += "SSS";
        if (*it == 'T') r += "TTTTTTT";
    }
    return r;
}

/// Number of strict Clifford+kT one-qubit gates: 3 * 2^(k-1) * 24, and 24 for k = 0.
inline BigInt strict_gate_count(unsigned k) {
    if (k == 0) return 24;
    return BigInt(3) * (BigInt(1) << (k - 1)) * 24;
}

/// All normal forms with exactly k syllables.
inline std::vector<NormalForm> enumerate_normal_forms(unsigned k) {
    std::vector<std::vector<Syllable>> prefixes;
    if (k == 0) {
        prefixes.push_back({});
    } else {
        for (Syllable first : {Syllable::T, Syllable::HT, Syllable::SHT}) prefixes.push_back({first});
        for (unsigned i = 1; i < k; ++i) {
            std::vector<std::vector<Syllable>> next;
            for (const auto &p : prefixes)
                for (Syllable s : {Syllable::HT, Syllable::SHT}) {
                    next.push_back(p);
                    next.back().push_back(s);
                }
            prefixes = std::move(next);
        }
    }
    std::vector<NormalForm> out;
    out.reserve(prefixes.size() * Clifford1Q::kSize);
    for (const auto &p : prefixes)
        for (int c = 0; c < Clifford1Q::kSize; ++c) out.push_back({p, c});
    return out;
}

}  // namespace ckt
