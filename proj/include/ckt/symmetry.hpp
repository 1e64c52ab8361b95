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

// Clifford symmetry groups of a target, Pauli-row orbits, orbit-averaged
// columns and representative-first enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ckt/enumeration.hpp"
#include "ckt/exact_state.hpp"
#include "ckt/ma_normal.hpp"
#include "ckt/parallel.hpp"
#include "ckt/pauli.hpp"

namespace ckt {

struct SymmetrySpec {
    bool perm{false};
    bool local_h{false};
    bool local_sh{false};

    bool empty() const { return !perm && !local_h && !local_sh; }
    std::string str() const {
        std::string r;
        auto add = [&](const char *s) { r += (r.empty() ? "" : "+") + std::string(s); };
        if (perm) add("perm");
        if (local_h) add("localH");
        if (local_sh) add("localSH");
        return r.empty() ? "none" : r;
    }
    friend bool operator==(const SymmetrySpec &, const SymmetrySpec &) = default;

    /// Parses "perm", "localH", "localSH" or "none"; repeated calls combine.
    void add(std::string_view token) {
        if (token == "perm")
            perm = true;
        else if (token == "localH")
            local_h = true;
        else if (token == "localSH")
            local_sh = true;
        else if (token != "none")
            throw std::invalid_argument("unknown symmetry '" + std::string(token) + "' (expected perm, localH, localSH)");
    }
};

class SymmetryError : public std::runtime_error {
public:
    SymmetryError(const std::string &what, std::uint64_t pauli_index) : std::runtime_error(what), pauli_index_(pauli_index) {}
    std::uint64_t pauli_index() const { return pauli_index_; }

private:
    std::uint64_t pauli_index_;
};

/// C P_a C^dagger = sign[a] * P_{image[a]}
struct SignedPermutation {
    std::vector<std::uint32_t> image;
    std::vector<std::int8_t> sign;

    static SignedPermutation identity(unsigned n) {
        SignedPermutation p;
        p.image.resize(pauli_count(n));
        for (std::size_t a = 0; a < p.image.size(); ++a) p.image[a] = static_cast<std::uint32_t>(a);
        p.sign.assign(p.image.size(), 1);
        return p;
    }

    static SignedPermutation of_word(unsigned n, const CliffordWord &word) {
        SignedPermutation p;
        p.image.resize(pauli_count(n));
        p.sign.resize(p.image.size());
        for (std::size_t a = 0; a < p.image.size(); ++a) {
            const auto [q, s] = conjugate_pauli_by_clifford(PauliOperator::from_index(n, a), word);
            p.image[a] = static_cast<std::uint32_t>(q.index());
            p.sign[a] = static_cast<std::int8_t>(s);
        }
        return p;
    }

    /// first `this`, then `after`
    SignedPermutation then(const SignedPermutation &after) const {
        SignedPermutation r;
        r.image.resize(image.size());
        r.sign.resize(image.size());
        for (std::size_t a = 0; a < image.size(); ++a) {
            r.image[a] = after.image[image[a]];
            r.sign[a] = static_cast<std::int8_t>(sign[a] * after.sign[image[a]]);
        }
        return r;
    }

    friend bool operator==(const SignedPermutation &, const SignedPermutation &) = default;
    friend auto operator<=>(const SignedPermutation &, const SignedPermutation &) = default;
};

namespace detail {

/// One-qubit Clifford `c` (matrix-product word) as a gate sequence on qubit q in application order.
inline CliffordWord one_qubit_word(int c, unsigned q) {
    const std::string &w = Clifford1Q::instance().word(c);
    CliffordWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({*it == 'H' ? Gate::H : Gate::S, q, 0});
    return out;
}

/// Signed 3x3 action of a one-qubit Clifford on (X, Y, Z): axis images and signs.
struct AxisAction {
    std::array<int, 3> axis{};
    std::array<int, 3> sign{};
};

inline AxisAction axis_action(int c) {
    const CliffordWord w = one_qubit_word(c, 0);
    AxisAction act;
    const std::array<const char *, 3> names{"X", "Y", "Z"};
    for (int i = 0; i < 3; ++i) {
        const auto [p, s] = conjugate_pauli_by_clifford(PauliOperator::parse(names[i]), w);
        const std::string img = p.str();
        act.axis[i] = img == "X" ? 0 : (img == "Y" ? 1 : 2);
        act.sign[i] = s;
    }
    return act;
}

/// H-class involutions (axis transposition, third axis negated) and order-3 body-diagonal rotations.
inline std::vector<int> local_candidates(bool order_three) {
    const Clifford1Q &tab = Clifford1Q::instance();
    const int literal = order_three ? tab.index_of_word("SH") : tab.h();
    std::vector<int> out{literal};
    for (int c = 0; c < Clifford1Q::kSize; ++c) {
        if (c == literal) continue;
        const AxisAction a = axis_action(c);
        int fixed = 0;
        for (int i = 0; i < 3; ++i) fixed += a.axis[i] == i;
        if (order_three && fixed == 0) out.push_back(c);
        if (!order_three && fixed == 1) {
            // transposition; the pair must map into itself with equal signs and the fixed axis negated
            int f = 0;
            while (a.axis[f] != f) ++f;
            const int u = (f + 1) % 3, v = (f + 2) % 3;
            if (a.sign[f] == -1 && a.sign[u] == a.sign[v]) out.push_back(c);
        }
    }
    return out;
}

inline std::optional<std::uint64_t> first_violation(const SignedPermutation &p, std::span<const double> b, double tol = 1e-9) {
    for (std::size_t a = 0; a < p.image.size(); ++a)
        if (std::abs(b[p.image[a]] - p.sign[a] * b[a]) > tol) return a;
    return std::nullopt;
}

}  // namespace detail

/**
 * Finite group of Clifford conjugations, stored as signed permutations of
 * Pauli indices with a Cayley tree for acting on states.
 */
class SymmetryGroup {
public:
    struct Generator {
        std::string name;
        CliffordWord word;
        SignedPermutation action;
    };

    /// Trivial group.
    explicit SymmetryGroup(unsigned n = 1) : n_(n) { close({}); }

    unsigned n() const { return n_; }
    std::size_t order() const { return elements_.size(); }
    const SignedPermutation &element(std::size_t e) const { return elements_[e]; }
    const std::vector<Generator> &generators() const { return generators_; }
    const CliffordWord &element_word(std::size_t e) const { return words_[e]; }
    const SymmetrySpec &spec() const { return spec_; }

    /// Generator names after target-specific resolution, e.g. "swap(0,1)", "H-class c7 @q0".
    std::vector<std::string> generator_names() const {
        std::vector<std::string> r;
        for (const auto &g : generators_) r.push_back(g.name);
        return r;
    }

    static SymmetryGroup build(unsigned n, const SymmetrySpec &spec, std::span<const double> target = {}) {
        if (n == 0 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range");
        if (!target.empty() && target.size() != pauli_count(n)) throw std::invalid_argument("target expectation vector has the wrong length");
        SymmetryGroup g(n, 0);
        g.spec_ = spec;
        std::vector<Generator> gens;
        auto accept = [&](Generator gen) {
            if (!target.empty())
                if (auto bad = detail::first_violation(gen.action, target))
                    throw SymmetryError("generator " + gen.name + " does not stabilize the target (Pauli " +
                                            PauliOperator::from_index(n, *bad).str() + ", index " + std::to_string(*bad) + ")",
                                        *bad);
            gens.push_back(std::move(gen));
        };
        if (spec.perm)
            for (unsigned q = 0; q + 1 < n; ++q) {
                CliffordWord w = swap_word(q, q + 1);
                accept({"swap(" + std::to_string(q) + "," + std::to_string(q + 1) + ")", w, SignedPermutation::of_word(n, w)});
            }
        for (int pass = 0; pass < 2; ++pass) {
            const bool order_three = pass == 1;
            if (!(order_three ? spec.local_sh : spec.local_h)) continue;
            const auto cands = detail::local_candidates(order_three);
            for (unsigned q = 0; q < n; ++q) {
                std::optional<Generator> chosen, literal;
                for (int c : cands) {
                    CliffordWord w = detail::one_qubit_word(c, q);
                    Generator gen{std::string(order_three ? "SH" : "H") + "-class[" + Clifford1Q::instance().word(c) + "]@q" + std::to_string(q), w,
                                  SignedPermutation::of_word(n, w)};
                    if (!literal) literal = gen;  // reported if nothing fits
                    if (target.empty() || !detail::first_violation(gen.action, target)) {
                        chosen = std::move(gen);
                        break;
                    }
                }
                if (!chosen) chosen = std::move(literal);
                accept(std::move(*chosen));
            }
        }
        g.close(std::move(gens));
        return g;
    }

    /// Applies element e to a state (C_e |psi>).
    ExactState act(std::size_t e, const ExactState &s) const {
        const auto &mono = monomial_[e];
        if (mono.empty()) return apply_clifford_word(s, words_[e]);
        std::vector<Amp> out(s.dim());
        for (std::size_t j = 0; j < s.dim(); ++j) out[mono[j].dest] = s.amp(j).mul_omega_pow(mono[j].phase);
        return ExactState::from_raw(n_, s.denom_exp(), std::move(out));
    }

    /// True when every element permutes basis states up to omega phases.
    bool monomial() const {
        return std::ranges::all_of(monomial_, [](const auto &m) { return !m.empty(); });
    }

    /// Packed key of the least canonical image of s over the group.
    void orbit_key(const ExactState &s, std::vector<std::int32_t> &best) const {
        std::vector<std::int32_t> cur;
        if (monomial()) {
            std::vector<Amp> buf(s.dim());
            for (std::size_t e = 0; e < order(); ++e) {
                const auto &mono = monomial_[e];
                for (std::size_t j = 0; j < s.dim(); ++j) buf[mono[j].dest] = s.amp(j).mul_omega_pow(mono[j].phase);
                pack_canonical(s.denom_exp(), buf, e == 0 ? best : cur);
                if (e > 0 && std::ranges::lexicographical_compare(cur, best)) best.swap(cur);
            }
            return;
        }
        std::vector<ExactState> images;
        images.reserve(order());
        images.push_back(s);
        for (std::size_t e = 1; e < order(); ++e) images.push_back(apply_clifford_word(images[parent_[e]], generators_[via_[e]].word));
        for (std::size_t e = 0; e < order(); ++e) {
            images[e].canonicalize();
            PackedStates::pack(images[e], e == 0 ? best : cur);
            if (e > 0 && std::ranges::lexicographical_compare(cur, best)) best.swap(cur);
        }
    }

    /// Distinct canonical images of s (its orbit), sorted.
    std::vector<ExactState> orbit(const ExactState &s) const {
        std::vector<ExactState> out;
        for (std::size_t e = 0; e < order(); ++e) out.push_back(canonical_form(act(e, s)));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Orbit average (1/|G|) sum_g C_g rho C_g^dagger of an expectation vector.
    std::vector<double> symmetrize(std::span<const double> e) const {
        std::vector<double> out(e.size(), 0.0);
        for (const auto &g : elements_)
            for (std::size_t a = 0; a < e.size(); ++a) out[a] += g.sign[a] * e[g.image[a]];
        for (double &v : out) v /= static_cast<double>(order());
        return out;
    }

private:
    struct MonoEntry {
        std::uint32_t dest;
        std::uint8_t phase;
    };

    SymmetryGroup(unsigned n, int) : n_(n) {}

    static void pack_canonical(int denom_exp, std::vector<Amp> &amps, std::vector<std::int32_t> &out) {
        const auto it = std::ranges::find_if(amps, [](const Amp &x) { return !x.is_zero(); });
        int bestm = 0;
        Amp cur = *it, bestv = *it;
        for (int m = 1; m < 8; ++m) {
            cur = cur.mul_omega();
            if (cur > bestv) bestv = cur, bestm = m;
        }
        out.resize(1 + 4 * amps.size());
        out[0] = denom_exp;
        for (std::size_t j = 0; j < amps.size(); ++j) {
            const Amp x = bestm ? amps[j].mul_omega_pow(bestm) : amps[j];
            out[1 + 4 * j] = static_cast<std::int32_t>(x.a);
            out[2 + 4 * j] = static_cast<std::int32_t>(x.b);
            out[3 + 4 * j] = static_cast<std::int32_t>(x.c);
            out[4 + 4 * j] = static_cast<std::int32_t>(x.d);
        }
    }

    void close(std::vector<Generator> gens) {
        generators_ = std::move(gens);
        elements_ = {SignedPermutation::identity(n_)};
        words_ = {{}};
        parent_ = {0};
        via_ = {0};
        std::map<SignedPermutation, std::size_t> seen{{elements_[0], 0}};
        for (std::size_t head = 0; head < elements_.size(); ++head)
            for (std::size_t gi = 0; gi < generators_.size(); ++gi) {
                SignedPermutation next = elements_[head].then(generators_[gi].action);
                if (seen.contains(next)) continue;
                seen.emplace(next, elements_.size());
                elements_.push_back(std::move(next));
                CliffordWord w = words_[head];
                w.insert(w.end(), generators_[gi].word.begin(), generators_[gi].word.end());
                words_.push_back(std::move(w));
                parent_.push_back(head);
                via_.push_back(gi);
            }
        monomial_.assign(order(), {});
        for (std::size_t e = 0; e < order(); ++e) {
            std::vector<MonoEntry> mono;
            for (std::size_t j = 0; j < (std::size_t{1} << n_); ++j) {
                std::vector<Amp> basis(std::size_t{1} << n_);
                basis[j] = Amp::one();
                const ExactState img = apply_clifford_word(ExactState::from_raw(n_, 0, std::move(basis)), words_[e]);
                if (img.denom_exp() != 0) break;
                const auto it = std::ranges::find_if(img.amps(), [](const Amp &x) { return !x.is_zero(); });
                const Amp unit = *it;
                int phase = -1;
                for (int m = 0; m < 8; ++m)
                    if (Amp::one().mul_omega_pow(m) == unit) phase = m;
                if (phase < 0) break;
                mono.push_back({static_cast<std::uint32_t>(it - img.amps().begin()), static_cast<std::uint8_t>(phase)});
            }
            if (mono.size() == (std::size_t{1} << n_)) monomial_[e] = std::move(mono);
        }
    }

    unsigned n_;
    SymmetrySpec spec_;
    std::vector<Generator> generators_;
    std::vector<SignedPermutation> elements_;
    std::vector<CliffordWord> words_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> via_;
    std::vector<std::vector<MonoEntry>> monomial_;
};

inline SymmetryGroup build_group(unsigned n, const SymmetrySpec &spec, std::span<const double> target = {}) {
    return SymmetryGroup::build(n, spec, target);
}

/**
 * Partition of Pauli indices into G-orbits. Orbits on which some element
 * maps P to -P carry zero expectation for every symmetric operator; they are
 * kept here but marked cancelled and left out of the LP rows.
 */
struct OrbitTable {
    std::vector<std::uint32_t> orbit_of;   // per Pauli index
    std::vector<std::int8_t> rel_sign;     // value[a] = rel_sign[a] * value[rep(orbit_of[a])]
    std::vector<std::uint32_t> reps;       // per orbit, minimum index
    std::vector<std::uint32_t> sizes;      // per orbit
    std::vector<bool> cancelled;           // per orbit

    std::size_t size() const { return reps.size(); }

    /// Representatives of the surviving orbits, in increasing index order.
    std::vector<std::uint32_t> lp_rows() const {
        std::vector<std::uint32_t> r;
        for (std::size_t o = 0; o < reps.size(); ++o)
            if (!cancelled[o]) r.push_back(reps[o]);
        return r;
    }
};

inline OrbitTable reduced_rows(const SymmetryGroup &g) {
    const std::size_t m = pauli_count(g.n());
    OrbitTable t;
    constexpr std::uint32_t kUnset = UINT32_MAX;
    t.orbit_of.assign(m, kUnset);
    t.rel_sign.assign(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
        if (t.orbit_of[a] != kUnset) continue;
        const auto o = static_cast<std::uint32_t>(t.reps.size());
        t.reps.push_back(static_cast<std::uint32_t>(a));
        t.sizes.push_back(0);
        t.cancelled.push_back(false);
        for (std::size_t e = 0; e < g.order(); ++e) {
            const auto &el = g.element(e);
            const std::uint32_t b = el.image[a];
            if (t.orbit_of[b] == kUnset) {
                t.orbit_of[b] = o;
                t.rel_sign[b] = el.sign[a];
                ++t.sizes[o];
            } else if (t.rel_sign[b] != el.sign[a]) {
                t.cancelled[o] = true;
            }
        }
    }
    return t;
}

/// Exact column key: [l, A_0, B_0, A_1, B_1, ...] meaning (A + B sqrt2) / (2^l |G|), reduced.
using ColumnKey = std::vector<std::int64_t>;

struct ColumnKeyHash {
    std::size_t operator()(const ColumnKey &k) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int64_t v : k) detail::hash_combine(h, static_cast<std::uint64_t>(v));
        return h;
    }
};

/// Orbit-averaged expectations of s on the given rows, exactly.
inline ColumnKey symmetrized_column_key(const ExactState &s, const SymmetryGroup &g, std::span<const std::uint32_t> rows) {
    const auto num = expectation_numerators(s);
    ColumnKey key(1 + 2 * rows.size());
    std::int64_t ell = s.denom_exp();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ZRootTwo<std::int64_t> acc{0, 0};
        for (std::size_t e = 0; e < g.order(); ++e) {
            const auto &el = g.element(e);
            const auto &v = num[el.image[rows[i]]];
            acc = el.sign[rows[i]] > 0 ? acc + v : acc - v;
        }
        key[1 + 2 * i] = acc.a;
        key[2 + 2 * i] = acc.b;
    }
    while (ell > 0 && std::all_of(key.begin() + 1, key.end(), [](std::int64_t v) { return v % 2 == 0; })) {
        for (auto it = key.begin() + 1; it != key.end(); ++it) *it /= 2;
        --ell;
    }
    key[0] = ell;
    return key;
}

inline std::vector<double> column_from_key(const ColumnKey &key, std::size_t group_order) {
    const double scale = std::ldexp(1.0, -static_cast<int>(key[0])) / static_cast<double>(group_order);
    std::vector<double> col((key.size() - 1) / 2);
    for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = (static_cast<double>(key[1 + 2 * i]) + static_cast<double>(key[2 + 2 * i]) * M_SQRT2) * scale;
    return col;
}

struct SymmetrizedColumns {
    std::vector<std::uint32_t> rows;          // surviving row representatives
    std::vector<std::uint32_t> rep_ids;       // one state id per orbit
    std::vector<std::uint32_t> orbit_sizes;   // members of that orbit inside the set
    std::vector<ColumnKey> keys;              // exact orbit-averaged column per representative
};

/**
 * Groups the states of a full set into G-orbits. The representative of an
 * orbit is its member with the least canonical key, hence the least id.
 */
inline SymmetrizedColumns symmetrized_columns(const StateSet &states, const SymmetryGroup &g, unsigned threads = 1) {
    if (states.n() != g.n()) throw std::invalid_argument("state set and group qubit counts differ");
    SymmetrizedColumns out;
    out.rows = reduced_rows(g).lp_rows();
    std::vector<std::uint32_t> rep_of(states.size());
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (states.size() + kChunk - 1) / kChunk;
    parallel_chunks(chunks, threads, [&](std::size_t c) {
        std::vector<std::int32_t> best;
        for (std::size_t i = c * kChunk; i < std::min(states.size(), (c + 1) * kChunk); ++i) {
            g.orbit_key(states.state(i), best);
            const auto id = states.find(PackedStates::Key{best});
            if (!id) throw std::logic_error("state set is not closed under the symmetry group");
            rep_of[i] = *id;
        }
    });
    std::unordered_map<std::uint32_t, std::uint32_t> slot;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (rep_of[i] == i) {
            slot[static_cast<std::uint32_t>(i)] = static_cast<std::uint32_t>(out.rep_ids.size());
            out.rep_ids.push_back(static_cast<std::uint32_t>(i));
            out.orbit_sizes.push_back(0);
        }
    }
    for (std::size_t i = 0; i < states.size(); ++i) ++out.orbit_sizes[slot.at(rep_of[i])];
    out.keys.resize(out.rep_ids.size());
    parallel_chunks((out.rep_ids.size() + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
        for (std::size_t r = c * kChunk; r < std::min(out.rep_ids.size(), (c + 1) * kChunk); ++r)
            out.keys[r] = symmetrized_column_key(states.state(out.rep_ids[r]), g, out.rows);
    });
    return out;
}

/// Orbit representatives of a state set under g (stored by least canonical image).
inline StateSet reduce_to_representatives(const StateSet &states, const SymmetryGroup &g) {
    StateSet out(states.n(), states.k(), SetKind::Representatives);
    std::vector<std::int32_t> best;
    for (std::size_t i = 0; i < states.size(); ++i) {
        g.orbit_key(states.state(i), best);
        out.add_key(PackedStates::Key{best});
    }
    out.finalize();
    return out;
}

/**
 * Representative-first enumeration: orbit representatives of the
 * cumulative (n, k) sets for k = 0..k_max. Only states new at level k-1 are
 * expanded, and both rotation signs are applied because a representative's
 * orbit mates reach R_P(+pi/4) images that correspond to R_P'(-pi/4) on the
 * representative itself.
 */
inline std::vector<StateSet> enumerate_representatives(unsigned n, unsigned k_max, const SymmetryGroup &g, const EnumerationOptions &opts = {},
                                                        const std::function<void(unsigned, std::size_t)> &progress = {}) {
    if (g.n() != n) throw std::invalid_argument("group qubit count differs");
    std::vector<StateSet> chain;
    chain.push_back(reduce_to_representatives(enumerate_stabilizer_states(n), g));
    if (progress) progress(0, chain.back().size());
    const auto paulis = detail::nontrivial_paulis(n);
    std::vector<std::uint32_t> frontier(chain[0].size());
    std::iota(frontier.begin(), frontier.end(), 0u);
    for (unsigned k = 1; k <= k_max; ++k) {
        const StateSet &base = chain.back();
        StateSet next(n, k, SetKind::Representatives);
        next.reserve(base.size() * 4);
        for (std::size_t i = 0; i < base.size(); ++i) next.add_key(base.key(i));
        constexpr std::size_t kChunk = 256;
        const std::size_t chunks = (frontier.size() + kChunk - 1) / kChunk;
        const unsigned threads = resolve_threads(opts.threads);
        const std::size_t window = std::max<std::size_t>(1, threads) * 4;
        for (std::size_t start = 0; start < chunks; start += window) {
            const std::size_t stop = std::min(chunks, start + window);
            std::vector<PackedStates> local(stop - start, PackedStates(n));
            parallel_chunks(stop - start, threads, [&](std::size_t c) {
                std::vector<std::int32_t> plain, best;
                PackedStates seen(n);
                const std::size_t lo = (start + c) * kChunk, hi = std::min(frontier.size(), lo + kChunk);
                for (std::size_t f = lo; f < hi; ++f) {
                    const ExactState s = base.state(frontier[f]);
                    for (const PauliOperator &p : paulis)
                        for (int sign : {1, -1}) {
                            ExactState t = apply_pauli_rotation(s, p, sign);
                            t.canonicalize();
                            PackedStates::pack(t, plain);
                            if (!seen.insert(PackedStates::Key{plain}).second) continue;
                            g.orbit_key(t, best);
                            local[c].insert(PackedStates::Key{best});
                        }
                }
            });
            for (const PackedStates &arena : local)
                for (std::size_t i = 0; i < arena.size(); ++i) next.add_key(arena.key(i));
        }
        next.finalize();
        frontier.clear();
        for (std::size_t i = 0; i < next.size(); ++i)
            if (!base.find(next.key(i))) frontier.push_back(static_cast<std::uint32_t>(i));
        chain.push_back(std::move(next));
        if (progress) progress(k, chain.back().size());
    }
    return chain;
}

}  // namespace ckt
