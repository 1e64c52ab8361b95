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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ckt/enumeration.hpp"
#include "ckt/lp_solver.hpp"
#include "ckt/parallel.hpp"
#include "ckt/symmetry.hpp"
#include "ckt/target.hpp"

namespace ckt {

/**
 * Basis-pursuit instance. Column j stands for the states members[j]; under a
 * symmetry group its entries are the orbit-averaged expectations of the
 * first member on the surviving orbit rows.
 */
struct LPProblem {
    unsigned n{0};
    unsigned k{0};
    L1Problem lp;
    std::vector<std::uint32_t> rows;                   // Pauli index (orbit representative) per row
    std::vector<std::vector<std::uint32_t>> members;   // state ids behind each column
    std::string symmetry{"none"};
    std::size_t group_order{1};
    std::optional<OrbitTable> orbits;                  // set when reduced

    std::size_t columns() const { return members.size(); }
};

struct PseudoMixture {
    struct Term {
        std::uint32_t state_id;
        double coeff;
    };
    std::vector<Term> terms;

    double l1() const {
        double s = 0;
        for (const Term &t : terms) s += std::abs(t.coeff);
        return s;
    }
    double sum() const {
        double s = 0;
        for (const Term &t : terms) s += t.coeff;
        return s;
    }
    double negative_mass() const {
        double s = 0;
        for (const Term &t : terms) s += std::max(0.0, -t.coeff);
        return s;
    }
};

struct RobustnessResult {
    std::string target;
    unsigned n{0};
    unsigned k{0};
    std::string symmetry{"none"};
    std::size_t group_order{1};
    double value{0};
    double lower_bound{0};
    double dual_value{0};
    double duality_gap{0};
    double negativity{0};
    PseudoMixture decomposition;
    std::vector<double> dual;       // lifted to all 4^n Pauli indices
    std::vector<double> dual_rows;  // one per LP row
    std::optional<std::string> symbolic_hint;
    std::string method{"lp"};
    std::size_t rows{0};
    std::size_t columns{0};
    std::size_t iterations{0};
    double time_ms{0};
};

// ---------------------------------------------------------------------------
// Analytic side.

/// Sum_a |b_a| / (2^n sqrt2^k).
inline double lower_bound(const TargetState &t, unsigned k) {
    double s = 0;
    for (double v : t.b) s += std::abs(v);
    return s * std::pow(0.5, t.n) * std::pow(M_SQRT1_2, k);
}

enum class MagicFamily { H, SH };

/// k/n below which the single-qubit lower bound grows exponentially in n.
inline double growth_threshold(MagicFamily f) {
    const double per_qubit = f == MagicFamily::H ? 1.0 + std::sqrt(2.0) : 1.0 + std::sqrt(3.0);
    return 2.0 * std::log2(per_qubit / 2.0);
}

enum class Verdict { Inconvertible, Undetermined };

inline const char *to_string(Verdict v) { return v == Verdict::Inconvertible ? "inconvertible" : "undetermined"; }

/// A source at level k cannot reach a target whose level-(k + dk) robustness is larger.
inline Verdict convertibility_check(double r_source, double r_target) {
    return r_target > r_source + 1e-9 ? Verdict::Inconvertible : Verdict::Undetermined;
}

/// One comparison R_{k+dk}(U|+>^n) against R_k((T|+>)^(k'-dk)).
struct SynthesisEvidence {
    unsigned k{0};
    unsigned dk{0};
    double r_unitary{0};
    double r_tplus{0};
};

struct SynthesisWitness {
    unsigned k{0};
    unsigned dk{0};
};

/// First comparison proving that U needs more than k_prime T gates, if any.
inline std::optional<SynthesisWitness> synthesis_lower_bound(unsigned k_prime, std::span<const SynthesisEvidence> evidence) {
    for (const SynthesisEvidence &e : evidence) {
        if (e.dk > k_prime) throw std::invalid_argument("dk exceeds the T budget");
        if (convertibility_check(e.r_tplus, e.r_unitary) == Verdict::Inconvertible) return SynthesisWitness{e.k, e.dk};
    }
    return std::nullopt;
}

struct CostPart {
    double value{1};
    unsigned k{0};
    unsigned multiplicity{1};
};

/// Sampling cost of a tensor product of independently decomposed blocks.
inline double product_cost(std::span<const CostPart> parts, unsigned budget_k) {
    double cost = 1;
    std::uint64_t used = 0;
    for (const CostPart &p : parts) {
        used += static_cast<std::uint64_t>(p.k) * p.multiplicity;
        cost *= std::pow(p.value, p.multiplicity);
    }
    if (used > budget_k) throw std::invalid_argument("blocks use " + std::to_string(used) + " T gates, budget is " + std::to_string(budget_k));
    return cost;
}

/**
 * Closed-form candidate (p + q sqrt(d)) / r for d in {2, 3}, |p|, |q|, |r| <= 512.
 * Smallest r wins, then smallest |q|.
 */
inline std::optional<std::string> recognize_surd(double v, double tol = 1e-10) {
    if (!std::isfinite(v)) return std::nullopt;
    for (int r = 1; r <= 512; ++r) {
        for (int qa = 0; qa <= 512; ++qa) {
            for (int d : {2, 3}) {
                if (qa == 0 && d == 3) continue;
                for (int q : {qa, -qa}) {
                    if (qa == 0 && q != 0) continue;
                    const double p_real = r * v - q * std::sqrt(static_cast<double>(d));
                    const double p = std::round(p_real);
                    if (std::abs(p) > 512 || std::abs(p_real - p) > tol * r) continue;
                    std::string s;
                    const auto pi = static_cast<long>(p);
                    if (q == 0) {
                        s = std::to_string(pi);
                    } else {
                        const std::string surd = (qa == 1 ? "" : std::to_string(qa) + "*") + "sqrt(" + std::to_string(d) + ")";
                        if (pi == 0) s = (q < 0 ? "-" : "") + surd;
                        else s = std::to_string(pi) + (q < 0 ? " - " : " + ") + surd;
                    }
                    if (r != 1) s = ((q != 0 && pi != 0) ? "(" + s + ")" : s) + "/" + std::to_string(r);
                    return s;
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assembly.

/// Full expectation columns over all 4^n Paulis. Distinct pure states have distinct columns, so nothing merges.
inline LPProblem assemble_problem(const TargetState &t, const StateSet &states, unsigned threads = 1) {
    if (states.n() != t.n) throw std::invalid_argument("target and state set qubit counts differ");
    LPProblem p;
    p.n = t.n;
    p.k = states.k();
    const std::size_t m = pauli_count(t.n), cols = states.size();
    p.lp.A.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cols));
    p.lp.b = Eigen::Map<const Eigen::VectorXd>(t.b.data(), static_cast<Eigen::Index>(m));
    p.rows.resize(m);
    std::iota(p.rows.begin(), p.rows.end(), 0u);
    p.members.resize(cols);
    constexpr std::size_t kChunk = 1024;
    parallel_chunks((cols + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
        for (std::size_t i = c * kChunk; i < std::min(cols, (c + 1) * kChunk); ++i) {
            const auto e = expectation_vector(states.state(i));
            p.lp.A.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(m));
            p.members[i] = {static_cast<std::uint32_t>(i)};
        }
    });
    return p;
}

namespace detail {

inline LPProblem assemble_from_keys(const TargetState &t, unsigned k, const SymmetryGroup &g, const OrbitTable &orbits, std::vector<std::uint32_t> rows,
                                    std::vector<std::uint32_t> ids, std::vector<ColumnKey> keys) {
    LPProblem p;
    p.n = t.n;
    p.k = k;
    p.symmetry = g.spec().str();
    p.group_order = g.order();
    p.orbits = orbits;
    p.rows = std::move(rows);
    // Merge identical reduced columns; the first (least) id speaks for the column.
    std::unordered_map<ColumnKey, std::uint32_t, ColumnKeyHash> slot;
    std::vector<std::uint32_t> col_key;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto [it, fresh] = slot.try_emplace(keys[i], static_cast<std::uint32_t>(p.members.size()));
        if (fresh) {
            p.members.push_back({ids[i]});
            col_key.push_back(static_cast<std::uint32_t>(i));
        } else {
            p.members[it->second].push_back(ids[i]);
        }
    }
    const auto m = static_cast<Eigen::Index>(p.rows.size());
    p.lp.A.resize(m, static_cast<Eigen::Index>(p.members.size()));
    for (std::size_t j = 0; j < p.members.size(); ++j) {
        const auto col = column_from_key(keys[col_key[j]], g.order());
        p.lp.A.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(col.data(), m);
    }
    const auto sym_b = g.symmetrize(t.b);
    p.lp.b.resize(m);
    for (Eigen::Index r = 0; r < m; ++r) p.lp.b(r) = sym_b[p.rows[static_cast<std::size_t>(r)]];
    return p;
}

}  // namespace detail

/**
 * Symmetry-reduced problem. `states` is either a full cumulative set (its
 * orbits are formed here) or a set of orbit representatives.
 */
inline LPProblem assemble_symmetric(const TargetState &t, const StateSet &states, const SymmetryGroup &g, unsigned threads = 1) {
    if (states.n() != t.n || g.n() != t.n) throw std::invalid_argument("target, state set and group qubit counts differ");
    for (std::size_t e = 0; e < g.order(); ++e)
        if (const auto bad = detail::first_violation(g.element(e), t.b)) throw SymmetryError("group does not fix the target", *bad);
    const OrbitTable orbits = reduced_rows(g);
    std::vector<std::uint32_t> ids;
    std::vector<ColumnKey> keys;
    if (states.kind() == SetKind::Representatives) {
        const auto rows = orbits.lp_rows();
        ids.resize(states.size());
        keys.resize(states.size());
        constexpr std::size_t kChunk = 1024;
        parallel_chunks((states.size() + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
            for (std::size_t i = c * kChunk; i < std::min(states.size(), (c + 1) * kChunk); ++i) {
                ids[i] = static_cast<std::uint32_t>(i);
                keys[i] = symmetrized_column_key(states.state(i), g, rows);
            }
        });
        return detail::assemble_from_keys(t, states.k(), g, orbits, rows, std::move(ids), std::move(keys));
    }
    SymmetrizedColumns sc = symmetrized_columns(states, g, threads);
    return detail::assemble_from_keys(t, states.k(), g, orbits, std::move(sc.rows), std::move(sc.rep_ids), std::move(sc.keys));
}

// ---------------------------------------------------------------------------
// Solving.

/// Spreads reduced duals back over every Pauli index of their orbit.
inline std::vector<double> lift_dual(const LPProblem &p, const Eigen::VectorXd &y) {
    std::vector<double> full(pauli_count(p.n), 0.0);
    if (!p.orbits) {
        for (std::size_t r = 0; r < p.rows.size(); ++r) full[p.rows[r]] = y(static_cast<Eigen::Index>(r));
        return full;
    }
    const OrbitTable &o = *p.orbits;
    std::unordered_map<std::uint32_t, std::size_t> row_of_orbit;
    for (std::size_t r = 0; r < p.rows.size(); ++r) row_of_orbit[o.orbit_of[p.rows[r]]] = r;
    for (std::size_t a = 0; a < full.size(); ++a) {
        const auto it = row_of_orbit.find(o.orbit_of[a]);
        if (it == row_of_orbit.end()) continue;
        full[a] = y(static_cast<Eigen::Index>(it->second)) * o.rel_sign[a] / static_cast<double>(o.sizes[o.orbit_of[a]]);
    }
    return full;
}

inline RobustnessResult solve_robustness(const TargetState &t, const LPProblem &p, L1Solver &solver) {
    if (p.n != t.n) throw std::invalid_argument("target and problem qubit counts differ");
    const L1Solution sol = solver.solve(p.lp);
    RobustnessResult r;
    r.target = t.expr;
    r.n = p.n;
    r.k = p.k;
    r.symmetry = p.symmetry;
    r.group_order = p.group_order;
    r.value = sol.value;
    r.dual_value = sol.dual_value;
    r.duality_gap = sol.value - sol.dual_value;
    r.negativity = (sol.value - 1.0) / 2.0;
    r.lower_bound = lower_bound(t, p.k);
    for (Eigen::Index j = 0; j < sol.x.size(); ++j)
        if (sol.x(j) != 0.0) r.decomposition.terms.push_back({p.members[static_cast<std::size_t>(j)].front(), sol.x(j)});
    std::sort(r.decomposition.terms.begin(), r.decomposition.terms.end(), [](const auto &a, const auto &b) { return a.state_id < b.state_id; });
    r.dual_rows.assign(sol.y.data(), sol.y.data() + sol.y.size());
    r.dual = lift_dual(p, sol.y);
    r.symbolic_hint = recognize_surd(sol.value);
    r.rows = p.rows.size();
    r.columns = p.columns();
    r.iterations = sol.iterations;
    r.time_ms = sol.time_ms;
    return r;
}

inline RobustnessResult solve_robustness(const TargetState &t, const LPProblem &p) {
    RevisedSimplex solver;
    return solve_robustness(t, p, solver);
}

/// Residual checks of a solved instance against its own problem.
struct CertificateReport {
    double max_residual{0};        // |A c - b|_inf
    double dual_infeasibility{0};  // |A^T y|_inf
    double coefficient_sum{0};
    double l1{0};
};

inline CertificateReport check_certificate(const LPProblem &p, const RobustnessResult &r) {
    CertificateReport rep;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.lp.A.cols());
    std::unordered_map<std::uint32_t, Eigen::Index> col_of;
    for (std::size_t j = 0; j < p.members.size(); ++j) col_of[p.members[j].front()] = static_cast<Eigen::Index>(j);
    for (const auto &term : r.decomposition.terms) x(col_of.at(term.state_id)) = term.coeff;
    rep.max_residual = (p.lp.A * x - p.lp.b).lpNorm<Eigen::Infinity>();
    const Eigen::Map<const Eigen::VectorXd> y(r.dual_rows.data(), static_cast<Eigen::Index>(r.dual_rows.size()));
    rep.dual_infeasibility = (p.lp.A.transpose() * y).lpNorm<Eigen::Infinity>();
    rep.coefficient_sum = r.decomposition.sum();
    rep.l1 = r.decomposition.l1();
    return rep;
}

// ---------------------------------------------------------------------------
// Membership shortcut for exact pure targets.

/**
 * Decides whether an exact pure target is a Clifford+kT state with
 * k = forward.k() + back_steps by meeting in the middle: every product of at
 * most back_steps inverse rotations R_P(-pi/4) is applied to the target and
 * looked up in the forward set. Returns the forward id hit, if any.
 */
inline std::optional<std::uint32_t> meet_in_the_middle(const ExactState &target, const StateSet &forward, unsigned back_steps) {
    if (target.n() != forward.n()) throw std::invalid_argument("target and set qubit counts differ");
    if (forward.kind() != SetKind::Cumulative) throw std::invalid_argument("meet in the middle needs a cumulative forward set");
    const auto paulis = detail::nontrivial_paulis(target.n());
    std::vector<ExactState> layer{canonical_form(target)};
    StateSet seen(target.n(), 0, SetKind::Cumulative);
    seen.add(layer[0]);
    for (unsigned step = 0;; ++step) {
        for (const ExactState &s : layer)
            if (const auto id = forward.find(s)) return id;
        if (step == back_steps) return std::nullopt;
        std::vector<ExactState> next;
        for (const ExactState &s : layer)
            for (const PauliOperator &p : paulis)
                for (int sign : {-1, 1}) {
                    ExactState u = canonical_form(apply_pauli_rotation(s, p, sign));
                    if (seen.add(u)) next.push_back(std::move(u));
                }
        layer = std::move(next);
    }
}

/// Robustness-one certificate for a pure target proven to be a member: c = {1}, y = e_I.
inline RobustnessResult membership_result(const TargetState &t, unsigned k, std::uint32_t forward_id, unsigned back_steps) {
    RobustnessResult r;
    r.target = t.expr;
    r.n = t.n;
    r.k = k;
    r.value = 1.0;
    r.dual_value = t.b[0];
    r.duality_gap = r.value - r.dual_value;
    r.lower_bound = lower_bound(t, k);
    r.decomposition.terms.push_back({forward_id, 1.0});
    r.dual.assign(pauli_count(t.n), 0.0);
    r.dual[0] = 1.0;
    r.dual_rows = {1.0};
    r.symbolic_hint = "1";
    r.method = back_steps == 0 ? "membership" : "membership(meet-in-the-middle, " + std::to_string(back_steps) + " back)";
    return r;
}

// ---------------------------------------------------------------------------
// Output.

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    return buf;
}

inline nlohmann::json to_json(const RobustnessResult &r, bool include_timing = true) {
    nlohmann::json j;
    j["target"] = r.target;
    j["n"] = r.n;
    j["k"] = r.k;
    j["symmetry"] = r.symmetry;
    j["group_order"] = r.group_order;
    j["method"] = r.method;
    j["value"] = r.value;
    j["value_display"] = format_value(r.value);
    j["lower_bound"] = r.lower_bound;
    j["duality_gap"] = r.duality_gap;
    j["negativity"] = r.negativity;
    auto &dec = j["decomposition"] = nlohmann::json::array();
    for (const auto &t : r.decomposition.terms) dec.push_back({{"state_id", t.state_id}, {"coeff", t.coeff}});
    if (r.symbolic_hint) j["symbolic_hint"] = *r.symbolic_hint;
    j["solver"] = {{"iterations", r.iterations}, {"rows", r.rows}, {"columns", r.columns}};
    if (include_timing) j["solver"]["time_ms"] = r.time_ms;
    return j;
}

}  // namespace ckt
