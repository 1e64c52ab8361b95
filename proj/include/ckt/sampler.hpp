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
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ckt/enumeration.hpp"
#include "ckt/parallel.hpp"
#include "ckt/robustness.hpp"

namespace ckt {

/// Smallest N with N >= (2 / delta^2) L1^2 ln(2 / eps).
inline std::uint64_t plan_samples(double l1, double delta, double eps) {
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0, 1)");
    if (!(eps > 0 && eps < 1)) throw std::domain_error("eps must lie in (0, 1)");
    if (!(l1 >= 1 - 1e-9) || !std::isfinite(l1)) throw std::domain_error("L1 norm must be >= 1");
    const double n = 2.0 / (delta * delta) * l1 * l1 * std::log(2.0 / eps);
    if (n > 1e15) throw std::domain_error("sample count out of range");
    return static_cast<std::uint64_t>(std::ceil(n - 1e-9 * n));
}

struct SamplingPlan {
    PseudoMixture mixture;
    std::vector<double> probabilities;
    double l1{0};
    PauliOperator observable;
    std::uint64_t shots{0};
    double delta{0};
    double eps{0};
    std::uint64_t seed{0};
};

inline SamplingPlan make_plan(PseudoMixture mixture, const PauliOperator &observable, double delta, double eps, std::uint64_t seed) {
    if (mixture.terms.empty()) throw std::invalid_argument("empty pseudo-mixture");
    SamplingPlan plan;
    plan.l1 = mixture.l1();
    plan.shots = plan_samples(plan.l1, delta, eps);
    for (const auto &t : mixture.terms) plan.probabilities.push_back(std::abs(t.coeff) / plan.l1);
    plan.mixture = std::move(mixture);
    plan.observable = observable;
    plan.delta = delta;
    plan.eps = eps;
    plan.seed = seed;
    return plan;
}

struct Estimate {
    double mean{0};
    std::uint64_t shots{0};
    double l1{0};
    double max_abs_sample{0};
};

/// Tr(P psi_i) for every term of the plan's mixture.
inline std::vector<double> term_expectations(const SamplingPlan &plan, const StateSet &states) {
    if (plan.observable.n != states.n()) throw std::invalid_argument("observable and state set qubit counts differ");
    std::vector<double> e;
    for (const auto &t : plan.mixture.terms) {
        if (t.state_id >= states.size()) throw std::out_of_range("mixture references state id " + std::to_string(t.state_id) + " outside the set");
        e.push_back(pauli_expectation(states.state(t.state_id), plan.observable));
    }
    return e;
}

/// Per-shot payoff X(i) = sgn(c_i) L1 Tr(P psi_i).
inline std::vector<double> payoffs(const SamplingPlan &plan, std::span<const double> expectations) {
    if (expectations.size() != plan.mixture.terms.size()) throw std::invalid_argument("one expectation per term expected");
    std::vector<double> x(expectations.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (plan.mixture.terms[i].coeff < 0 ? -plan.l1 : plan.l1) * expectations[i];
    return x;
}

/// Exact mean of the estimator, sum_i p_i X(i); equals sum_i c_i Tr(P psi_i).
inline double expected_estimate(const SamplingPlan &plan, std::span<const double> expectations) {
    const auto x = payoffs(plan, expectations);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += plan.probabilities[i] * x[i];
    return s;
}

inline constexpr std::uint64_t kShotsPerChunk = 1u << 14;

/**
 * Draws plan.shots samples. Chunk c of kShotsPerChunk shots uses its own
 * mt19937_64 seeded from (seed, c) and chunk sums are merged in order, so the
 * result does not depend on the worker count.
 */
inline Estimate estimate(const SamplingPlan &plan, std::span<const double> expectations, unsigned threads = 1, std::uint64_t shots = 0) {
    if (shots == 0) shots = plan.shots;
    const auto x = payoffs(plan, expectations);
    const std::size_t chunks = (shots + kShotsPerChunk - 1) / kShotsPerChunk;
    std::vector<double> sums(chunks, 0.0), peaks(chunks, 0.0);
    parallel_chunks(chunks, threads, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32), static_cast<std::uint32_t>(c),
                          static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) >> 32)};
        std::mt19937_64 rng(seq);
        std::discrete_distribution<std::size_t> pick(plan.probabilities.begin(), plan.probabilities.end());
        const std::uint64_t n = std::min<std::uint64_t>(kShotsPerChunk, shots - c * kShotsPerChunk);
        double s = 0, peak = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double v = x[pick(rng)];
            s += v;
            peak = std::max(peak, std::abs(v));
        }
        sums[c] = s;
        peaks[c] = peak;
    });
    Estimate est;
    double total = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        total += sums[c];
        est.max_abs_sample = std::max(est.max_abs_sample, peaks[c]);
    }
    est.shots = shots;
    est.mean = total / static_cast<double>(shots);
    est.l1 = plan.l1;
    return est;
}

inline Estimate estimate(const SamplingPlan &plan, const StateSet &states, unsigned threads = 1) {
    return estimate(plan, term_expectations(plan, states), threads);
}

// ---------------------------------------------------------------------------
// Strategy comparison.

/// R_k(rho^n) keyed by (n, k) for one single-qubit family rho.
using RobustnessTable = std::map<std::pair<unsigned, unsigned>, double>;

inline double table_value(const RobustnessTable &t, unsigned n, unsigned k) {
    const auto it = t.find({n, k});
    if (it == t.end()) throw std::out_of_range("robustness table lacks R_" + std::to_string(k) + " at n=" + std::to_string(n));
    return it->second;
}

struct StrategyComparison {
    double per_t_cost{0};
    double blocked_cost{0};
    std::string winner;  // "per-T", "blocked" or "tie"
};

/**
 * Two ways to spend budget_k T gates on rho^total_n. Per-T: each T gate
 * makes one rho, the remaining qubits are covered by stabilizer-decomposed
 * blocks of size n'. Blocked: every k' T gates make one rho^n' block. Costs
 * are products of block robustness values with fractional block counts.
 * total_n defaults to the qubits covered by budget_k / k' blocks.
 */
inline StrategyComparison compare_strategies(unsigned budget_k, unsigned block_n, unsigned block_k, const RobustnessTable &t, double total_n = 0) {
    if (block_n == 0) throw std::invalid_argument("block size must be >= 1");
    if (block_k > block_n) throw std::invalid_argument("block level exceeds block size");
    StrategyComparison c;
    const double r0 = table_value(t, block_n, 0);
    if (block_k == 0 || budget_k == 0) {
        if (total_n <= 0) total_n = block_n;
        c.per_t_cost = c.blocked_cost = std::pow(r0, total_n / block_n);
        c.winner = "tie";
        return c;
    }
    if (total_n <= 0) total_n = static_cast<double>(budget_k) * block_n / block_k;
    if (total_n + 1e-12 < budget_k) throw std::invalid_argument("more T gates than qubits");
    const double blocks = static_cast<double>(budget_k) / block_k;
    c.per_t_cost = std::pow(table_value(t, 1, 1), budget_k) * std::pow(r0, (total_n - budget_k) / block_n);
    c.blocked_cost = std::pow(table_value(t, block_n, block_k), blocks) * std::pow(r0, (total_n - blocks * block_n) / block_n);
    const double scale = std::max(c.per_t_cost, c.blocked_cost);
    if (c.blocked_cost < c.per_t_cost - 1e-9 * scale) c.winner = "blocked";
    else if (c.per_t_cost < c.blocked_cost - 1e-9 * scale) c.winner = "per-T";
    else c.winner = "tie";
    return c;
}

/// [R_1(rho)]^k [R_0(rho^n)]^(1 - k/n), the per-T cost normalised to one n-qubit block.
inline double per_t_block_cost(const RobustnessTable &t, unsigned n, unsigned k) {
    return std::pow(table_value(t, 1, 1), k) * std::pow(table_value(t, n, 0), 1.0 - static_cast<double>(k) / n);
}

}  // namespace ckt
