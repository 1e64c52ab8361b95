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

// L1 minimization  min |x|_1  s.t.  A x = b,  solved as an LP over the split
// x = x+ - x-. The dual is  max b.y  s.t.  |A^T y|_inf <= 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ckt {

class LPInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LPIterationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct L1Problem {
    Eigen::MatrixXd A;  // rows x columns
    Eigen::VectorXd b;
};

struct L1Solution {
    Eigen::VectorXd x;  // primal, one entry per column
    Eigen::VectorXd y;  // dual
    double value{0};    // |x|_1
    double dual_value{0};
    std::size_t iterations{0};
    double time_ms{0};
};

struct SolverOptions {
    std::size_t max_iterations{1'000'000};
    double primal_tol{1e-9};
    double dual_tol{5e-10};
    double pivot_tol{1e-9};
    std::size_t refactor_every{64};
    /// Iterations without objective progress before switching to Bland's rule.
    std::size_t stall_limit{200};
    /// Scale of the anti-degeneracy perturbation of b; 0 disables it.
    double perturb{1e-6};
};

/// Pluggable backend; callers only see this interface.
class L1Solver {
public:
    virtual ~L1Solver() = default;
    virtual L1Solution solve(const L1Problem &problem) = 0;
    virtual std::string name() const = 0;
};

/**
 * Dense revised simplex with an explicit basis inverse.
 *
 * Each column j stands for the pair (x+_j, x-_j); a basic column carries the
 * sign of the variant in the basis, so any nonsingular basis is primal
 * feasible after sign flips. The start basis is picked greedily from the
 * columns; rows it cannot cover get artificial variables, which a first
 * phase drives to zero and which stay pinned at zero afterwards. Pricing is
 * Devex with a Harris ratio test; long degenerate stalls fall back to
 * Bland's rule.
 */
class RevisedSimplex : public L1Solver {
public:
    explicit RevisedSimplex(SolverOptions opts = {}) : opts_(opts) {}
    std::string name() const override { return "revised-simplex"; }

    L1Solution solve(const L1Problem &p) override {
        const auto t0 = std::chrono::steady_clock::now();
        A_ = &p.A;
        b_ = p.b;
        m_ = p.A.rows();
        n_ = p.A.cols();
        if (p.b.size() != m_) throw std::invalid_argument("b has the wrong length");
        if (m_ == 0) throw std::invalid_argument("empty problem");
        iterations_ = 0;
        crash();
        // Solve with b nudged inside the span of the start basis first; the
        // problems here are highly degenerate and the nudge breaks the ties.
        // The true b is restored afterwards and the basis re-optimized.
        if (opts_.perturb > 0) {
            std::mt19937_64 rng(0x5eed);
            std::uniform_real_distribution<double> u(0.5, 1.0);
            Eigen::VectorXd delta = Eigen::VectorXd::Zero(m_);
            for (Eigen::Index i = 0; i < m_; ++i)
                if (!is_artificial(basis_[i])) delta += opts_.perturb * u(rng) * column(basis_[i]);
            b_ = p.b + delta;
            refactor();
            phases();
            b_ = p.b;
            refactor();
        }
        phases();

        L1Solution sol;
        sol.x = Eigen::VectorXd::Zero(n_);
        for (Eigen::Index i = 0; i < m_; ++i)
            if (!is_artificial(basis_[i])) sol.x(basis_[i]) = sign_[i] * std::max(0.0, xb_(i));
        sol.value = sol.x.lpNorm<1>();
        sol.y = duals(false);
        sol.dual_value = b_.dot(sol.y);
        sol.iterations = iterations_;
        sol.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return sol;
    }

private:
    void phases() {
        if (artificial_mass() > opts_.primal_tol) {
            run(true);
            if (artificial_mass() > 1e-8 * std::max(1.0, b_.lpNorm<Eigen::Infinity>()))
                throw LPInfeasible("target is outside the span of the state set");
        }
        run(false);
    }

    using Var = Eigen::Index;  // [0, n) structural, [n, n + m) artificial

    bool is_artificial(Var v) const { return v >= n_; }

    double cost(Var v, bool phase1) const { return (is_artificial(v) == phase1) ? 1.0 : 0.0; }

    Eigen::VectorXd column(Var v) const {
        if (is_artificial(v)) return Eigen::VectorXd::Unit(m_, v - n_);
        return A_->col(v);
    }

    Eigen::VectorXd duals(bool phase1) const {
        Eigen::VectorXd cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i], phase1);
        return binv_.transpose() * cb;
    }

    double artificial_mass() const {
        double s = 0;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (is_artificial(basis_[i])) s += std::abs(xb_(i));
        return s;
    }

    double objective(bool phase1) const {
        double s = 0;
        for (Eigen::Index i = 0; i < m_; ++i) s += cost(basis_[i], phase1) * xb_(i);
        return s;
    }

    /// Greedy well-conditioned start basis, completed with artificials.
    void crash() {
        Eigen::MatrixXd q(m_, m_);
        Eigen::Index rank = 0;
        basis_.clear();
        for (Eigen::Index j = 0; j < n_ && rank < m_; ++j) {
            Eigen::VectorXd v = A_->col(j);
            const double norm0 = v.norm();
            if (norm0 == 0) continue;
            for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(rank) * (q.leftCols(rank).transpose() * v);
            if (v.norm() < 1e-3 * norm0) continue;
            q.col(rank++) = v.normalized();
            basis_.push_back(j);
        }
        for (Eigen::Index i = 0; i < m_ && rank < m_; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Unit(m_, i);
            for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(rank) * (q.leftCols(rank).transpose() * v);
            if (v.norm() < 1e-3) continue;
            q.col(rank++) = v.normalized();
            basis_.push_back(n_ + i);
        }
        if (rank < m_) throw std::logic_error("could not complete a start basis");
        sign_.assign(m_, 1);
        is_basic_.assign(n_ + m_, false);
        for (Var v : basis_) is_basic_[v] = true;
        weight_.assign(n_, 1.0);
        refactor();
    }

    /// Recomputes the inverse and the basic values; flips signs of negative entries.
    void refactor() {
        Eigen::MatrixXd B(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = sign_[i] * column(basis_[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        binv_ = lu.inverse();
        xb_ = binv_ * b_;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (xb_(i) < -opts_.primal_tol) {
                sign_[i] = -sign_[i];
                xb_(i) = -xb_(i);
                binv_.row(i) *= -1.0;
            } else if (xb_(i) < 0) {
                xb_(i) = 0;
            }
        }
    }

    struct Entering {
        Var var{-1};
        int sign{1};
    };

    void reprice(bool phase1, Eigen::VectorXd &t) const { t.noalias() = A_->transpose() * duals(phase1); }

    Entering price(bool phase1, bool bland, const Eigen::VectorXd &t) const {
        Entering best;
        double best_score = 0;
        const double c = phase1 ? 0.0 : 1.0;
        for (Eigen::Index j = 0; j < n_; ++j) {
            if (is_basic_[j]) continue;
            const double dp = c - t(j), dm = c + t(j);
            const double d = std::min(dp, dm);
            if (d >= -opts_.dual_tol) continue;
            if (bland) return {j, dp <= dm ? 1 : -1};
            const double score = d * d / weight_[j];
            if (score > best_score) {
                best_score = score;
                best = {j, dp <= dm ? 1 : -1};
            }
        }
        return best;
    }

    void run(bool phase1) {
        bool bland = false;
        std::size_t stall = 0;
        double last = objective(phase1);
        // t = A^T y is carried across pivots and recomputed on every refactor.
        Eigen::VectorXd t(n_), rho(n_);
        reprice(phase1, t);
        for (;;) {
            if (iterations_ >= opts_.max_iterations) throw LPIterationLimit("simplex iteration limit reached");
            Entering in = price(phase1, bland, t);
            if (in.var < 0) {
                refactor();
                reprice(phase1, t);
                in = price(phase1, bland, t);
                if (in.var < 0) return;
            }
            const double dq = (phase1 ? 0.0 : 1.0) - in.sign * t(in.var);
            const Eigen::VectorXd alpha = binv_ * (in.sign * column(in.var));
            const Eigen::Index r = ratio_test(alpha, phase1, bland);
            if (r < 0) throw std::logic_error("unbounded L1 problem");
            const double theta = std::max(0.0, xb_(r)) / alpha(r);

            // Devex reference weights from the pivot row
            rho.noalias() = A_->transpose() * binv_.row(r).transpose();
            const double arq = alpha(r);
            const double wq = weight_[in.var];
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                const double ratio = rho(j) / arq;
                weight_[j] = std::max(weight_[j], ratio * ratio * wq);
            }
            const Var leaving = basis_[r];
            if (!is_artificial(leaving)) weight_[leaving] = std::max(wq / (arq * arq), 1.0);
            t += (dq / arq) * rho;

            xb_ -= theta * alpha;
            xb_(r) = theta;
            for (Eigen::Index i = 0; i < m_; ++i)
                if (xb_(i) < 0) xb_(i) = 0;
            is_basic_[leaving] = false;
            basis_[r] = in.var;
            sign_[r] = in.sign;
            is_basic_[in.var] = true;
            const Eigen::RowVectorXd pivot_row = binv_.row(r) / arq;
            binv_.noalias() -= alpha * pivot_row;
            binv_.row(r) = pivot_row;
            ++iterations_;
            if (iterations_ % opts_.refactor_every == 0) {
                refactor();
                reprice(phase1, t);
            }
            if (phase1 && artificial_mass() <= opts_.primal_tol) return;

            const double obj = objective(phase1);
            if (obj < last - 1e-11) {
                last = obj;
                stall = 0;
                bland = false;
            } else if (++stall >= opts_.stall_limit) {
                bland = true;
            }
        }
    }

    /// Harris two-pass ratio test; artificials are pinned at zero in phase 2.
    Eigen::Index ratio_test(const Eigen::VectorXd &alpha, bool phase1, bool bland) const {
        const double tol = opts_.pivot_tol * std::max(1.0, alpha.lpNorm<Eigen::Infinity>());
        if (!phase1) {
            Eigen::Index pinned = -1;
            for (Eigen::Index i = 0; i < m_; ++i)
                if (is_artificial(basis_[i]) && std::abs(alpha(i)) > tol && (pinned < 0 || std::abs(alpha(i)) > std::abs(alpha(pinned)))) pinned = i;
            if (pinned >= 0) return pinned;
        }
        double bound = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m_; ++i)
            if (alpha(i) > tol) bound = std::min(bound, (xb_(i) + opts_.primal_tol) / alpha(i));
        Eigen::Index r = -1;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (alpha(i) <= tol || xb_(i) / alpha(i) > bound) continue;
            if (r < 0) {
                r = i;
                continue;
            }
            if (bland) {
                const double ri = xb_(i) / alpha(i), rr = xb_(r) / alpha(r);
                if (ri < rr - 1e-15 || (ri <= rr + 1e-15 && basis_[i] < basis_[r])) r = i;
            } else if (alpha(i) > alpha(r) || (alpha(i) == alpha(r) && basis_[i] < basis_[r])) {
                r = i;
            }
        }
        return r;
    }

    SolverOptions opts_;
    const Eigen::MatrixXd *A_{nullptr};
    Eigen::Index m_{0}, n_{0};
    Eigen::VectorXd b_, xb_;
    std::vector<Var> basis_;
    std::vector<int> sign_;
    std::vector<bool> is_basic_;
    std::vector<double> weight_;
    Eigen::MatrixXd binv_;
    std::size_t iterations_{0};
};

}  // namespace ckt
