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

#include "gtest/gtest.h"

#include "ckt/lp_solver.hpp"

using namespace ckt;

namespace {

// Minimum-L1 solutions of Ax = b are attained on a basic solution, so trying
// every column subset of size rank(A) gives the exact optimum for tiny A.
double brute_force_l1(const Eigen::MatrixXd &A, const Eigen::VectorXd &b) {
    const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick;
    auto rec = [&](auto &&self, int from) -> void {
        if (!pick.empty()) {
            Eigen::MatrixXd B(m, pick.size());
            for (std::size_t i = 0; i < pick.size(); ++i) B.col(i) = A.col(pick[i]);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
            if (qr.rank() == static_cast<int>(pick.size())) {
                const Eigen::VectorXd x = qr.solve(b);
                if ((B * x - b).norm() < 1e-9) best = std::min(best, x.lpNorm<1>());
            }
        }
        if (static_cast<int>(pick.size()) == m) return;
        for (int j = from; j < n; ++j) {
            pick.push_back(j);
            self(self, j + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return best;
}

}  // namespace

TEST(RevisedSimplex, IdentityColumns) {
    L1Problem p{Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(1, -2, 0.5)};
    RevisedSimplex s;
    const auto sol = s.solve(p);
    EXPECT_NEAR(sol.value, 3.5, 1e-12);
    EXPECT_NEAR(sol.x(1), -2, 1e-12);
    EXPECT_NEAR(sol.dual_value, sol.value, 1e-12);
}

TEST(RevisedSimplex, PrefersCheapCombination) {
    // b = column 2 exactly, which is cheaper than combining columns 0 and 1.
    Eigen::MatrixXd A(2, 3);
    A << 1, 0, 1, 0, 1, 1;
    L1Problem p{A, Eigen::Vector2d(1, 1)};
    RevisedSimplex s;
    const auto sol = s.solve(p);
    EXPECT_NEAR(sol.value, 1.0, 1e-12);
    EXPECT_NEAR(sol.x(2), 1.0, 1e-12);
}

TEST(RevisedSimplex, InfeasibleTargetThrows) {
    Eigen::MatrixXd A(3, 2);
    A << 1, 0, 0, 1, 0, 0;
    L1Problem p{A, Eigen::Vector3d(1, 1, 1)};
    RevisedSimplex s;
    EXPECT_THROW(s.solve(p), LPInfeasible);
}

TEST(RevisedSimplex, ZeroAndDuplicateColumns) {
    Eigen::MatrixXd A(2, 5);
    A << 0, 1, 1, -1, 0.5, 0, 1, 1, 1, 0.5;
    L1Problem p{A, Eigen::Vector2d(2, 0)};
    RevisedSimplex s;
    const auto sol = s.solve(p);
    EXPECT_NEAR(sol.value, brute_force_l1(A, p.b), 1e-10);
    EXPECT_NEAR((A * sol.x - p.b).norm(), 0.0, 1e-10);
}

TEST(RevisedSimplex, IterationLimitIsReported) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXd A(6, 40);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = u(rng);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = u(rng);
    SolverOptions o;
    o.max_iterations = 1;
    o.perturb = 0;
    RevisedSimplex s(o);
    EXPECT_THROW(s.solve({A, b}), LPIterationLimit);
}

TEST(RevisedSimplex, MatchesVertexEnumerationOnRandomProblems) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> pick(-2, 2);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 2 + trial % 3, n = m + 2 + trial % 5;
        Eigen::MatrixXd A(m, n);
        // half the trials use small-integer entries, which are highly degenerate
        for (int i = 0; i < A.size(); ++i) A.data()[i] = trial % 2 ? u(rng) : pick(rng) / 2.0;
        A.row(0).setOnes();
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < m; ++j) x0(j) = u(rng);
        const Eigen::VectorXd b = A * x0;
        RevisedSimplex s;
        const auto sol = s.solve({A, b});
        const double oracle = brute_force_l1(A, b);
        ASSERT_TRUE(std::isfinite(oracle));
        EXPECT_NEAR(sol.value, oracle, 1e-9) << "trial " << trial;
        EXPECT_LE((A * sol.x - b).lpNorm<Eigen::Infinity>(), 1e-9);
        EXPECT_LE((A.transpose() * sol.y).lpNorm<Eigen::Infinity>(), 1 + 1e-9);
        EXPECT_NEAR(sol.dual_value, sol.value, 1e-9);
    }
}

TEST(RevisedSimplex, DeterministicForFixedInput) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(-1, 1);
    Eigen::MatrixXd A(5, 30);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = pick(rng);
    A.row(0).setOnes();
    const Eigen::VectorXd b = A.col(3) * 0.7 - A.col(8) * 0.3 + A.col(20) * 0.6;
    RevisedSimplex s1, s2;
    const auto a = s1.solve({A, b});
    const auto c = s2.solve({A, b});
    EXPECT_EQ(a.x, c.x);
    EXPECT_EQ(a.iterations, c.iterations);
}
