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

#include <set>

#include "gtest/gtest.h"

#include "ckt/ma_normal.hpp"
#include "ma_oracle.hpp"

using namespace ckt;

namespace {

const oracle::TCountOracle &shared_oracle() {
    static const oracle::TCountOracle o(8);
    return o;
}

}  // namespace

TEST(Clifford1Q, TableIsAGroup) {
    const auto &tab = Clifford1Q::instance();
    for (int a = 0; a < 24; ++a) {
        EXPECT_EQ(tab.mul(a, tab.inverse(a)), 0);
        EXPECT_EQ(tab.index_of_word(tab.word(a)), a);
        for (int b = 0; b < 24; ++b)
            for (int c = 0; c < 24; ++c) ASSERT_EQ(tab.mul(tab.mul(a, b), c), tab.mul(a, tab.mul(b, c)));
    }
    EXPECT_THROW(tab.index(Mat2::gate('T')), std::invalid_argument);
}

TEST(ToNormalForm, Examples) {
    const NormalForm tt = to_normal_form("TT");
    EXPECT_EQ(tt.t_count(), 0u);
    EXPECT_EQ(tt.clifford, Clifford1Q::instance().s());
    const NormalForm t = to_normal_form("T");
    ASSERT_EQ(t.t_count(), 1u);
    EXPECT_EQ(t.syllables[0], Syllable::T);
    EXPECT_EQ(t.clifford, 0);
    EXPECT_EQ(to_normal_form("").t_count(), 0u);
    EXPECT_THROW(to_normal_form("HXT"), std::invalid_argument);
}

TEST(ToNormalForm, DenotesTheSameGate) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::string w = oracle::random_word(rng, 30, 30);
        const NormalForm nf = to_normal_form(w);
        EXPECT_TRUE(same_gate(w, nf.word())) << w;
        for (std::size_t i = 1; i < nf.syllables.size(); ++i) EXPECT_NE(nf.syllables[i], Syllable::T);
    }
}

TEST(ToNormalForm, TCountMatchesExhaustiveOracle) {
    const auto &o = shared_oracle();
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::string w = oracle::random_word(rng, 20, 8);
        ASSERT_EQ(static_cast<int>(to_normal_form(w).t_count()), o.t_count(w)) << w;
    }
}

TEST(ToNormalForm, OracleLevelSizesFollowGateCount) {
    const auto &o = shared_oracle();
    for (unsigned k = 0; k <= o.depth(); ++k) EXPECT_EQ(BigInt(o.level_sizes()[k]), strict_gate_count(k));
}

TEST(ToNormalForm, IdempotentAndUnique) {
    for (unsigned k = 0; k <= 5; ++k) {
        const auto forms = enumerate_normal_forms(k);
        std::set<Mat2> mats;
        for (const NormalForm &nf : forms) {
            EXPECT_EQ(to_normal_form(nf.word()), nf);
            mats.insert(word_matrix(nf.word()).canonical());
        }
        EXPECT_EQ(mats.size(), forms.size());
    }
}

TEST(StrictGateCount, Examples) {
    EXPECT_EQ(strict_gate_count(1), 72);
    EXPECT_EQ(strict_gate_count(2), 144);
    EXPECT_EQ(strict_gate_count(0), 24);
    EXPECT_EQ(BigInt(enumerate_normal_forms(3).size()), strict_gate_count(3));
}

TEST(GateProperties, HermitianConjugateKeepsTCount) {
    for (unsigned k = 0; k <= 6; ++k)
        for (const NormalForm &nf : enumerate_normal_forms(k)) ASSERT_EQ(to_normal_form(inverse_gate_word(nf.word())).t_count(), k);
}

TEST(GateProperties, CliffordAbsorption) {
    const auto &tab = Clifford1Q::instance();
    for (unsigned k = 0; k <= 6; ++k)
        for (const NormalForm &nf : enumerate_normal_forms(k))
            for (int c = 0; c < 24; ++c) {
                ASSERT_EQ(to_normal_form(nf.word() + tab.word(c)).t_count(), k);
                ASSERT_EQ(to_normal_form(tab.word(c) + nf.word()).t_count(), k);
            }
}

TEST(GateProperties, PrependingTChangesTCountByOne) {
    for (unsigned k = 0; k <= 6; ++k)
        for (const NormalForm &nf : enumerate_normal_forms(k)) {
            const auto next = static_cast<long>(to_normal_form("T" + nf.word()).t_count());
            ASSERT_EQ(std::abs(next - static_cast<long>(k)), 1);
        }
}
