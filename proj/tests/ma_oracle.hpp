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

// Exhaustive T-count oracle: breadth-first search over exact 2x2 matrices up
// to global phase. Level k holds every gate C_0 T C_1 ... T C_k not reachable
// with fewer T gates.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "ckt/ma_normal.hpp"

namespace oracle {

class TCountOracle {
public:
    explicit TCountOracle(unsigned depth) : depth_(depth) {
        std::vector<ckt::Mat2> cliffords{ckt::Mat2::identity().canonical()};
        std::map<ckt::Mat2, int> seen{{cliffords[0], 0}};
        for (std::size_t head = 0; head < cliffords.size(); ++head)
            for (char g : {'H', 'S'}) {
                const ckt::Mat2 m = (cliffords[head] * ckt::Mat2::gate(g)).canonical();
                if (seen.emplace(m, 0).second) cliffords.push_back(m);
            }
        level_sizes_.push_back(cliffords.size());
        std::vector<ckt::Mat2> layer = cliffords;
        const ckt::Mat2 t = ckt::Mat2::gate('T');
        for (unsigned k = 1; k <= depth; ++k) {
            std::vector<ckt::Mat2> next;
            for (const ckt::Mat2 &m : layer)
                for (const ckt::Mat2 &c : cliffords) {
                    const ckt::Mat2 cand = (m * t * c).canonical();
                    if (seen.emplace(cand, static_cast<int>(k)).second) next.push_back(cand);
                }
            level_sizes_.push_back(next.size());
            layer = std::move(next);
        }
        table_ = std::move(seen);
    }

    /// Minimal T-count, or -1 when above the search depth.
    int t_count(const std::string &word) const {
        const auto it = table_.find(ckt::word_matrix(word).canonical());
        return it == table_.end() ? -1 : it->second;
    }

    const std::vector<std::size_t> &level_sizes() const { return level_sizes_; }
    unsigned depth() const { return depth_; }

private:
    unsigned depth_;
    std::map<ckt::Mat2, int> table_;
    std::vector<std::size_t> level_sizes_;
};

/// Random {H, S, T} word of length <= max_len with at most max_t T letters.
inline std::string random_word(std::mt19937_64 &rng, std::size_t max_len, std::size_t max_t) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> letter(0, 2);
    const std::size_t len = len_dist(rng);
    std::string w;
    std::size_t ts = 0;
    while (w.size() < len) {
        const int l = letter(rng);
        if (l == 2 && ts == max_t) continue;
        w += "HST"[l];
        ts += l == 2;
    }
    return w;
}

}  // namespace oracle
