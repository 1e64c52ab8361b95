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
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ckt/exact_state.hpp"

namespace ckt {

/**
 * Arena of canonical states packed as int32 keys with an open-addressing
 * index for exact deduplication.
 *
 * Key layout per state: [denom_exp, a_0, b_0, c_0, d_0, a_1, ...]. Key order is
 * the canonical sort order used for stable ids.
 */
class PackedStates {
public:
    using Key = std::span<const std::int32_t>;
    static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

    PackedStates() = default;
    explicit PackedStates(unsigned n) : n_(n), stride_(1 + 4 * (std::size_t{1} << n)) {}

    unsigned n() const { return n_; }
    std::size_t stride() const { return stride_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    Key key(std::size_t id) const { return {data_.data() + id * stride_, stride_}; }

    ExactState state(std::size_t id) const {
        const Key k = key(id);
        std::vector<Amp> amps(std::size_t{1} << n_);
        for (std::size_t j = 0; j < amps.size(); ++j) amps[j] = Amp{k[1 + 4 * j], k[2 + 4 * j], k[3 + 4 * j], k[4 + 4 * j]};
        return ExactState::from_raw(n_, k[0], std::move(amps));
    }

    /// Packs a state (assumed canonical) into `out`.
    static void pack(const ExactState &s, std::vector<std::int32_t> &out) {
        out.resize(1 + 4 * s.dim());
        out[0] = s.denom_exp();
        for (std::size_t j = 0; j < s.dim(); ++j) {
            const Amp &x = s.amp(j);
            out[1 + 4 * j] = narrow(x.a);
            out[2 + 4 * j] = narrow(x.b);
            out[3 + 4 * j] = narrow(x.c);
            out[4 + 4 * j] = narrow(x.d);
        }
    }

    /// Inserts a packed key; returns (id, inserted).
    std::pair<std::uint32_t, bool> insert(Key k) {
        if ((count_ + 1) * 2 > slots_.size()) rehash(std::max<std::size_t>(64, slots_.size() * 2));
        const std::size_t mask = slots_.size() - 1;
        for (std::size_t pos = hash_key(k) & mask;; pos = (pos + 1) & mask) {
            const std::uint32_t id = slots_[pos];
            if (id == kEmpty) {
                if (count_ >= kEmpty) throw std::length_error("state arena full");
                data_.insert(data_.end(), k.begin(), k.end());
                slots_[pos] = static_cast<std::uint32_t>(count_);
                return {static_cast<std::uint32_t>(count_++), true};
            }
            if (std::ranges::equal(key(id), k)) return {id, false};
        }
    }

    std::pair<std::uint32_t, bool> insert(const ExactState &canonical) {
        pack(canonical, scratch_);
        return insert(Key{scratch_});
    }

    std::optional<std::uint32_t> find(Key k) const {
        if (slots_.empty()) return std::nullopt;
        const std::size_t mask = slots_.size() - 1;
        for (std::size_t pos = hash_key(k) & mask;; pos = (pos + 1) & mask) {
            const std::uint32_t id = slots_[pos];
            if (id == kEmpty) return std::nullopt;
            if (std::ranges::equal(key(id), k)) return id;
        }
    }

    std::optional<std::uint32_t> find(const ExactState &canonical) const {
        std::vector<std::int32_t> buf;
        pack(canonical, buf);
        return find(Key{buf});
    }

    bool contains(Key k) const { return find(k).has_value(); }

    /// Reorders entries into ascending key order; returns old id for each new id.
    std::vector<std::uint32_t> sort_keys() {
        std::vector<std::uint32_t> order(count_);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) { return std::ranges::lexicographical_compare(key(x), key(y)); });
        std::vector<std::int32_t> sorted;
        sorted.reserve(data_.size());
        for (std::uint32_t id : order) {
            const Key k = key(id);
            sorted.insert(sorted.end(), k.begin(), k.end());
        }
        data_ = std::move(sorted);
        rehash(slots_.size());
        return order;
    }

    void reserve(std::size_t states) {
        data_.reserve(states * stride_);
        std::size_t cap = 64;
        while (cap < states * 2) cap *= 2;
        if (cap > slots_.size()) rehash(cap);
    }

    std::size_t memory_bytes() const { return data_.capacity() * sizeof(std::int32_t) + slots_.capacity() * sizeof(std::uint32_t); }

    static std::size_t hash_key(Key k) {
        std::size_t h = 0x243f6a8885a308d3ULL;
        for (std::int32_t v : k) detail::hash_combine(h, static_cast<std::uint32_t>(v));
        return h;
    }

private:
    static std::int32_t narrow(std::int64_t v) {
        if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min())
            throw ArithmeticOverflow("amplitude coefficient does not fit the packed 32-bit key");
        return static_cast<std::int32_t>(v);
    }

    void rehash(std::size_t cap) {
        slots_.assign(cap, kEmpty);
        const std::size_t mask = cap - 1;
        for (std::size_t id = 0; id < count_; ++id) {
            std::size_t pos = hash_key(key(id)) & mask;
            while (slots_[pos] != kEmpty) pos = (pos + 1) & mask;
            slots_[pos] = static_cast<std::uint32_t>(id);
        }
    }

    unsigned n_{0};
    std::size_t stride_{0};
    std::size_t count_{0};
    std::vector<std::int32_t> data_;
    std::vector<std::uint32_t> slots_;
    std::vector<std::int32_t> scratch_;
};

}  // namespace ckt
