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

// CKTS state-set files. All fields are little-endian.
//
//   offset  size  field
//   0       4     magic "CKTS"
//   4       4     u32 version (1)
//   8       4     u32 n
//   12      4     u32 k
//   16      1     u8 kind (0 cumulative, 1 strict, 2 representatives)
//   17      1     u8 per-state denominator flag (always 1)
//   18      2     reserved, zero
//   20      8     u64 state count
//   28      ...   per state: u32 denom_exp, then 2^n amplitudes as 4 x i64 (a, b, c, d)

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckt/enumeration.hpp"

namespace ckt {

class CktsFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCktsVersion = 1;

struct CktsHeader {
    std::uint32_t version{kCktsVersion};
    std::uint32_t n{0};
    std::uint32_t k{0};
    SetKind kind{SetKind::Cumulative};
    std::uint64_t count{0};
};

namespace detail {

template <typename T>
void put_le(std::vector<char> &buf, T v) {
    using U = std::make_unsigned_t<T>;
    U u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const unsigned char *p) {
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(p[i]) << (8 * i);
    return static_cast<T>(u);
}

inline void read_exact(std::istream &in, unsigned char *dst, std::size_t len, const char *what) {
    in.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in.gcount()) != len) throw CktsFormatError(std::string("truncated CKTS file while reading ") + what);
}

}  // namespace detail

inline void write_ckts(std::ostream &out, const StateSet &set) {
    std::vector<char> buf;
    buf.insert(buf.end(), {'C', 'K', 'T', 'S'});
    detail::put_le<std::uint32_t>(buf, kCktsVersion);
    detail::put_le<std::uint32_t>(buf, set.n());
    detail::put_le<std::uint32_t>(buf, set.k());
    detail::put_le<std::uint8_t>(buf, static_cast<std::uint8_t>(set.kind()));
    detail::put_le<std::uint8_t>(buf, 1);
    detail::put_le<std::uint16_t>(buf, 0);
    detail::put_le<std::uint64_t>(buf, set.size());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::size_t dim = std::size_t{1} << set.n();
    for (std::size_t id = 0; id < set.size(); ++id) {
        buf.clear();
        const auto key = set.key(id);
        detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(key[0]));
        for (std::size_t j = 0; j < 4 * dim; ++j) detail::put_le<std::int64_t>(buf, key[1 + j]);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw std::runtime_error("write failed");
}

inline void write_ckts(const std::filesystem::path &path, const StateSet &set) {
    // Write to a temporary name first so an interrupted run never leaves a
    // truncated layer behind for --resume to pick up.
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        write_ckts(out, set);
    }
    std::filesystem::rename(tmp, path);
}

inline CktsHeader read_ckts_header(std::istream &in) {
    std::array<unsigned char, 28> h{};
    detail::read_exact(in, h.data(), h.size(), "header");
    if (std::memcmp(h.data(), "CKTS", 4) != 0) throw CktsFormatError("bad magic, not a CKTS file");
    CktsHeader hdr;
    hdr.version = detail::get_le<std::uint32_t>(h.data() + 4);
    if (hdr.version != kCktsVersion) throw CktsFormatError("unsupported CKTS version " + std::to_string(hdr.version));
    hdr.n = detail::get_le<std::uint32_t>(h.data() + 8);
    hdr.k = detail::get_le<std::uint32_t>(h.data() + 12);
    const std::uint8_t kind = h[16];
    if (kind > 2) throw CktsFormatError("unknown set kind " + std::to_string(kind));
    hdr.kind = static_cast<SetKind>(kind);
    if (h[17] != 1) throw CktsFormatError("unsupported denominator layout");
    hdr.count = detail::get_le<std::uint64_t>(h.data() + 20);
    if (hdr.n == 0 || hdr.n > kMaxQubits) throw CktsFormatError("qubit count out of range");
    return hdr;
}

inline StateSet read_ckts(std::istream &in) {
    const CktsHeader hdr = read_ckts_header(in);
    StateSet set(hdr.n, hdr.k, hdr.kind);
    set.reserve(hdr.count);
    const std::size_t dim = std::size_t{1} << hdr.n;
    std::vector<unsigned char> rec(4 + 32 * dim);
    std::vector<std::int32_t> key(1 + 4 * dim);
    for (std::uint64_t i = 0; i < hdr.count; ++i) {
        detail::read_exact(in, rec.data(), rec.size(), "state record");
        key[0] = static_cast<std::int32_t>(detail::get_le<std::uint32_t>(rec.data()));
        for (std::size_t j = 0; j < 4 * dim; ++j) {
            const auto v = detail::get_le<std::int64_t>(rec.data() + 4 + 8 * j);
            if (v > INT32_MAX || v < INT32_MIN) throw ArithmeticOverflow("CKTS coefficient exceeds the in-memory key width");
            key[1 + j] = static_cast<std::int32_t>(v);
        }
        if (!set.add_key(PackedStates::Key{key})) throw CktsFormatError("duplicate state in CKTS file");
    }
    // Files are written in id order, which is already sorted; finalize keeps it.
    set.finalize();
    return set;
}

inline StateSet read_ckts(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_ckts(in);
}

}  // namespace ckt
