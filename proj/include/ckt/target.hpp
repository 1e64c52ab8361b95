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

// Target expressions:
//
//   expr   := factor ('*' factor)*
//   factor := name ['^' N] | 'mixed(' N ')' | 'file:' path
//   name   := tplus | sh | h | plus | cs | ccz
//
// cs and ccz have fixed arity (2 and 3) and take no exponent. The first
// factor occupies the lowest qubits. Whitespace is not allowed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ckt/exact_state.hpp"

namespace ckt {

class TargetParseError : public std::invalid_argument {
public:
    TargetParseError(const std::string &what, std::size_t offset)
        : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

enum class FactorKind { TPlus, SH, H, Plus, CS, CCZ, Mixed, File };

struct TargetFactor {
    FactorKind kind;
    unsigned count{1};   // exponent, or n for mixed(n)
    std::string path;    // file factors only
    std::size_t offset{0};
};

struct TargetExpr {
    std::string text;
    std::vector<TargetFactor> factors;
    unsigned n{0};
};

namespace detail {

inline unsigned file_arity(const std::string &path, std::size_t offset) {
    std::ifstream in(path);
    if (!in) throw TargetParseError("cannot open target file '" + path + "'", offset);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw TargetParseError(std::string("malformed target file: ") + e.what(), offset);
    }
    if (!j.contains("n") || !j["n"].is_number_unsigned()) throw TargetParseError("target file needs an unsigned field 'n'", offset);
    return j["n"].get<unsigned>();
}

}  // namespace detail

inline TargetExpr parse_target(std::string_view text, unsigned max_qubits = kMaxQubits) {
    TargetExpr expr;
    expr.text = std::string(text);
    std::size_t pos = 0;
    auto read_number = [&](const char *what) {
        const std::size_t start = pos;
        std::uint64_t v = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            v = v * 10 + static_cast<unsigned>(text[pos] - '0');
            if (v > 1000000) throw TargetParseError("number too large", start);
            ++pos;
        }
        if (pos == start) throw TargetParseError(std::string("expected ") + what, pos);
        if (v == 0) throw TargetParseError("count must be at least 1", start);
        return static_cast<unsigned>(v);
    };
    if (text.empty()) throw TargetParseError("empty target expression", 0);
    for (;;) {
        TargetFactor f{FactorKind::TPlus, 1, {}, pos};
        const std::size_t start = pos;
        while (pos < text.size() && ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= '0' && text[pos] <= '9' && pos > start))) ++pos;
        const std::string_view name = text.substr(start, pos - start);
        if (name == "file" && pos < text.size() && text[pos] == ':') {
            ++pos;
            const std::size_t p0 = pos;
            while (pos < text.size() && text[pos] != '*') ++pos;
            if (pos == p0) throw TargetParseError("expected a path after 'file:'", p0);
            f.kind = FactorKind::File;
            f.path = std::string(text.substr(p0, pos - p0));
            f.count = detail::file_arity(f.path, p0);
            if (f.count == 0) throw TargetParseError("target file declares n = 0", p0);
        } else if (name == "mixed") {
            if (pos >= text.size() || text[pos] != '(') throw TargetParseError("expected '('", pos);
            ++pos;
            f.kind = FactorKind::Mixed;
            f.count = read_number("qubit count");
            if (pos >= text.size() || text[pos] != ')') throw TargetParseError("expected ')'", pos);
            ++pos;
        } else {
            if (name == "tplus") f.kind = FactorKind::TPlus;
            else if (name == "sh") f.kind = FactorKind::SH;
            else if (name == "h") f.kind = FactorKind::H;
            else if (name == "plus") f.kind = FactorKind::Plus;
            else if (name == "cs") f.kind = FactorKind::CS;
            else if (name == "ccz") f.kind = FactorKind::CCZ;
            else throw TargetParseError(name.empty() ? "expected a target name" : "unknown target '" + std::string(name) + "'", start);
            if (pos < text.size() && text[pos] == '^') {
                if (f.kind == FactorKind::CS || f.kind == FactorKind::CCZ) throw TargetParseError("cs and ccz take no exponent", pos);
                ++pos;
                f.count = read_number("an exponent");
            }
        }
        const unsigned arity = f.kind == FactorKind::CS ? 2u : f.kind == FactorKind::CCZ ? 3u : f.count;
        if (expr.n + static_cast<std::uint64_t>(arity) > max_qubits)
            throw TargetParseError("target has more than " + std::to_string(max_qubits) + " qubits", f.offset);
        expr.n += arity;
        expr.factors.push_back(std::move(f));
        if (pos == text.size()) break;
        if (text[pos] != '*') throw TargetParseError(std::string("unexpected character '") + text[pos] + "'", pos);
        ++pos;
    }
    return expr;
}

/**
 * A target given by its Pauli expectation vector b_a = Tr(P_a rho). Pure
 * targets whose amplitudes lie in Z[omega]/sqrt2^l also keep the exact state.
 */
struct TargetState {
    unsigned n{0};
    std::vector<double> b;
    std::string expr;
    std::optional<ExactState> exact;
    bool pure{false};

    /// (1/2^n) sum_a b_a^2, i.e. Tr rho^2.
    double purity() const {
        double s = 0;
        for (double v : b) s += v * v;
        return std::ldexp(s, -static_cast<int>(n));
    }

    void validate() const {
        if (n == 0 || b.size() != pauli_count(n)) throw std::invalid_argument("expectation vector has the wrong length");
        if (std::abs(b[0] - 1.0) > 1e-9) throw std::invalid_argument("identity expectation must be 1");
        for (double v : b)
            if (!(std::abs(v) <= 1.0 + 1e-9)) throw std::invalid_argument("expectation outside [-1, 1]");
        if (purity() > 1.0 + 1e-9) throw std::invalid_argument("expectations violate the purity bound");
    }
};

inline TargetState target_from_exact(const ExactState &s, std::string expr) {
    TargetState t{s.n(), expectation_vector(s), std::move(expr), s, true};
    t.validate();
    return t;
}

inline TargetState target_from_amplitudes(const ComplexVector &psi, std::string expr) {
    unsigned n = 0;
    while ((std::size_t{1} << n) < psi.size()) ++n;
    if (n == 0 || (std::size_t{1} << n) != psi.size()) throw std::invalid_argument("amplitude vector length must be a power of two >= 2");
    double norm = 0;
    for (const auto &a : psi) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("amplitudes are not normalized");
    TargetState t;
    t.n = n;
    t.expr = std::move(expr);
    t.pure = true;
    t.b.resize(pauli_count(n));
    for (std::uint64_t a = 0; a < t.b.size(); ++a) t.b[a] = pauli_expectation(psi, PauliOperator::from_index(n, a));
    t.validate();
    t.b[0] = 1.0;  // equal up to rounding after validate()
    return t;
}

/// lo occupies the low qubits.
inline TargetState tensor(const TargetState &lo, const TargetState &hi) {
    if (lo.n + hi.n > kMaxQubits) throw std::invalid_argument("tensor product exceeds the qubit limit");
    TargetState t;
    t.n = lo.n + hi.n;
    t.expr = lo.expr + "*" + hi.expr;
    t.pure = lo.pure && hi.pure;
    if (lo.exact && hi.exact) t.exact = tensor(*lo.exact, *hi.exact);
    t.b.resize(pauli_count(t.n));
    const std::size_t stride = lo.b.size();
    for (std::size_t ah = 0; ah < hi.b.size(); ++ah)
        for (std::size_t al = 0; al < stride; ++al) t.b[al + stride * ah] = lo.b[al] * hi.b[ah];
    return t;
}

/// p * a + (1 - p) * b for p in [0, 1].
inline TargetState mixture(double p, const TargetState &a, const TargetState &b) {
    if (a.n != b.n) throw std::invalid_argument("mixture of targets with different qubit counts");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("mixing weight must lie in [0, 1]");
    TargetState t;
    t.n = a.n;
    t.expr = "mix(" + std::to_string(p) + "," + a.expr + "," + b.expr + ")";
    t.b.resize(a.b.size());
    for (std::size_t i = 0; i < t.b.size(); ++i) t.b[i] = p * a.b[i] + (1 - p) * b.b[i];
    t.pure = (p == 0 && b.pure) || (p == 1 && a.pure);
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Single factors.

inline ExactState tplus_state() {
    ExactState s = apply_clifford_generator(ExactState::zero(1), {Gate::H, 0, 0});
    s.apply_t(0);
    return s;
}

inline ExactState plus_state() { return apply_clifford_generator(ExactState::zero(1), {Gate::H, 0, 0}); }

/// H-eigenstate cos(pi/8)|0> + sin(pi/8)|1>, built as S^dag H T^dag H |0>.
inline ExactState h_state() {
    ExactState s = plus_state();
    s.apply_t(0, true);
    s = apply_clifford_word(s, {{Gate::H, 0, 0}, {Gate::S, 0, 0}, {Gate::S, 0, 0}, {Gate::S, 0, 0}});
    return s;
}

/// CS |++>: amplitudes (1, 1, 1, i) / 2.
inline ExactState cs_state() {
    return ExactState::from_raw(2, 2, {Amp::one(), Amp::one(), Amp::one(), Amp::imag()});
}

/// CCZ |+++>: all amplitudes 1 / (2 sqrt2) except |111>, which is negative.
inline ExactState ccz_state() {
    std::vector<Amp> amps(8, Amp::one());
    amps[7] = Amp{-1, 0, 0, 0};
    return ExactState::from_raw(3, 3, std::move(amps));
}

/// SH-eigenstate with Bloch vector (1, 1, 1)/sqrt3; not representable exactly.
inline ComplexVector sh_amplitudes() {
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    return {std::cos(theta / 2), std::polar(std::sin(theta / 2), M_PI / 4)};
}

namespace detail {

inline TargetState power(const TargetState &one, unsigned count, const std::string &expr) {
    TargetState t = one;
    for (unsigned i = 1; i < count; ++i) t = tensor(t, one);
    t.expr = expr;
    return t;
}

inline TargetState file_target(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open target file '" + path + "'");
    const nlohmann::json j = nlohmann::json::parse(in);
    const unsigned n = j.at("n").get<unsigned>();
    if (n == 0 || n > kMaxQubits) throw std::invalid_argument("target file qubit count out of range");
    const std::string expr = "file:" + path;
    if (j.contains("amplitudes")) {
        ComplexVector psi;
        for (const auto &a : j["amplitudes"]) {
            if (a.is_number()) psi.emplace_back(a.get<double>(), 0.0);
            else psi.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        }
        if (psi.size() != (std::size_t{1} << n)) throw std::invalid_argument("target file has the wrong number of amplitudes");
        return target_from_amplitudes(psi, expr);
    }
    if (j.contains("expectations")) {
        TargetState t;
        t.n = n;
        t.expr = expr;
        t.b = j["expectations"].get<std::vector<double>>();
        if (t.b.size() != pauli_count(n)) throw std::invalid_argument("target file has the wrong number of expectations");
        t.validate();
        t.pure = std::abs(t.purity() - 1.0) < 1e-9;
        return t;
    }
    throw std::invalid_argument("target file needs 'amplitudes' or 'expectations'");
}

}  // namespace detail

inline TargetState build_target(const TargetExpr &expr) {
    std::optional<TargetState> acc;
    for (const TargetFactor &f : expr.factors) {
        TargetState part;
        switch (f.kind) {
            case FactorKind::TPlus: part = detail::power(target_from_exact(tplus_state(), "tplus"), f.count, ""); break;
            case FactorKind::Plus: part = detail::power(target_from_exact(plus_state(), "plus"), f.count, ""); break;
            case FactorKind::H: part = detail::power(target_from_exact(h_state(), "h"), f.count, ""); break;
            case FactorKind::SH: part = detail::power(target_from_amplitudes(sh_amplitudes(), "sh"), f.count, ""); break;
            case FactorKind::CS: part = target_from_exact(cs_state(), ""); break;
            case FactorKind::CCZ: part = target_from_exact(ccz_state(), ""); break;
            case FactorKind::Mixed:
                part.n = f.count;
                part.b.assign(pauli_count(f.count), 0.0);
                part.b[0] = 1.0;
                break;
            case FactorKind::File: part = detail::file_target(f.path); break;
        }
        acc = acc ? tensor(*acc, part) : part;
    }
    acc->expr = expr.text;
    acc->validate();
    return *acc;
}

inline TargetState build_target(std::string_view text, unsigned max_qubits = kMaxQubits) { return build_target(parse_target(text, max_qubits)); }

}  // namespace ckt
