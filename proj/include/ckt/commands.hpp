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

// Command implementations behind the ckt executable. Everything here writes
// to caller-provided streams and reports failures by exception so the
// commands can be driven from tests without a process boundary.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ckt/ckts_io.hpp"
#include "ckt/enumeration.hpp"
#include "ckt/lp_solver.hpp"
#include "ckt/ma_normal.hpp"
#include "ckt/robustness.hpp"
#include "ckt/sampler.hpp"
#include "ckt/symmetry.hpp"
#include "ckt/target.hpp"

namespace ckt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitBudget = 4;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::string format_bytes(double bytes) {
    static const char *units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    int u = 0;
    while (bytes >= 1024 && u < 4) {
        bytes /= 1024;
        ++u;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f %s", bytes, units[u]);
    return buf;
}

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string &what, double projected, std::uint64_t budget)
        : std::runtime_error(what + " needs about " + format_bytes(projected) + " but the memory budget is " + format_bytes(static_cast<double>(budget))),
          projected_(projected) {}
    double projected() const { return projected_; }

private:
    double projected_;
};

/// "8GiB", "512 MiB", "2G", "1e9". Binary units unless the suffix is KB/MB/GB/TB.
inline std::uint64_t parse_bytes(std::string_view text) {
    static const std::regex re(R"(^\s*([0-9]+(?:\.[0-9]*)?(?:[eE][0-9]+)?)\s*([kKmMgGtT])?([iI])?([bB])?\s*$)");
    std::cmatch m;
    if (!std::regex_match(text.begin(), text.end(), m, re)) throw UsageError("cannot parse byte size '" + std::string(text) + "'");
    double v = std::stod(m[1].str());
    if (m[2].matched) {
        const int power = std::string("kmgt").find(static_cast<char>(std::tolower(m[2].str()[0]))) + 1;
        const bool decimal = !m[3].matched && m[4].matched;
        v *= std::pow(decimal ? 1000.0 : 1024.0, power);
    }
    if (!(v >= 1) || v > 1.8e19) throw UsageError("byte size out of range: '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------------------
// Configuration: flags > CKT_* environment > config file > defaults.

struct Config {
    unsigned threads{1};
    std::uint64_t budget_bytes{std::uint64_t{8} << 30};
    unsigned max_qubits{kMaxQubits};
    bool timing{true};
    std::function<void(const std::string &)> log;

    void note(const std::string &msg) const {
        if (log) log(msg);
    }
};

struct ConfigLayer {
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> budget_bytes;
    std::optional<unsigned> max_qubits;
};

using EnvLookup = std::function<std::optional<std::string>(const char *)>;

inline EnvLookup process_env() {
    return [](const char *name) -> std::optional<std::string> {
        const char *v = std::getenv(name);
        if (v == nullptr || *v == '\0') return std::nullopt;
        return std::string(v);
    };
}

namespace detail {

inline unsigned parse_unsigned(const std::string &text, const std::string &what) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception &) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || v > 1u << 20) throw UsageError(what + ": expected a non-negative integer, got '" + text + "'");
    return static_cast<unsigned>(v);
}

}  // namespace detail

inline ConfigLayer config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    ConfigLayer c;
    for (const auto &[key, v] : j.items()) {
        if (key == "threads") {
            if (!v.is_number_unsigned()) throw UsageError("config: threads must be a non-negative integer");
            c.threads = v.get<unsigned>();
        } else if (key == "budget") {
            c.budget_bytes = v.is_string() ? parse_bytes(v.get<std::string>()) : v.get<std::uint64_t>();
        } else if (key == "max_qubits") {
            if (!v.is_number_unsigned()) throw UsageError("config: max_qubits must be a non-negative integer");
            c.max_qubits = v.get<unsigned>();
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
    return c;
}

inline ConfigLayer config_from_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception &e) {
        throw UsageError("config file " + path.string() + ": " + e.what());
    }
}

inline ConfigLayer config_from_env(const EnvLookup &env) {
    ConfigLayer c;
    if (auto v = env("CKT_THREADS")) c.threads = detail::parse_unsigned(*v, "CKT_THREADS");
    if (auto v = env("CKT_BUDGET")) c.budget_bytes = parse_bytes(*v);
    if (auto v = env("CKT_MAX_QUBITS")) c.max_qubits = detail::parse_unsigned(*v, "CKT_MAX_QUBITS");
    return c;
}

/// Merges the layers. The config file comes from config_path, else CKT_CONFIG.
inline Config load_config(const ConfigLayer &flags, const std::optional<std::string> &config_path, const EnvLookup &env) {
    ConfigLayer file;
    if (config_path) file = config_from_file(*config_path);
    else if (auto p = env("CKT_CONFIG")) file = config_from_file(*p);
    const ConfigLayer envl = config_from_env(env);
    Config cfg;
    auto pick = [](const auto &a, const auto &b, const auto &c, auto dflt) { return a ? *a : b ? *b : c ? *c : dflt; };
    cfg.threads = resolve_threads(pick(flags.threads, envl.threads, file.threads, 0u));
    cfg.budget_bytes = pick(flags.budget_bytes, envl.budget_bytes, file.budget_bytes, cfg.budget_bytes);
    cfg.max_qubits = pick(flags.max_qubits, envl.max_qubits, file.max_qubits, cfg.max_qubits);
    if (cfg.max_qubits == 0 || cfg.max_qubits > kMaxQubits) throw UsageError("max_qubits must be in 1.." + std::to_string(kMaxQubits));
    return cfg;
}

// ---------------------------------------------------------------------------
// Budgeted state sets.

/// Headroom on the extrapolated size of the next layer.
inline constexpr double kProjectionMargin = 1.5;

/// Next-layer size from the last growth factor; before any growth is seen, 2^(n+1) - 1.
inline double project_next_layer(unsigned n, std::size_t prev, std::size_t cur) {
    const double ratio = prev == 0 ? static_cast<double>((1u << (n + 1)) - 1) : static_cast<double>(cur) / static_cast<double>(prev);
    return static_cast<double>(cur) * std::max(ratio, 1.0) * kProjectionMargin;
}

inline void check_budget(const Config &cfg, const std::string &what, double bytes) {
    if (bytes > static_cast<double>(cfg.budget_bytes)) throw BudgetExceeded(what, bytes, cfg.budget_bytes);
}

/// Cumulative chains and representative chains, grown on demand under the memory budget.
class StateCache {
public:
    explicit StateCache(Config cfg) : cfg_(std::move(cfg)) {}

    const Config &config() const { return cfg_; }

    const StateSet &cumulative(unsigned n, unsigned k) {
        auto &chain = chains_[n];
        if (chain.empty()) {
            check_budget(cfg_, "the n=" + std::to_string(n) + " stabilizer set",
                         held_bytes() + projected_bytes(n, static_cast<double>(stabilizer_state_count(n))));
            chain.push_back(enumerate_stabilizer_states(n));
        }
        EnumerationOptions opts;
        opts.threads = cfg_.threads;
        while (chain.size() <= k) {
            const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2].size() : 0;
            const double est = project_next_layer(n, prev, chain.back().size());
            const auto next_k = static_cast<unsigned>(chain.size());
            check_budget(cfg_, "enumerating Clifford+" + std::to_string(next_k) + "T states on " + std::to_string(n) + " qubits",
                         held_bytes() + projected_bytes(n, est));
            chain.push_back(enumerate_clifford_kT(n, next_k, chain.back(), opts));
            cfg_.note("cumulative n=" + std::to_string(n) + " k=" + std::to_string(next_k) + ": " + std::to_string(chain.back().size()) + " states");
        }
        return chain[k];
    }

    const StateSet &representatives(unsigned n, unsigned k, const SymmetryGroup &g) {
        std::string key = std::to_string(n) + ":";
        for (const auto &name : g.generator_names()) key += name + ";";
        auto &chain = reps_[key];
        if (chain.size() > k) return chain[k];
        EnumerationOptions opts;
        opts.threads = cfg_.threads;
        std::vector<std::size_t> sizes;
        const double held = held_bytes() - chain_bytes(chain);
        chain.clear();
        // Each finished layer projects the next one; refusing from inside the
        // callback stops the run before the oversized layer is built.
        chain = enumerate_representatives(n, k, g, opts, [&](unsigned layer, std::size_t size) {
            sizes.push_back(size);
            cfg_.note("representatives n=" + std::to_string(n) + " k=" + std::to_string(layer) + ": " + std::to_string(size));
            if (layer == k) return;
            double total = 0;
            for (std::size_t s : sizes) total += static_cast<double>(s);
            const double est = project_next_layer(n, sizes.size() >= 2 ? sizes[sizes.size() - 2] : 0, size);
            check_budget(cfg_, "enumerating orbit representatives at k=" + std::to_string(layer + 1) + " on " + std::to_string(n) + " qubits",
                         held + projected_bytes(n, total + est));
        });
        return chain[k];
    }

    double held_bytes() const {
        double b = 0;
        for (const auto &[n, chain] : chains_) b += chain_bytes(chain);
        for (const auto &[key, chain] : reps_) b += chain_bytes(chain);
        return b;
    }

    void clear() {
        chains_.clear();
        reps_.clear();
    }

private:
    static double chain_bytes(const std::vector<StateSet> &chain) {
        double b = 0;
        for (const auto &s : chain) b += static_cast<double>(s.memory_bytes());
        return b;
    }

    Config cfg_;
    std::map<unsigned, std::vector<StateSet>> chains_;
    std::map<std::string, std::vector<StateSet>> reps_;
};

// ---------------------------------------------------------------------------
// Symmetry selection.

inline SymmetrySpec parse_symmetry(std::string_view text) {
    SymmetrySpec spec;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find_first_of("+,", start);
        if (stop == std::string_view::npos) stop = text.size();
        const std::string_view tok = text.substr(start, stop - start);
        if (tok.empty()) throw UsageError("empty symmetry token in '" + std::string(text) + "'");
        try {
            spec.add(tok);
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        start = stop + 1;
    }
    return spec;
}

/**
 * Group for a target. "" and "none" give no group; "auto" keeps the largest
 * group among the built-in combinations that fixes the target; anything else
 * is parsed as tokens and must fix the target (SymmetryError otherwise).
 */
inline std::optional<SymmetryGroup> resolve_group(const TargetState &t, std::string_view sym) {
    if (sym.empty() || sym == "none") return std::nullopt;
    if (sym == "auto") {
        std::optional<SymmetryGroup> best;
        for (const char *cand : {"perm+localH", "perm+localSH", "perm", "localH", "localSH"}) {
            try {
                SymmetryGroup g = SymmetryGroup::build(t.n, parse_symmetry(cand), t.b);
                if (g.order() > 1 && (!best || g.order() > best->order())) best = std::move(g);
            } catch (const SymmetryError &) {
            }
        }
        return best;
    }
    return SymmetryGroup::build(t.n, parse_symmetry(sym), t.b);
}

// ---------------------------------------------------------------------------
// robustness

struct RobustnessRequest {
    std::string target;
    std::optional<unsigned> k;
    std::optional<std::filesystem::path> states;
    std::string sym;
    bool membership{true};
};

struct RobustnessOutcome {
    RobustnessResult result;
    std::string set_kind;
    unsigned set_n{0};
    unsigned set_k{0};
    std::size_t set_size{0};
    std::vector<std::string> generators;
    std::optional<CertificateReport> certificate;

    nlohmann::json json(bool timing = true) const {
        nlohmann::json j = to_json(result, timing);
        j["state_set"] = {{"kind", set_kind}, {"n", set_n}, {"k", set_k}, {"size", set_size}};
        if (!generators.empty()) j["generators"] = generators;
        if (certificate) j["certificate"] = {{"max_residual", certificate->max_residual}, {"dual_infeasibility", certificate->dual_infeasibility}};
        return j;
    }
};

namespace detail {

inline RobustnessOutcome solve_over(const TargetState &t, const StateSet &states, const std::optional<SymmetryGroup> &g, const Config &cfg) {
    const double rows = g ? static_cast<double>(reduced_rows(*g).lp_rows().size()) : static_cast<double>(pauli_count(t.n));
    check_budget(cfg, "the LP matrix (" + std::to_string(states.size()) + " columns)", 8.0 * rows * static_cast<double>(states.size()));
    const LPProblem p = g ? assemble_symmetric(t, states, *g, cfg.threads) : assemble_problem(t, states, cfg.threads);
    RobustnessOutcome out;
    out.result = solve_robustness(t, p);
    out.certificate = check_certificate(p, out.result);
    out.set_kind = to_string(states.kind());
    out.set_n = states.n();
    out.set_k = states.k();
    out.set_size = states.size();
    if (g) out.generators = g->generator_names();
    return out;
}

}  // namespace detail

inline RobustnessOutcome run_robustness(const TargetState &t, const RobustnessRequest &req, StateCache &cache) {
    const Config &cfg = cache.config();
    const std::optional<SymmetryGroup> g = resolve_group(t, req.sym);
    if (req.states) {
        if (!std::filesystem::exists(*req.states)) throw std::runtime_error("state file " + req.states->string() + " does not exist");
        const StateSet set = read_ckts(*req.states);
        if (set.n() != t.n) throw UsageError("state file holds " + std::to_string(set.n()) + "-qubit states, target has " + std::to_string(t.n) + " qubits");
        if (req.k && *req.k != set.k()) throw UsageError("--k " + std::to_string(*req.k) + " disagrees with the state file level " + std::to_string(set.k()));
        if (set.kind() == SetKind::Strict) throw UsageError("strict sets are not closed under lower levels; pass a cumulative or representative file");
        if (set.kind() == SetKind::Representatives && !g) throw UsageError("a representative state file needs --sym");
        return detail::solve_over(t, set, g, cfg);
    }
    if (!req.k) throw UsageError("--k is required unless --states is given");
    const unsigned k = *req.k;
    if (req.membership && t.exact && t.pure && k >= 1) {
        const unsigned forward_k = k >= 2 ? k - 2 : 0, back = k - forward_k;
        try {
            const StateSet &forward = cache.cumulative(t.n, forward_k);
            if (const auto id = meet_in_the_middle(*t.exact, forward, back)) {
                RobustnessOutcome out;
                out.result = membership_result(t, k, *id, back);
                out.set_kind = to_string(SetKind::Cumulative);
                out.set_n = t.n;
                out.set_k = forward_k;
                out.set_size = forward.size();
                return out;
            }
        } catch (const BudgetExceeded &e) {
            cfg.note(std::string("membership check skipped: ") + e.what());
        }
    }
    const StateSet &states = g ? cache.representatives(t.n, k, *g) : cache.cumulative(t.n, k);
    return detail::solve_over(t, states, g, cfg);
}

inline RobustnessOutcome run_robustness(const RobustnessRequest &req, StateCache &cache) {
    return run_robustness(build_target(req.target, cache.config().max_qubits), req, cache);
}

// --- table mode

struct TableRequest {
    std::string family;
    unsigned n_min{1};
    unsigned n_max{3};
    unsigned k_min{0};
    unsigned k_max{3};
    std::string sym{"auto"};
    bool membership{true};
};

struct TableCell {
    unsigned n{0};
    unsigned k{0};
    std::optional<RobustnessOutcome> outcome;
    std::string note;
};

/// Families with a '^' power form give one row per n; other expressions give a single row.
inline std::string table_expr(const std::string &family, unsigned n) {
    static const std::vector<std::string> powered{"tplus", "sh", "h", "plus"};
    if (std::find(powered.begin(), powered.end(), family) != powered.end()) return family + "^" + std::to_string(n);
    return family;
}

inline std::vector<TableCell> robustness_table(const TableRequest &req, StateCache &cache, const std::function<void(const TableCell &)> &on_cell = {}) {
    if (req.n_min > req.n_max || req.k_min > req.k_max) throw UsageError("empty table range");
    std::vector<TableCell> cells;
    std::vector<unsigned> ns;
    if (table_expr(req.family, 1) == req.family) ns.push_back(build_target(req.family, cache.config().max_qubits).n);
    else
        for (unsigned n = req.n_min; n <= req.n_max; ++n) ns.push_back(n);
    for (unsigned n : ns) {
        const TargetState t = build_target(table_expr(req.family, n), cache.config().max_qubits);
        bool over = false;
        for (unsigned k = req.k_min; k <= req.k_max; ++k) {
            TableCell cell{n, k, std::nullopt, ""};
            if (over) {
                cell.note = "budget";
            } else {
                RobustnessRequest r;
                r.k = k;
                r.sym = req.sym;
                r.membership = req.membership;
                try {
                    cell.outcome = run_robustness(t, r, cache);
                } catch (const BudgetExceeded &e) {
                    cache.config().note(e.what());
                    cell.note = "budget";
                    over = true;
                }
            }
            if (on_cell) on_cell(cell);
            cells.push_back(std::move(cell));
        }
        cache.clear();
    }
    return cells;
}

/// Rows per n, columns per k; each entry is the 7-decimal value and its surd form when one is recognized.
inline std::string render_table(const std::vector<TableCell> &cells) {
    std::map<unsigned, std::map<unsigned, std::string>> grid;
    std::vector<unsigned> ks;
    std::size_t width = 9;
    for (const auto &c : cells) {
        std::string s = "...";
        if (c.outcome) {
            const auto &r = c.outcome->result;
            s = format_value(r.value);
            if (r.symbolic_hint && *r.symbolic_hint != "1") s += " ~ " + *r.symbolic_hint;
        }
        width = std::max(width, s.size());
        grid[c.n][c.k] = s;
        if (std::find(ks.begin(), ks.end(), c.k) == ks.end()) ks.push_back(c.k);
    }
    std::sort(ks.begin(), ks.end());
    std::ostringstream os;
    auto pad = [&](const std::string &s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    os << pad("k", 7);
    for (unsigned k : ks) os << "  " << pad(std::to_string(k), width);
    os << "\n";
    for (const auto &[n, row] : grid) {
        os << pad("n=" + std::to_string(n), 7);
        for (unsigned k : ks) os << "  " << pad(row.count(k) ? row.at(k) : "", width);
        os << "\n";
    }
    std::string text = os.str();
    const std::regex trailing(" +\n");
    return std::regex_replace(text, trailing, "\n");
}

inline std::string table_csv(const std::vector<TableCell> &cells) {
    std::ostringstream os;
    os << "n,k,value,method,symbolic_hint\n";
    for (const auto &c : cells) {
        os << c.n << "," << c.k << ",";
        if (c.outcome) {
            const auto &r = c.outcome->result;
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12f", r.value);
            os << buf << "," << r.method << "," << r.symbolic_hint.value_or("");
        } else {
            os << "," << c.note << ",";
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// enumerate and counts

struct LayerCounts {
    unsigned k{0};
    std::uint64_t cumulative{0};
    std::uint64_t strict{0};
};

inline std::filesystem::path layer_file(const std::filesystem::path &dir, unsigned n, unsigned k, SetKind kind) {
    const char *prefix = kind == SetKind::Cumulative ? "cum" : kind == SetKind::Strict ? "strict" : "reps";
    return dir / (std::string(prefix) + "_n" + std::to_string(n) + "_k" + std::to_string(k) + ".ckts");
}

inline std::string count_rows(unsigned n, const std::vector<LayerCounts> &layers) {
    std::ostringstream os;
    os << "n=" << n << " cumulative:";
    for (const auto &l : layers) os << " " << l.cumulative;
    os << "\nn=" << n << " strict:";
    for (const auto &l : layers) os << " " << l.strict;
    os << "\n";
    return os.str();
}

struct EnumerateRequest {
    unsigned n{1};
    unsigned k{0};
    std::optional<std::filesystem::path> out_dir;  // no files when unset
    bool resume{false};
};

namespace detail {

inline std::optional<CktsHeader> layer_header(const std::filesystem::path &path, unsigned n, unsigned k, SetKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const CktsHeader h = read_ckts_header(in);
        if (h.n != n || h.k != k || h.kind != kind) return std::nullopt;
        return h;
    } catch (const std::exception &) {
        return std::nullopt;
    }
}

}  // namespace detail

/**
 * Cumulative and strict layers 0..k. With an output directory every finished
 * layer is written as cum_n<N>_k<K>.ckts and strict_n<N>_k<K>.ckts; resume
 * restarts after the last layer for which both files are intact.
 */
inline std::vector<LayerCounts> run_enumerate(const EnumerateRequest &req, const Config &cfg, const std::function<void(const LayerCounts &)> &on_layer = {}) {
    if (req.n == 0 || req.n > cfg.max_qubits) throw UsageError("n must be in 1.." + std::to_string(cfg.max_qubits));
    if (req.resume && !req.out_dir) throw UsageError("--resume needs --out");
    if (req.out_dir) std::filesystem::create_directories(*req.out_dir);
    std::vector<LayerCounts> layers;
    StateSet cur;
    if (req.resume) {
        for (unsigned j = 0; j <= req.k; ++j) {
            const auto hc = detail::layer_header(layer_file(*req.out_dir, req.n, j, SetKind::Cumulative), req.n, j, SetKind::Cumulative);
            const auto hs = detail::layer_header(layer_file(*req.out_dir, req.n, j, SetKind::Strict), req.n, j, SetKind::Strict);
            if (!hc || !hs) break;
            layers.push_back({j, hc->count, hs->count});
        }
        if (!layers.empty()) {
            cur = read_ckts(layer_file(*req.out_dir, req.n, layers.back().k, SetKind::Cumulative));
            cfg.note("resuming after layer k=" + std::to_string(layers.back().k));
            for (const auto &l : layers)
                if (on_layer) on_layer(l);
        }
    }
    EnumerationOptions opts;
    opts.threads = cfg.threads;
    auto finish = [&](const StateSet &strict) {
        if (req.out_dir) {
            write_ckts(layer_file(*req.out_dir, req.n, cur.k(), SetKind::Cumulative), cur);
            write_ckts(layer_file(*req.out_dir, req.n, cur.k(), SetKind::Strict), strict);
        }
        layers.push_back({cur.k(), cur.size(), strict.size()});
        if (on_layer) on_layer(layers.back());
    };
    if (layers.empty()) {
        check_budget(cfg, "the n=" + std::to_string(req.n) + " stabilizer set", 2 * projected_bytes(req.n, static_cast<double>(stabilizer_state_count(req.n))));
        cur = enumerate_stabilizer_states(req.n);
        finish(strict_partition(cur, nullptr));
    }
    while (layers.size() <= req.k) {
        const std::uint64_t before = layers.size() >= 2 ? layers[layers.size() - 2].cumulative : 0;
        const double est = project_next_layer(req.n, before, cur.size());
        const auto k = static_cast<unsigned>(layers.size());
        // base, new cumulative layer and its strict part are alive together
        check_budget(cfg, "layer k=" + std::to_string(k) + " on " + std::to_string(req.n) + " qubits",
                     projected_bytes(req.n, static_cast<double>(cur.size()) + 2 * est));
        StateSet next = enumerate_clifford_kT(req.n, k, cur, opts);
        const StateSet strict = strict_partition(next, &cur);
        cur = std::move(next);
        finish(strict);
    }
    return layers;
}

/// The counted grid: n=1 k<=10, n=2 k<=4, n=3 k<=2, n=4 k<=1.
inline std::vector<std::pair<unsigned, unsigned>> default_count_grid() { return {{1, 10}, {2, 4}, {3, 2}, {4, 1}}; }

inline void run_counts(const std::vector<std::pair<unsigned, unsigned>> &grid, const Config &cfg, std::ostream &csv) {
    csv << "n,k,cumulative,strict\n";
    for (const auto &[n, k] : grid) {
        EnumerateRequest req;
        req.n = n;
        req.k = k;
        run_enumerate(req, cfg, [&](const LayerCounts &l) { csv << n << "," << l.k << "," << l.cumulative << "," << l.strict << "\n" << std::flush; });
    }
}

// ---------------------------------------------------------------------------
// lower-bound, sample, ma-normal

inline nlohmann::json run_lower_bound(const std::string &expr, unsigned k, const Config &cfg) {
    const TargetState t = build_target(expr, cfg.max_qubits);
    double l1 = 0;
    for (double v : t.b) l1 += std::abs(v);
    return {{"target", t.expr}, {"n", t.n}, {"k", k}, {"b_l1", l1}, {"lower_bound", lower_bound(t, k)}};
}

inline nlohmann::json threshold_json(std::string_view family) {
    MagicFamily f;
    if (family == "H" || family == "h") f = MagicFamily::H;
    else if (family == "SH" || family == "sh") f = MagicFamily::SH;
    else throw UsageError("unknown family '" + std::string(family) + "' (expected H or SH)");
    return {{"family", f == MagicFamily::H ? "H" : "SH"}, {"growth_threshold", growth_threshold(f)}};
}

struct SampleRequest {
    std::string target;
    std::string pauli;
    unsigned k{0};
    double delta{0.05};
    double eps{0.01};
    std::uint64_t seed{0};
};

/// Samples over the unreduced decomposition, whose terms are actual enumerated states.
inline nlohmann::json run_sample(const SampleRequest &req, StateCache &cache) {
    const Config &cfg = cache.config();
    const TargetState t = build_target(req.target, cfg.max_qubits);
    PauliOperator p;
    try {
        p = PauliOperator::parse(req.pauli);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (p.n != t.n) throw UsageError("pauli string has " + std::to_string(p.n) + " letters, target has " + std::to_string(t.n) + " qubits");
    if (!(req.delta > 0 && req.delta < 1) || !(req.eps > 0 && req.eps < 1)) throw UsageError("--delta and --eps must lie in (0, 1)");
    const StateSet &states = cache.cumulative(t.n, req.k);
    const auto sol = detail::solve_over(t, states, std::nullopt, cfg);
    const SamplingPlan plan = make_plan(sol.result.decomposition, p, req.delta, req.eps, req.seed);
    const Estimate est = estimate(plan, states, cfg.threads);
    const double exact = t.b[p.index()];
    return {{"target", t.expr},
            {"n", t.n},
            {"k", req.k},
            {"pauli", p.str()},
            {"plan", {{"l1", plan.l1}, {"terms", plan.mixture.terms.size()}, {"shots", plan.shots}, {"delta", plan.delta}, {"eps", plan.eps}, {"seed", plan.seed}}},
            {"mean", est.mean},
            {"exact", exact},
            {"abs_error", std::abs(est.mean - exact)}};
}

inline nlohmann::json ma_normal_json(std::string_view word) {
    try {
        validate_gate_word(word);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    const NormalForm nf = to_normal_form(word);
    nlohmann::json syl = nlohmann::json::array();
    for (Syllable s : nf.syllables) syl.push_back(to_string(s));
    return {{"word", std::string(word)},
            {"syllables", syl},
            {"clifford", nf.clifford},
            {"clifford_word", Clifford1Q::instance().word(nf.clifford)},
            {"t_count", nf.t_count()},
            {"normal_form", nf.word()}};
}

inline std::string ma_normal_text(const nlohmann::json &j) {
    std::string syl;
    for (const auto &s : j["syllables"]) syl += (syl.empty() ? "" : " ") + s.get<std::string>();
    const std::string cw = j["clifford_word"].get<std::string>();
    std::ostringstream os;
    os << "syllables: " << (syl.empty() ? "-" : syl) << "\n"
       << "clifford:  " << j["clifford"].get<int>() << " (" << (cw.empty() ? "I" : cw) << ")\n"
       << "t-count:   " << j["t_count"].get<std::size_t>() << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// verify

/// Cumulative and strict counts of the default grid.
struct ReferenceCounts {
    unsigned n;
    std::vector<std::uint64_t> cumulative;
    std::vector<std::uint64_t> strict;
};

inline const std::vector<ReferenceCounts> &reference_counts() {
    static const std::vector<ReferenceCounts> ref{
        {1, {6, 18, 42, 90, 186, 378, 762, 1530, 3066, 6138, 12282}, {6, 12, 24, 48, 96, 192, 384, 768, 1536, 3072, 6144}},
        {2, {60, 420, 2580, 18900, 134100}, {60, 360, 2160, 16320, 115200}},
        {3, {1080, 16200, 227880}, {1080, 15120, 211680}},
        {4, {36720, 1138320}, {36720, 1101600}},
    };
    return ref;
}

struct SuiteReport {
    explicit SuiteReport(std::string suite) : name(std::move(suite)) {}

    std::string name;
    bool passed{true};
    std::size_t cases{0};
    std::string unit{"cases"};
    std::vector<std::string> failures;

    void check(bool ok, const std::string &what) {
        ++cases;
        if (ok) return;
        passed = false;
        if (failures.size() < 20) failures.push_back(what);
    }

    std::string line() const {
        const std::string what = unit == "chain length" ? "chain length " + std::to_string(cases) : std::to_string(cases) + " " + unit + " checked";
        return name + ": " + (passed ? "PASS" : "FAIL") + " (" + what + ")";
    }
};

struct VerifyOptions {
    bool full{false};  // adds the n=4 grid entries and CCZ at k=3
    std::uint64_t seed{2026};
    std::size_t faithfulness_samples{500};
    std::size_t random_targets{100};
};

inline TargetState random_pure_target(unsigned n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexVector psi(std::size_t{1} << n);
    double norm = 0;
    for (auto &a : psi) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto &a : psi) a /= std::sqrt(norm);
    return target_from_amplitudes(psi, "random");
}

inline TargetState random_target(unsigned n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 1);
    if (u(rng) < 0.5) return random_pure_target(n, rng);
    const TargetState a = random_pure_target(n, rng), b = random_pure_target(n, rng);
    return mixture(u(rng), a, b);
}

class Verifier {
public:
    Verifier(Config cfg, VerifyOptions opts = {}) : cache_(std::move(cfg)), opts_(opts) {}

    static const std::vector<std::string> &suite_names() {
        static const std::vector<std::string> names{"counts-n1", "counts", "monotone-sh", "monotone", "submult", "faithfulness", "lower-bound", "duality", "negativity"};
        return names;
    }

    SuiteReport run(std::string_view name) {
        if (name == "counts-n1") return counts_n1();
        if (name == "counts") return counts();
        if (name == "monotone-sh") return monotone_sh();
        if (name == "monotone") return monotone();
        if (name == "submult") return submult();
        if (name == "faithfulness") return faithfulness();
        if (name == "lower-bound") return lower_bound_suite();
        if (name == "duality") return duality();
        if (name == "negativity") return negativity();
        std::string known;
        for (const auto &s : suite_names()) known += " " + s;
        throw UsageError("unknown suite '" + std::string(name) + "' (known:" + known + ", all)");
    }

    std::vector<SuiteReport> run_all() {
        std::vector<SuiteReport> out;
        for (const auto &s : suite_names()) out.push_back(run(s));
        return out;
    }

    /// Grid value of a named family, solved by LP under automatic symmetry.
    const RobustnessResult &grid_value(const std::string &expr, unsigned k) {
        const auto key = std::make_pair(expr, k);
        if (auto it = grid_.find(key); it != grid_.end()) return it->second;
        RobustnessRequest r;
        r.k = k;
        r.sym = "auto";
        r.membership = false;
        const auto out = run_robustness(build_target(expr, cache_.config().max_qubits), r, cache_);
        record(out);
        return grid_.emplace(key, out.result).first->second;
    }

    /// Grid entries per family: n -> k_max.
    std::map<std::string, std::map<unsigned, unsigned>> grids() const {
        std::map<std::string, std::map<unsigned, unsigned>> g{
            {"tplus", {{1, 3}, {2, 3}, {3, 3}}}, {"sh", {{1, 3}, {2, 3}, {3, 2}}}, {"cs", {{2, 3}}}, {"ccz", {{3, 2}}}};
        if (opts_.full) {
            g["tplus"][4] = 2;
            g["sh"][4] = 0;
            g["ccz"][3] = 3;
        }
        return g;
    }

    std::size_t solves() const { return solved_.size(); }

private:
    struct Solved {
        std::string label;
        unsigned k;
        double value, lower_bound, gap, l1, neg, coeff_sum, residual, dual_inf;
    };

    void record(const RobustnessOutcome &o) {
        const auto &r = o.result;
        Solved s{r.target, r.k, r.value, r.lower_bound, r.duality_gap, r.decomposition.l1(), r.decomposition.negative_mass(), r.decomposition.sum(), 0, 0};
        if (o.certificate) {
            s.residual = o.certificate->max_residual;
            s.dual_inf = o.certificate->dual_infeasibility;
        }
        solved_.push_back(s);
    }

    double solve_plain(const TargetState &t, unsigned k) {
        RobustnessRequest r;
        r.k = k;
        r.membership = false;
        const auto out = run_robustness(t, r, cache_);
        record(out);
        return out.result.value;
    }

    static std::string family_expr(const std::string &f, unsigned n) { return table_expr(f, n); }

    void run_grids() {
        for (const auto &[f, rows] : grids())
            for (const auto &[n, kmax] : rows)
                for (unsigned k = 0; k <= kmax; ++k) grid_value(family_expr(f, n), k);
    }

    std::vector<TargetState> &random_pool(unsigned n) {
        auto &pool = random_[n];
        if (pool.empty()) {
            std::mt19937_64 rng(opts_.seed + n);
            const std::size_t count = n == 1 ? opts_.random_targets : std::max<std::size_t>(1, opts_.random_targets / 10);
            for (std::size_t i = 0; i < count; ++i) pool.push_back(random_target(n, rng));
        }
        return pool;
    }

    /// Random-target chains: n=1 for k <= 4, n=2 for k <= 2.
    const std::vector<std::vector<double>> &random_chains(unsigned n) {
        auto &chains = random_chains_[n];
        if (!chains.empty()) return chains;
        const unsigned kmax = n == 1 ? 4 : 2;
        for (const TargetState &t : random_pool(n)) {
            std::vector<double> v;
            for (unsigned k = 0; k <= kmax; ++k) v.push_back(solve_plain(t, k));
            chains.push_back(std::move(v));
        }
        return chains;
    }

    void standard_workload() {
        run_grids();
        random_chains(1);
        random_chains(2);
    }

    SuiteReport counts_n1() {
        SuiteReport rep{"counts-n1"};
        rep.unit = "layers";
        EnumerateRequest req;
        req.n = 1;
        req.k = 10;
        for (const auto &l : run_enumerate(req, cache_.config())) {
            const std::uint64_t cum = 6 * ((std::uint64_t{2} << l.k) - 1), strict = l.k == 0 ? 6 : 6 * (std::uint64_t{1} << l.k);
            rep.check(l.cumulative == cum && l.strict == strict, "k=" + std::to_string(l.k) + ": " + std::to_string(l.cumulative) + "/" + std::to_string(l.strict));
        }
        return rep;
    }

    SuiteReport counts() {
        SuiteReport rep{"counts"};
        rep.unit = "layers";
        for (const auto &ref : reference_counts()) {
            EnumerateRequest req;
            req.n = ref.n;
            req.k = static_cast<unsigned>(ref.cumulative.size() - 1);
            for (const auto &l : run_enumerate(req, cache_.config()))
                rep.check(l.cumulative == ref.cumulative[l.k] && l.strict == ref.strict[l.k],
                          "n=" + std::to_string(ref.n) + " k=" + std::to_string(l.k) + ": " + std::to_string(l.cumulative) + "/" + std::to_string(l.strict));
        }
        return rep;
    }

    SuiteReport monotone_sh() {
        SuiteReport rep{"monotone-sh"};
        std::vector<double> v;
        for (unsigned k = 0; k < 8; ++k) v.push_back(grid_value("sh", k).value);
        for (unsigned k = 1; k < 8; ++k) rep.check(v[k] <= v[k - 1] + 1e-9, "R_" + std::to_string(k) + " > R_" + std::to_string(k - 1));
        rep.cases = v.size();
        rep.unit = "chain length";
        return rep;
    }

    SuiteReport monotone() {
        SuiteReport rep{"monotone"};
        rep.unit = "pairs";
        run_grids();
        for (const auto &[f, rows] : grids())
            for (const auto &[n, kmax] : rows)
                for (unsigned k = 1; k <= kmax; ++k) {
                    const std::string e = family_expr(f, n);
                    rep.check(grid_value(e, k).value <= grid_value(e, k - 1).value + 1e-9, e + " k=" + std::to_string(k));
                }
        for (unsigned n : {1u, 2u})
            for (const auto &chain : random_chains(n))
                for (std::size_t k = 1; k < chain.size(); ++k)
                    rep.check(chain[k] <= chain[k - 1] + 1e-9, "random n=" + std::to_string(n) + " k=" + std::to_string(k));
        return rep;
    }

    SuiteReport submult() {
        SuiteReport rep{"submult"};
        rep.unit = "pairs";
        run_grids();
        for (const char *f : {"tplus", "sh"}) {
            const auto rows = grids().at(f);
            auto has = [&](unsigned n, unsigned k) { return rows.count(n) && rows.at(n) >= k; };
            for (const auto &[n1, k1max] : rows)
                for (const auto &[n2, k2max] : rows)
                    for (unsigned k1 = 0; k1 <= k1max; ++k1)
                        for (unsigned k2 = 0; k2 <= k2max; ++k2) {
                            if (!has(n1 + n2, k1 + k2)) continue;
                            const double lhs = grid_value(family_expr(f, n1 + n2), k1 + k2).value;
                            const double rhs = grid_value(family_expr(f, n1), k1).value * grid_value(family_expr(f, n2), k2).value;
                            rep.check(lhs <= rhs + 1e-9, std::string(f) + " (" + std::to_string(n1) + "," + std::to_string(k1) + ")x(" + std::to_string(n2) + "," +
                                                             std::to_string(k2) + ")");
                        }
        }
        // random one-qubit pairs against their two-qubit tensor product
        const auto &pool = random_pool(1);
        const auto &chains = random_chains(1);
        const std::size_t pairs = std::min<std::size_t>(pool.size() / 2, 25);
        for (std::size_t i = 0; i < pairs; ++i) {
            const TargetState ab = tensor(pool[2 * i], pool[2 * i + 1]);
            for (unsigned k1 = 0; k1 <= 2; ++k1)
                for (unsigned k2 = 0; k1 + k2 <= 2; ++k2) {
                    const double lhs = solve_plain(ab, k1 + k2);
                    rep.check(lhs <= chains[2 * i][k1] * chains[2 * i + 1][k2] + 1e-9, "random pair " + std::to_string(i));
                }
        }
        return rep;
    }

    SuiteReport faithfulness() {
        SuiteReport rep{"faithfulness"};
        rep.unit = "states";
        std::mt19937_64 rng(opts_.seed);
        for (unsigned n = 1; n <= 2; ++n)
            for (unsigned k = 0; k <= 2; ++k) {
                const StateSet &states = cache_.cumulative(n, k);
                std::vector<std::uint32_t> ids(states.size());
                for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
                if (ids.size() > opts_.faithfulness_samples) {
                    std::shuffle(ids.begin(), ids.end(), rng);
                    ids.resize(opts_.faithfulness_samples);
                }
                for (std::uint32_t id : ids) {
                    const TargetState t = target_from_exact(states.state(id), "state#" + std::to_string(id));
                    const auto out = detail::solve_over(t, states, std::nullopt, cache_.config());
                    record(out);
                    rep.check(std::abs(out.result.value - 1.0) <= 1e-8, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " id " + std::to_string(id));
                }
            }
        return rep;
    }

    SuiteReport lower_bound_suite() {
        SuiteReport rep{"lower-bound"};
        rep.unit = "instances";
        standard_workload();
        for (const auto &s : solved_) rep.check(s.lower_bound <= s.value + 1e-9, s.label + " k=" + std::to_string(s.k));
        rep.check(std::abs(growth_threshold(MagicFamily::H) - 0.54311) <= 1e-5, "H threshold");
        rep.check(std::abs(growth_threshold(MagicFamily::SH) - 0.89997) <= 1e-5, "SH threshold");
        return rep;
    }

    SuiteReport duality() {
        SuiteReport rep{"duality"};
        rep.unit = "solves";
        standard_workload();
        for (const auto &s : solved_)
            rep.check(std::abs(s.gap) <= 1e-7 && s.residual <= 1e-7 && s.dual_inf <= 1 + 1e-7, s.label + " k=" + std::to_string(s.k));
        return rep;
    }

    SuiteReport negativity() {
        SuiteReport rep{"negativity"};
        rep.unit = "solves";
        standard_workload();
        for (const auto &s : solved_)
            rep.check(std::abs(s.l1 - (1 + 2 * s.neg)) <= 1e-9 && std::abs(s.coeff_sum - 1) <= 1e-9 && std::abs(s.l1 - s.value) <= 1e-9,
                      s.label + " k=" + std::to_string(s.k));
        return rep;
    }

    StateCache cache_;
    VerifyOptions opts_;
    std::map<std::pair<std::string, unsigned>, RobustnessResult> grid_;
    std::map<unsigned, std::vector<TargetState>> random_;
    std::map<unsigned, std::vector<std::vector<double>>> random_chains_;
    std::vector<Solved> solved_;
};

}  // namespace ckt::cli
