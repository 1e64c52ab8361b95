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

#include <fstream>
#include <iostream>
#include <regex>

#include "CLI11.hpp"

#include "ckt/commands.hpp"

using namespace ckt;
using namespace ckt::cli;

namespace {

struct Range {
    unsigned lo{0};
    unsigned hi{0};
};

// "3" or "1-4"
Range parse_range(const std::string &text, const char *what) {
    static const std::regex re(R"(^\s*([0-9]+)\s*(?:-\s*([0-9]+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw UsageError(std::string(what) + ": expected N or LO-HI, got '" + text + "'");
    Range r{static_cast<unsigned>(std::stoul(m[1])), 0};
    r.hi = m[2].matched ? static_cast<unsigned>(std::stoul(m[2])) : r.lo;
    if (r.lo > r.hi) throw UsageError(std::string(what) + ": empty range '" + text + "'");
    return r;
}

void emit(const nlohmann::json &j, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Clifford+kT state enumeration, robustness and sampling"};
    app.require_subcommand(1);
    app.fallthrough();

    ConfigLayer flags;
    std::optional<std::string> config_path;
    std::string budget_text;
    bool quiet = false, no_timing = false;
    app.add_option("--threads", flags.threads, "worker threads (0 = all cores)");
    app.add_option("--budget", budget_text, "memory budget, e.g. 8GiB");
    app.add_option("--max-qubits", flags.max_qubits, "largest accepted target");
    app.add_option("--config", config_path, "JSON config file");
    app.add_flag("--quiet,-q", quiet, "no progress on stderr");
    app.add_flag("--no-timing", no_timing, "omit time_ms from JSON");

    // enumerate
    auto *en = app.add_subcommand("enumerate", "enumerate cumulative and strict Clifford+kT states");
    unsigned en_n = 1, en_k = 0;
    std::string en_out;
    bool en_resume = false;
    en->add_option("--n", en_n, "qubits")->required();
    en->add_option("--k", en_k, "T budget")->required();
    en->add_option("--out,-o", en_out, "directory for CKTS layer files");
    en->add_flag("--resume", en_resume, "continue after the last complete layer in --out");

    // robustness
    auto *rb = app.add_subcommand("robustness", "Clifford+kT robustness of a target");
    std::string rb_target, rb_states, rb_sym, rb_table, rb_n = "1-3", rb_k_range = "0-3", rb_csv, rb_out;
    std::optional<unsigned> rb_k;
    bool rb_no_membership = false;
    rb->add_option("--target,-t", rb_target, "target expression, e.g. tplus^3, cs, ccz, mixed(2), file:psi.json");
    rb->add_option("--k", rb_k, "T budget");
    rb->add_option("--states", rb_states, "CKTS state file, or 'auto'")->default_str("auto");
    rb->add_option("--sym", rb_sym, "symmetry: perm, localH, localSH joined by '+', 'auto' or 'none'");
    rb->add_option("--table", rb_table, "sweep a grid for a family (tplus, sh, h, plus, cs, ccz)");
    rb->add_option("--n", rb_n, "table qubit range, e.g. 1-4");
    rb->add_option("--k-range", rb_k_range, "table k range, e.g. 0-3");
    rb->add_option("--csv", rb_csv, "also write the table as CSV");
    rb->add_flag("--no-membership", rb_no_membership, "always solve the LP");
    rb->add_option("--out,-o", rb_out, "write JSON here instead of stdout");

    // lower-bound
    auto *lb = app.add_subcommand("lower-bound", "analytic lower bound on R_k");
    std::string lb_target, lb_family;
    unsigned lb_k = 0;
    lb->add_option("--target,-t", lb_target, "target expression");
    lb->add_option("--k", lb_k, "T budget");
    lb->add_option("--threshold", lb_family, "print the growth threshold of H or SH instead");

    // sample
    auto *sm = app.add_subcommand("sample", "quasi-probability estimate of a Pauli expectation");
    SampleRequest sreq;
    sm->add_option("--target,-t", sreq.target, "target expression")->required();
    sm->add_option("--pauli,-p", sreq.pauli, "Pauli string, letter i acts on qubit i")->required();
    sm->add_option("--k", sreq.k, "T budget")->required();
    sm->add_option("--delta", sreq.delta, "additive error")->capture_default_str();
    sm->add_option("--eps", sreq.eps, "failure probability")->capture_default_str();
    sm->add_option("--seed", sreq.seed, "PRNG seed")->capture_default_str();

    // ma-normal
    auto *ma = app.add_subcommand("ma-normal", "normal form of a one-qubit {H,S,T} word");
    std::string ma_word;
    bool ma_json = false;
    ma->add_option("word", ma_word, "gate word, leftmost gate acts last")->required();
    ma->add_flag("--json", ma_json, "JSON output");

    // verify
    auto *vf = app.add_subcommand("verify", "run a property suite");
    std::string vf_suite;
    VerifyOptions vopts;
    vf->add_option("suite", vf_suite, "suite name or 'all'")->required();
    vf->add_flag("--full", vopts.full, "include the n=4 grid entries");
    vf->add_option("--seed", vopts.seed, "sampling seed")->capture_default_str();

    // counts
    auto *ct = app.add_subcommand("counts", "CSV of cumulative and strict counts");
    std::string ct_n, ct_out;
    unsigned ct_k = 0;
    ct->add_option("--n", ct_n, "qubits (default: the standard grid)");
    ct->add_option("--k", ct_k, "largest k");
    ct->add_option("--out,-o", ct_out, "CSV file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (!budget_text.empty()) flags.budget_bytes = parse_bytes(budget_text);
        Config cfg = load_config(flags, config_path, process_env());
        cfg.timing = !no_timing;
        if (!quiet) cfg.log = [](const std::string &m) { std::cerr << "[ckt] " << m << "\n"; };

        if (en->parsed()) {
            EnumerateRequest req{en_n, en_k, std::nullopt, en_resume};
            if (!en_out.empty()) req.out_dir = en_out;
            const auto layers = run_enumerate(req, cfg, [&](const LayerCounts &l) {
                cfg.note("k=" + std::to_string(l.k) + ": " + std::to_string(l.cumulative) + " cumulative, " + std::to_string(l.strict) + " strict");
            });
            std::cout << count_rows(en_n, layers);
            return kExitOk;
        }

        if (rb->parsed()) {
            StateCache cache(cfg);
            if (!rb_table.empty()) {
                if (!rb_target.empty() || rb_k) throw UsageError("--table replaces --target and --k");
                const Range n = parse_range(rb_n, "--n"), k = parse_range(rb_k_range, "--k-range");
                TableRequest req{rb_table, n.lo, n.hi, k.lo, k.hi, rb_sym.empty() ? "auto" : rb_sym, !rb_no_membership};
                const auto cells = robustness_table(req, cache);
                std::cout << render_table(cells);
                if (!rb_csv.empty()) {
                    std::ofstream out(rb_csv);
                    if (!out) throw std::runtime_error("cannot open " + rb_csv + " for writing");
                    out << table_csv(cells);
                }
                return kExitOk;
            }
            if (rb_target.empty()) throw UsageError("--target is required");
            RobustnessRequest req;
            req.target = rb_target;
            req.k = rb_k;
            req.sym = rb_sym;
            req.membership = !rb_no_membership;
            if (!rb_states.empty() && rb_states != "auto") req.states = rb_states;
            emit(run_robustness(req, cache).json(cfg.timing), rb_out);
            return kExitOk;
        }

        if (lb->parsed()) {
            if (!lb_family.empty()) {
                std::cout << threshold_json(lb_family).dump(2) << "\n";
                return kExitOk;
            }
            if (lb_target.empty()) throw UsageError("--target or --threshold is required");
            std::cout << run_lower_bound(lb_target, lb_k, cfg).dump(2) << "\n";
            return kExitOk;
        }

        if (sm->parsed()) {
            StateCache cache(cfg);
            std::cout << run_sample(sreq, cache).dump(2) << "\n";
            return kExitOk;
        }

        if (ma->parsed()) {
            const auto j = ma_normal_json(ma_word);
            std::cout << (ma_json ? j.dump(2) + "\n" : ma_normal_text(j));
            return kExitOk;
        }

        if (vf->parsed()) {
            Verifier v(cfg, vopts);
            std::vector<SuiteReport> reports;
            if (vf_suite == "all") reports = v.run_all();
            else reports.push_back(v.run(vf_suite));
            bool ok = true;
            for (const auto &r : reports) {
                std::cout << r.line() << "\n";
                for (const auto &f : r.failures) std::cout << "  failed: " << f << "\n";
                ok = ok && r.passed;
            }
            return ok ? kExitOk : kExitFailure;
        }

        if (ct->parsed()) {
            std::vector<std::pair<unsigned, unsigned>> grid = default_count_grid();
            if (!ct_n.empty()) {
                const Range n = parse_range(ct_n, "--n");
                grid.clear();
                for (unsigned i = n.lo; i <= n.hi; ++i) grid.push_back({i, ct_k});
            }
            if (ct_out.empty()) {
                run_counts(grid, cfg, std::cout);
            } else {
                std::ofstream out(ct_out);
                if (!out) throw std::runtime_error("cannot open " + ct_out + " for writing");
                run_counts(grid, cfg, out);
            }
            return kExitOk;
        }
    } catch (const BudgetExceeded &e) {
        std::cerr << "ckt: refused: " << e.what() << "\n";
        return kExitBudget;
    } catch (const LPInfeasible &e) {
        std::cerr << "ckt: infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const TargetParseError &e) {
        std::cerr << "ckt: bad target: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SymmetryError &e) {
        std::cerr << "ckt: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "ckt: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "ckt: error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
