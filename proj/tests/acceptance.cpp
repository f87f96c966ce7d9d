// Acceptance suite: runs every criterion (or one, with --criterion N) and
// prints exactly one PASS or FAIL line per criterion run. Exits nonzero if
// any run criterion failed.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eqmat/fact_store.hpp"
#include "eqmat/materialisation.hpp"
#include "eqmat/ntriples.hpp"
#include "eqmat/oracle.hpp"
#include "eqmat/representative_map.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/sparql.hpp"
#include "eqmat/term_dictionary.hpp"
#include "eqmat/types.hpp"
#include "eqmat/workload.hpp"
#include "support/random_instance.hpp"

using namespace eqmat;
using eqmat::testsupport::make_random_query;
using eqmat::testsupport::RandomInstance;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

FactSet to_set(const std::vector<Triple>& triples) {
    return FactSet(triples.begin(), triples.end());
}

// The presidents example from the data directory.
struct Presidents {
    TermDictionary dict;
    std::vector<Triple> facts;
    Program program;

    Presidents() {
        const std::string root = EQMAT_SOURCE_DIR;
        std::ifstream nt(root + "/data/pex.nt");
        parse_ntriples(nt, dict, facts);
        ParsedRules parsed = parse_rules(read_file(root + "/data/pex.dlog"), dict);
        program = std::move(parsed.program);
        facts.insert(facts.end(), parsed.facts.begin(), parsed.facts.end());
    }
};

bool criterion1() {
    auto start = Clock::now();
    Presidents in;
    auto rew = materialise(in.facts, in.program, in.dict, {.mode = Mode::Rew});
    auto ax = materialise(in.facts, in.program, in.dict, {.mode = Mode::Ax});
    FactSet expanded = expand_store(to_set(rew.store->unmarked_triples()), *rew.rho);
    FactSet stored = to_set(ax.store->unmarked_triples());
    double secs = seconds_since(start);
    if (expanded == stored && secs < 1.0) {
        std::cout << "PASS criterion 1: expanded rewriting store equals the axiomatised store ("
                  << stored.size() << " triples, " << secs << " s)\n";
        return true;
    }
    std::cout << "FAIL criterion 1: ";
    if (expanded != stored)
        std::cout << "expansion has " << expanded.size() << " triples, axiomatised store has "
                  << stored.size();
    else
        std::cout << "took " << secs << " s, limit 1 s";
    std::cout << '\n';
    return false;
}

bool criterion2() {
    Presidents in;
    auto rew = materialise(in.facts, in.program, in.dict, {.mode = Mode::Rew});
    auto ax = materialise(in.facts, in.program, in.dict, {.mode = Mode::Ax});
    bool rew_ok = rew.stats.derivations == 6;
    bool ax_ok = ax.stats.derivations > 60;
    if (rew_ok && ax_ok) {
        std::cout << "PASS criterion 2: rewriting made 6 derivations, axiomatisation "
                  << ax.stats.derivations << " (> 60)\n";
        return true;
    }
    std::cout << "FAIL criterion 2:";
    if (!rew_ok)
        std::cout << " rewriting made " << rew.stats.derivations << " derivations ("
                  << rew.stats.derivations_rules << " rule, " << rew.stats.derivations_rewrite
                  << " rewrite, " << rew.stats.derivations_reflexivity
                  << " reflexivity) where exactly 6 were required; this engine counts every"
                     " store-add attempt, including rewrites of marked facts and reflexivity"
                     " side-adds, so it cannot reach 6 without suppressing real work;";
    std::cout << " axiomatisation made " << ax.stats.derivations << " derivations (> 60 "
              << (ax_ok ? "satisfied" : "required") << ")\n";
    return false;
}

bool criterion3() {
    auto start = Clock::now();
    for (std::uint64_t n = 1; n <= 4; ++n) {
        std::uint64_t expected = 2 * n * n * n + n * n + n;
        std::uint64_t got = count_clique_derivations(n);
        if (got != expected) {
            std::cout << "FAIL criterion 3: clique of " << n << " counted " << got
                      << " derivations, formula gives " << expected << '\n';
            return false;
        }
    }
    double secs = seconds_since(start);
    if (secs >= 1.0) {
        std::cout << "FAIL criterion 3: counts match but took " << secs << " s, limit 1 s\n";
        return false;
    }
    std::cout << "PASS criterion 3: clique derivation counts match 2n^3+n^2+n for n in 1..4 ("
              << secs << " s)\n";
    return true;
}

bool criterion4() {
    auto start = Clock::now();
    for (std::uint32_t seed = 0; seed < 1000; ++seed) {
        RandomInstance inst(seed);
        auto r = materialise(inst.facts, inst.program, inst.dict, {.mode = Mode::Rew});
        VerificationReport report = verify_materialisation(
            *r.store, *r.rho, r.outcome == Outcome::Contradiction, inst.facts, inst.program);
        if (!report.passed()) {
            std::cout << "FAIL criterion 4: instance " << seed << ": "
                      << (report.detail.empty() ? "a verification property failed" : report.detail)
                      << '\n';
            return false;
        }
    }
    double secs = seconds_since(start);
    if (secs >= 60.0) {
        std::cout << "FAIL criterion 4: 1000 instances verified but took " << secs
                  << " s, limit 60 s\n";
        return false;
    }
    std::cout << "PASS criterion 4: 1000 random instances verified against the reference"
                 " fixpoint ("
              << secs << " s)\n";
    return true;
}

bool criterion5() {
    auto start = Clock::now();
    const unsigned thread_counts[] = {1, 2, 4, 8};
    for (std::uint32_t seed = 0; seed < 100; ++seed) {
        RandomInstance inst(seed);
        std::vector<Triple> base_triples;
        std::vector<ResourceId> base_resolve;
        Outcome base_outcome = Outcome::Consistent;
        bool have_base = false;
        for (unsigned threads : thread_counts) {
            for (int repeat = 0; repeat < 10; ++repeat) {
                auto r = materialise(inst.facts, inst.program, inst.dict,
                                     {.mode = Mode::Rew, .threads = threads});
                std::vector<Triple> triples = r.store->unmarked_triples();
                std::sort(triples.begin(), triples.end());
                std::vector<ResourceId> resolve;
                for (ResourceId x = 1; x <= r.rho->capacity(); ++x)
                    resolve.push_back(r.rho->resolve(x));
                if (!have_base) {
                    base_triples = std::move(triples);
                    base_resolve = std::move(resolve);
                    base_outcome = r.outcome;
                    have_base = true;
                } else if (triples != base_triples || resolve != base_resolve ||
                           r.outcome != base_outcome) {
                    std::cout << "FAIL criterion 5: instance " << seed << " with " << threads
                              << " threads (repeat " << repeat
                              << ") diverged from the single-thread result\n";
                    return false;
                }
            }
        }
    }
    std::cout << "PASS criterion 5: 100 instances identical across 1/2/4/8 threads and 10"
                 " schedules each ("
              << seconds_since(start) << " s)\n";
    return true;
}

bool criterion6() {
    auto start = Clock::now();
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        RandomInstance inst(seed);
        for (Mode mode : {Mode::Rew, Mode::Ax}) {
            auto r = materialise(inst.facts, inst.program, inst.dict,
                                 {.mode = mode, .collect_firings = true});
            for (const auto& [key, count] : r.firings) {
                if (count != 1) {
                    std::cout << "FAIL criterion 6: instance " << seed << " fired " << key << ' '
                              << count << " times\n";
                    return false;
                }
            }
        }
    }
    std::cout << "PASS criterion 6: no duplicate (rule, substitution) firing on 200 instances"
                 " in either mode ("
              << seconds_since(start) << " s)\n";
    return true;
}

bool criterion7() {
    auto start = Clock::now();
    const std::string root = EQMAT_SOURCE_DIR;
    Presidents in;
    SelectQuery q1 = parse_query(read_file(root + "/data/q1.rq"), in.dict);
    SelectQuery q2 = parse_query(read_file(root + "/data/q2.rq"), in.dict);
    QueryOptions opt{.base_iri = "http://example.org/"};

    ResourceId uspres = in.dict.intern_iri("http://example.org/USPresident");
    ResourceId obama = in.dict.intern_iri("http://example.org/Obama");
    ResourceId lit_uspres = in.dict.intern_literal("USPresident");
    ResourceId lit_obama = in.dict.intern_literal("Obama");
    const AnswerMultiset expect_q1{{{uspres}, 3}, {{obama}, 3}};
    const AnswerMultiset expect_q2{{{lit_uspres}, 1}, {{lit_obama}, 1}};

    for (Mode mode : {Mode::Rew, Mode::Ax}) {
        auto r = materialise(in.facts, in.program, in.dict, {.mode = mode});
        const char* name = mode == Mode::Rew ? "rewriting" : "axiomatised";
        if (answer(*r.store, *r.rho, q1, in.dict, opt) != expect_q1) {
            std::cout << "FAIL criterion 7: first query over the " << name
                      << " store missed the six expected answers\n";
            return false;
        }
        if (answer(*r.store, *r.rho, q2, in.dict, opt) != expect_q2) {
            std::cout << "FAIL criterion 7: second query over the " << name
                      << " store missed the two expected names\n";
            return false;
        }
    }

    for (std::uint32_t i = 0; i < 500; ++i) {
        RandomInstance inst(20000 + i, false);
        std::mt19937 rng(333 + i);
        SelectQuery q = make_random_query(rng, inst);
        auto r = materialise(inst.facts, inst.program, inst.dict, {.mode = Mode::Rew});
        AnswerMultiset got = answer(*r.store, *r.rho, q, inst.dict, opt);
        FactSet expanded = expand_store(to_set(r.store->unmarked_triples()), *r.rho);
        AnswerMultiset want = reference_answer(expanded, q, inst.dict, opt);
        if (got != want) {
            std::cout << "FAIL criterion 7: random pair " << i
                      << " disagrees with the reference answer over the expansion\n";
            return false;
        }
    }
    std::cout << "PASS criterion 7: fixed answers match in both modes and 500 random query/store"
                 " pairs agree with the reference ("
              << seconds_since(start) << " s)\n";
    return true;
}

bool criterion8() {
    std::cout << "criterion 8: benchmark results at the original scale (hundreds of millions of\n"
                 "criterion 8: triples, 16 hardware threads, order-of-magnitude speedups) are not\n"
                 "criterion 8: reproducible in this environment; a synthetic 100k-triple workload\n"
                 "criterion 8: with 1000-member cliques checks the direction of the effect"
                 " instead.\n";
    TermDictionary dict;
    Workload w = make_clique_workload(dict, WorkloadConfig{});
    auto start = Clock::now();
    auto rew = materialise(w.facts, w.program, dict,
                           {.mode = Mode::Rew, .capacity_hint = std::size_t{1} << 22});
    double rew_secs = seconds_since(start);
    auto mid = Clock::now();
    auto ax = materialise(w.facts, w.program, dict,
                          {.mode = Mode::Ax, .capacity_hint = std::size_t{1} << 22});
    double ax_secs = seconds_since(mid);
    bool fewer_derivations = rew.stats.derivations < ax.stats.derivations;
    bool fewer_triples = rew.triples_unmarked < ax.triples_unmarked;
    if (fewer_derivations && fewer_triples) {
        std::cout << "PASS criterion 8: rewriting made " << rew.stats.derivations
                  << " derivations and kept " << rew.triples_unmarked << " triples in " << rew_secs
                  << " s; axiomatisation made " << ax.stats.derivations << " and kept "
                  << ax.triples_unmarked << " in " << ax_secs << " s\n";
        return true;
    }
    std::cout << "FAIL criterion 8:";
    if (!fewer_derivations)
        std::cout << " rewriting derivations " << rew.stats.derivations
                  << " not below axiomatisation " << ax.stats.derivations << ';';
    if (!fewer_triples)
        std::cout << " rewriting kept " << rew.triples_unmarked
                  << " triples, not below axiomatisation " << ax.triples_unmarked << ';';
    std::cout << '\n';
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 1;
        }
    }
    if (selected < 0 || selected > 8) {
        std::cerr << "error: criterion must be between 1 and 8\n";
        return 1;
    }
    std::cout << std::fixed << std::setprecision(2);
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                            criterion5, criterion6, criterion7, criterion8};
    bool all_passed = true;
    for (int n = 1; n <= 8; ++n) {
        if (selected != 0 && selected != n) continue;
        all_passed = criteria[n - 1]() && all_passed;
    }
    return all_passed ? 0 : 1;
}
