#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eqmat/fact_store.hpp"
#include "eqmat/representative_map.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

class TermDictionary;

// Ax materialises the program together with the six congruence rules, storing
// every equal variant explicitly. Rew merges equal resources instead, keeping
// one representative copy of each fact and rewriting rules as cliques grow.
enum class Mode { Ax, Rew };

enum class Outcome { Consistent, Contradiction };

struct EngineConfig {
    Mode mode = Mode::Rew;
    unsigned threads = 1;
    // Record every (rule, substitution) firing; slow, used by tests.
    bool collect_firings = false;
    std::size_t capacity_hint = 0;
};

// derivations counts every add attempt and splits by source; successful_adds
// counts the attempts that stored a new fact. rule_applications counts body
// evaluations: one per (rule, matched fact) pair plus one per re-evaluated
// updated rule. serial_phases counts executions of the single-threaded phase
// that refreshes the rule set when all workers run out of work.
struct MaterialisationStats {
    std::uint64_t rule_applications = 0;
    std::uint64_t derivations = 0;
    std::uint64_t derivations_rules = 0;
    std::uint64_t derivations_rewrite = 0;
    std::uint64_t derivations_reflexivity = 0;
    std::uint64_t successful_adds = 0;
    std::uint64_t merged_resources = 0;
    std::uint64_t marked_facts = 0;
    std::uint64_t serial_phases = 0;
};

struct MaterialisationResult {
    std::unique_ptr<FactStore> store;  // compacted: marked facts removed
    std::unique_ptr<RepresentativeMap> rho;
    MaterialisationStats stats;
    Outcome outcome = Outcome::Consistent;
    // Firing key -> count, filled only when collect_firings is set.
    std::map<std::string, std::uint64_t> firings;
    // Log size and unmarked count before compaction.
    std::uint64_t triples_total = 0;
    std::uint64_t triples_unmarked = 0;
};

// Computes the least fixpoint of the program over the explicit facts with the
// configured number of worker threads. The dictionary is only read; every
// resource id in the facts and rules must already be interned.
MaterialisationResult materialise(const std::vector<Triple>& explicit_facts, const Program& program,
                                  const TermDictionary& dict, const EngineConfig& config);

}  // namespace eqmat
