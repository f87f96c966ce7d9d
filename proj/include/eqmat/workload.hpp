#pragma once

#include <cstdint>
#include <vector>

#include "eqmat/rule_model.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

class TermDictionary;

struct WorkloadConfig {
    std::size_t cliques = 2;
    std::size_t members = 1000;
    std::size_t ordinary_facts = 98000;
    std::size_t touching_facts = 200;
    std::uint32_t seed = 1;
};

struct Workload {
    std::vector<Triple> facts;
    Program program;
};

// Chained equality facts for each clique, a pool of ordinary facts over fresh
// entities plus `touching_facts` whose subject is a clique member, and one
// copy rule so both modes do rule work. Deterministic for a given dictionary
// state and seed.
Workload make_clique_workload(TermDictionary& dict, const WorkloadConfig& config);

}  // namespace eqmat
