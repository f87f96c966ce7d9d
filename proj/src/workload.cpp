#include "eqmat/workload.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "eqmat/term_dictionary.hpp"

namespace eqmat {

Workload make_clique_workload(TermDictionary& dict, const WorkloadConfig& config) {
    Workload w;
    std::mt19937 rng(config.seed);

    std::vector<std::vector<ResourceId>> cliques;
    for (std::size_t c = 0; c < config.cliques; ++c) {
        std::vector<ResourceId> members;
        members.reserve(config.members);
        for (std::size_t m = 0; m < config.members; ++m)
            members.push_back(dict.intern_iri("http://example.org/clique" + std::to_string(c + 1) +
                                              "/m" + std::to_string(m + 1)));
        cliques.push_back(std::move(members));
    }

    std::size_t entity_count = std::max<std::size_t>(config.ordinary_facts / 10, 4);
    std::vector<ResourceId> entities;
    entities.reserve(entity_count);
    for (std::size_t i = 0; i < entity_count; ++i)
        entities.push_back(dict.intern_iri("http://example.org/e" + std::to_string(i + 1)));
    std::vector<ResourceId> predicates;
    for (std::size_t i = 0; i < 8; ++i)
        predicates.push_back(dict.intern_iri("http://example.org/p" + std::to_string(i + 1)));

    for (const std::vector<ResourceId>& members : cliques)
        for (std::size_t m = 0; m + 1 < members.size(); ++m)
            w.facts.push_back(Triple{members[m], kSameAs, members[m + 1]});

    auto pick = [&](const std::vector<ResourceId>& pool) { return pool[rng() % pool.size()]; };
    for (std::size_t i = 0; i < config.ordinary_facts; ++i)
        w.facts.push_back(Triple{pick(entities), pick(predicates), pick(entities)});
    for (std::size_t i = 0; i < config.touching_facts && !cliques.empty(); ++i)
        w.facts.push_back(
            Triple{pick(cliques[i % cliques.size()]), pick(predicates), pick(entities)});

    ResourceId derived = dict.intern_iri("http://example.org/derived");
    Rule copy;
    copy.head = Atom{AtomTerm::var(0), AtomTerm::constant(derived), AtomTerm::var(1)};
    copy.body = {Atom{AtomTerm::var(0), AtomTerm::constant(predicates.front()), AtomTerm::var(1)}};
    copy.var_count = 2;
    copy.var_names = {"x", "y"};
    w.program.rules.push_back(std::move(copy));
    return w;
}

}  // namespace eqmat
