#include "eqmat/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "eqmat/fact_store.hpp"
#include "eqmat/query_eval.hpp"
#include "eqmat/representative_map.hpp"
#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

bool bind_term(const AtomTerm& term, ResourceId value, Bindings& sigma,
               std::vector<std::uint32_t>& bound) {
    if (!term.is_var) return term.value == value;
    ResourceId& slot = sigma[term.value];
    if (slot != kNoResource) return slot == value;
    slot = value;
    bound.push_back(term.value);
    return true;
}

// Enumerates every substitution matching the atoms against the set, extending
// sigma in place and undoing its bindings on backtrack.
void match_atoms(const std::vector<Atom>& atoms, std::size_t i, const FactSet& facts,
                 Bindings& sigma, const std::function<void(const Bindings&)>& emit) {
    if (i == atoms.size()) {
        emit(sigma);
        return;
    }
    const Atom& atom = atoms[i];
    for (const Triple& f : facts) {
        std::vector<std::uint32_t> bound;
        if (bind_term(atom.s, f.s, sigma, bound) && bind_term(atom.p, f.p, sigma, bound) &&
            bind_term(atom.o, f.o, sigma, bound))
            match_atoms(atoms, i + 1, facts, sigma, emit);
        for (std::uint32_t v : bound) sigma[v] = kNoResource;
    }
}

}  // namespace

NaiveResult naive_materialise(const std::vector<Triple>& explicit_facts, const Program& program) {
    NaiveResult result;
    result.facts.insert(explicit_facts.begin(), explicit_facts.end());

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Triple> fresh;
        for (const Rule& rule : program.rules) {
            Bindings sigma(rule.var_count, kNoResource);
            match_atoms(rule.body, 0, result.facts, sigma, [&](const Bindings& tau) {
                Triple head = instantiate(rule.head, tau);
                if (!result.facts.count(head)) fresh.push_back(head);
            });
        }
        for (const Triple& t : fresh) changed = result.facts.insert(t).second || changed;
    }

    if (program.contradiction_rule)
        for (const Triple& t : result.facts)
            if (t.p == kDifferentFrom && t.s == t.o) {
                result.contradiction = true;
                break;
            }
    return result;
}

FactSet expand_store(const FactSet& triples, const RepresentativeMap& rho) {
    std::map<ResourceId, std::vector<ResourceId>> members;
    for (ResourceId r = 1; r <= rho.capacity(); ++r) members[rho.resolve(r)].push_back(r);
    auto members_of = [&](ResourceId rep) {
        auto it = members.find(rep);
        return it != members.end() ? it->second : std::vector<ResourceId>{rep};
    };
    auto resolve = [&](ResourceId r) { return r <= rho.capacity() ? rho.resolve(r) : r; };

    FactSet out;
    for (const Triple& t : triples) {
        if (resolve(t.s) != t.s || resolve(t.p) != t.p || resolve(t.o) != t.o) continue;
        for (ResourceId s : members_of(t.s))
            for (ResourceId p : members_of(t.p))
                for (ResourceId o : members_of(t.o)) out.insert(Triple{s, p, o});
    }
    return out;
}

VerificationReport verify_materialisation(const FactStore& store, const RepresentativeMap& rho,
                                          bool engine_contradiction,
                                          const std::vector<Triple>& explicit_facts,
                                          const Program& program) {
    VerificationReport report;
    auto note = [&](const std::string& text) {
        if (report.detail.empty()) report.detail = text;
    };

    std::vector<Triple> unmarked = store.unmarked_triples();
    for (const Triple& t : unmarked) {
        if (t.p == kSameAs && t.s != t.o) {
            report.no_equality_residue = false;
            note("an unmarked fact asserts equality between distinct resources");
            break;
        }
    }
    for (const Triple& t : unmarked) {
        if (rho.normalize(t) != t) {
            report.store_normalized = false;
            note("an unmarked fact is not in representative form");
            break;
        }
    }

    NaiveResult reference = naive_materialise(explicit_facts, with_equality_axioms(program));
    if (reference.contradiction || engine_contradiction) {
        if (reference.contradiction != engine_contradiction) {
            report.matches_reference = false;
            note(engine_contradiction
                     ? "the engine reports a contradiction but the reference run does not"
                     : "the reference run derives a contradiction but the engine does not");
        }
    } else {
        FactSet expanded = expand_store(FactSet(unmarked.begin(), unmarked.end()), rho);
        if (expanded != reference.facts) {
            report.matches_reference = false;
            note("expansion has " + std::to_string(expanded.size()) +
                 " triples but the reference fixpoint has " +
                 std::to_string(reference.facts.size()));
        }
    }
    return report;
}

std::uint64_t count_clique_derivations(std::size_t n) {
    if (n == 0) return 0;

    TermDictionary dict;
    std::vector<ResourceId> clique;
    for (std::size_t i = 0; i < n; ++i)
        clique.push_back(dict.intern_iri("http://example.org/c" + std::to_string(i + 1)));

    std::vector<Triple> chain;
    if (n == 1)
        chain.push_back(Triple{clique[0], kSameAs, clique[0]});
    else
        for (std::size_t i = 0; i + 1 < n; ++i)
            chain.push_back(Triple{clique[i], kSameAs, clique[i + 1]});

    Program eq = eq_axiomatisation();
    FactSet closure = naive_materialise(chain, eq).facts;

    auto in_clique = [&](ResourceId r) {
        return std::find(clique.begin(), clique.end(), r) != clique.end();
    };
    auto intra = [&](const Triple& t) {
        return t.p == kSameAs && in_clique(t.s) && in_clique(t.o);
    };

    std::uint64_t count = 0;
    FactSet reflexive_conclusions;
    for (const Rule& rule : eq.rules) {
        Bindings sigma(rule.var_count, kNoResource);
        match_atoms(rule.body, 0, closure, sigma, [&](const Bindings& tau) {
            Triple head = instantiate(rule.head, tau);
            if (!intra(head)) return;
            if (rule.body.size() == 1)
                reflexive_conclusions.insert(head);
            else
                ++count;
        });
    }
    return count + reflexive_conclusions.size();
}

AnswerMultiset reference_answer(const FactSet& facts, const SelectQuery& q, TermDictionary& dict,
                                const QueryOptions& opt) {
    AnswerMultiset answers;
    Bindings sigma(q.var_names.size(), kNoResource);
    match_atoms(q.patterns, 0, facts, sigma, [&](const Bindings& tau) {
        Bindings row = tau;
        for (const BindStr& bind : q.binds)
            row[bind.target_var] = dict.intern_literal(str_value(dict, row[bind.source_var],
                                                                 opt.base_iri));
        std::vector<ResourceId> tuple;
        tuple.reserve(q.projection.size());
        for (std::uint32_t v : q.projection) tuple.push_back(row[v]);
        answers[tuple] += 1;
    });
    return answers;
}

}  // namespace eqmat
