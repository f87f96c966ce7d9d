#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "eqmat/rule_model.hpp"
#include "eqmat/sparql.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

class FactStore;
class RepresentativeMap;
class TermDictionary;

using FactSet = std::set<Triple>;

struct NaiveResult {
    FactSet facts;
    bool contradiction = false;
};

// Round-based fixpoint over a plain set, deliberately index-free and slow so
// it stays independently trustworthy. The contradiction flag is set when the
// program carries the falsum rule and a reflexive differentFrom fact is
// derivable; evaluation still runs to the fixpoint.
NaiveResult naive_materialise(const std::vector<Triple>& explicit_facts, const Program& program);

// Every triple whose componentwise image under rho is stored. Stored triples
// that are not in representative form have no preimage and contribute nothing.
FactSet expand_store(const FactSet& triples, const RepresentativeMap& rho);

// Checks a rewriting run against the naive reference:
//   1. no unmarked fact asserts equality between two distinct resources,
//   2. every unmarked fact is in representative form,
//   3. the expansion of the unmarked facts equals the naive fixpoint of the
//      explicit facts under the program plus the congruence rules; when either
//      side detects a contradiction only the outcomes are compared, since the
//      engine stops applying ordinary rules to facts it has already refuted.
struct VerificationReport {
    bool no_equality_residue = true;
    bool store_normalized = true;
    bool matches_reference = true;
    std::string detail;

    bool passed() const { return no_equality_residue && store_normalized && matches_reference; }
};

VerificationReport verify_materialisation(const FactStore& store, const RepresentativeMap& rho,
                                          bool engine_contradiction,
                                          const std::vector<Triple>& explicit_facts,
                                          const Program& program);

// Counts, over the materialised closure of one n-member clique (chained
// equality facts; a single reflexive fact when n is 1), the derivations of the
// n² intra-clique equality triples: replacement rules contribute one count per
// ground substitution, reflexivity rules one count per distinct conclusion.
// Equals 2n³+n²+n.
std::uint64_t count_clique_derivations(std::size_t n);

// Direct bag-semantics evaluation over an expanded fact set: nested-loop join,
// string binds, projection with duplicate retention.
AnswerMultiset reference_answer(const FactSet& facts, const SelectQuery& q, TermDictionary& dict,
                                const QueryOptions& opt);

}  // namespace eqmat
