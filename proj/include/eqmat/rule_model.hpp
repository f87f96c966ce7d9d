#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqmat/fact_store.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

class TermDictionary;
class RepresentativeMap;

// A rule term is either a variable (index into the rule's variable table) or
// a constant resource.
struct AtomTerm {
    bool is_var = false;
    std::uint32_t value = kNoResource;

    static AtomTerm var(std::uint32_t index) { return {true, index}; }
    static AtomTerm constant(ResourceId r) { return {false, r}; }
    friend bool operator==(const AtomTerm&, const AtomTerm&) = default;
};

struct Atom {
    AtomTerm s, p, o;

    const AtomTerm& at(std::size_t pos) const { return pos == 0 ? s : pos == 1 ? p : o; }
    AtomTerm& at(std::size_t pos) { return pos == 0 ? s : pos == 1 ? p : o; }
    friend bool operator==(const Atom&, const Atom&) = default;
};

// Structural rule equality ignores variable names; variables are compared by
// index, which parsing assigns in first-occurrence order.
struct Rule {
    Atom head;
    std::vector<Atom> body;
    std::uint32_t var_count = 0;
    std::vector<std::string> var_names;

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.body == b.body;
    }
};

// The contradiction rule (falsum from a reflexive differentFrom fact) has no
// head triple, so it is carried as a flag rather than as an ordinary rule.
struct Program {
    std::vector<Rule> rules;
    bool contradiction_rule = false;
};

struct ParsedRules {
    Program program;
    std::vector<Triple> facts;
};

class RuleParseError : public std::runtime_error {
  public:
    RuleParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// Parses rule text. Statements are atoms `[t,t,t]` with terms `?NAME`,
// `<IRI>`, or `"STRING"`; a statement with `:-` is a rule, otherwise a ground
// fact. `#` starts a comment. Safety (every head variable occurs in the body)
// is enforced; exact duplicate rules are collapsed. Body predicates must be
// constants and must not be the equality predicates, which rewriting handles
// natively; heads are unrestricted.
ParsedRules parse_rules(const std::string& text, TermDictionary& dict);

// The six congruence rules for owl:sameAs: three reflexivity instances (one
// per triple position) and one replacement rule per position. The flag stands
// for the falsum rule over reflexive owl:differentFrom facts; symmetry and
// transitivity are derivable and deliberately absent.
Program eq_axiomatisation();

// The program extended with the congruence rules, duplicates collapsed and the
// contradiction flag set.
Program with_equality_axioms(const Program& p);

// Replaces every constant with its representative; variables are untouched.
Rule normalize_rule(const RepresentativeMap& rho, const Rule& r);

// Normalizes all rules and collapses structural duplicates, keeping first
// occurrences in order.
Program normalize_program(const RepresentativeMap& rho, const Program& p);

// Canonical text form with position-indexed variables, suitable as a map key:
// structurally equal rules render identically.
std::string rule_to_string(const Rule& r, const TermDictionary& dict);

struct AnnotatedAtom {
    Atom atom;
    Strictness strictness = Strictness::Inclusive;
};
using AnnotatedQuery = std::vector<AnnotatedAtom>;

// The remaining body of `r` when position `body_pos` matched the processed
// fact: atoms before the pivot get strict windows, atoms after it inclusive
// ones, so each full-body match is found for exactly one pivot.
AnnotatedQuery pivot_query(const Rule& r, std::size_t body_pos);

// The whole body with inclusive windows, used when re-evaluating an updated
// rule against a position limit.
AnnotatedQuery inclusive_body(const Rule& r);

// Index from body-atom constant signatures to (rule, body position) pairs.
// Probing masks each subset of a fact's positions, so atoms are found whatever
// mix of constants and variables they use.
class RuleIndex {
  public:
    RuleIndex() = default;
    explicit RuleIndex(const Program& p) { rebuild(p); }

    void rebuild(const Program& p);

    // Calls visit(rule, body_pos, sigma) for every body atom unifying with t;
    // sigma maps variable indexes to bound resources (kNoResource = unbound).
    void rules_for(const Triple& t,
                   const std::function<void(const Rule&, std::size_t,
                                            const std::vector<ResourceId>&)>& visit) const;

  private:
    struct Entry {
        const Rule* rule;
        std::uint32_t body_pos;
    };

    std::unordered_map<Triple, std::vector<Entry>, TripleHash> buckets_;
};

}  // namespace eqmat
