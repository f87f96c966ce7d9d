#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqmat/query_eval.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

class FactStore;
class RepresentativeMap;
class TermDictionary;

// BIND(STR(?source) AS ?target)
struct BindStr {
    std::uint32_t source_var;
    std::uint32_t target_var;
};

// SELECT query over the supported fragment: a basic graph pattern plus
// BIND(STR(...)) clauses. Variables are numbered in first-occurrence order
// across the whole query text.
struct SelectQuery {
    std::vector<std::string> var_names;
    std::vector<Atom> patterns;
    std::vector<BindStr> binds;
    std::vector<std::uint32_t> projection;
};

class QueryParseError : public std::runtime_error {
  public:
    QueryParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// `SELECT ?v ... WHERE { pattern . ... BIND(STR(?x) AS ?y) }`; keywords are
// case-insensitive, pattern terms are `?NAME`, `<IRI>`, or `"STRING"`, and
// dots between elements are optional separators. Query constants are interned.
SelectQuery parse_query(const std::string& text, TermDictionary& dict);

struct QueryOptions {
    // When nonempty, STR strips this prefix from IRIs it starts.
    std::string base_iri;
};

// Multiplicity per distinct projected tuple (resource ids in SELECT order).
using AnswerMultiset = std::map<std::vector<ResourceId>, std::uint64_t>;

// Solutions over representatives plus the per-variable expansion tags that
// keep track of which variables already range over whole cliques.
struct SolutionTable {
    std::vector<Bindings> rows;
    std::vector<bool> expanded;
};

// Query constants replaced by their representatives; ids the map has never
// seen are their own representatives.
SelectQuery normalize_query(const RepresentativeMap& rho, const SelectQuery& q);

// Joins the patterns over unmarked facts; every solution binds pattern
// variables to stored (representative) resources.
SolutionTable match_bgp(const FactStore& store, const SelectQuery& q);

// Replaces each row by one copy per member of the clique bound to v and tags
// v as expanded; expanding a variable twice throws std::logic_error.
void expand_variable(SolutionTable& table, std::uint32_t v, const RepresentativeMap& rho);

// Extends each row with the string form of the (already expanded) source
// variable as an interned literal; the target is tagged expanded.
void apply_bind(SolutionTable& table, const BindStr& bind, TermDictionary& dict,
                const QueryOptions& opt);

// Bag projection: projected-away unexpanded variables multiply each row by
// their clique size, retained unexpanded variables are expanded across their
// clique, and already expanded variables contribute single values.
AnswerMultiset project(const SolutionTable& table, const std::vector<std::uint32_t>& projection,
                       const RepresentativeMap& rho);

// Full pipeline: normalize, match, expand-and-bind, project. The result is
// multiset-equal to evaluating the query over the expansion of the store.
AnswerMultiset answer(const FactStore& store, const RepresentativeMap& rho, const SelectQuery& q,
                      TermDictionary& dict, const QueryOptions& opt = {});

// Lexical form used by STR: literal text, or IRI text with the base prefix
// stripped when it applies.
std::string str_value(const TermDictionary& dict, ResourceId r, const std::string& base_iri);

// One header row of variable names, then one row per multiplicity unit; IRIs
// in angle brackets, literals quoted.
std::string render_tsv(const AnswerMultiset& answers, const SelectQuery& q,
                       const TermDictionary& dict);

}  // namespace eqmat
