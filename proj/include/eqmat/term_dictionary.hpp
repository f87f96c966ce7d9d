#pragma once

#include <deque>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "eqmat/types.hpp"

namespace eqmat {

enum class TermKind : std::uint8_t { Iri, Literal };

struct Term {
    TermKind kind = TermKind::Iri;
    std::string text;  // IRI without angle brackets, or literal lexical form

    friend bool operator==(const Term&, const Term&) = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept {
        return std::hash<std::string>{}(t.text) * 2 + static_cast<std::size_t>(t.kind);
    }
};

// Bidirectional map between RDF terms and dense resource ids. Ids start at 1;
// owl:sameAs and owl:differentFrom are interned at construction so they always
// receive ids 1 and 2. Interning is idempotent and safe under concurrent
// callers; lookups return stable references (terms are never moved or freed).
class TermDictionary {
public:
    static constexpr const char* kSameAsIri = "http://www.w3.org/2002/07/owl#sameAs";
    static constexpr const char* kDifferentFromIri = "http://www.w3.org/2002/07/owl#differentFrom";

    TermDictionary();

    ResourceId intern(const Term& term);
    ResourceId intern_iri(std::string_view iri);
    ResourceId intern_literal(std::string_view lexical);

    // Throws std::out_of_range for id 0 and ids never handed out.
    const Term& lookup(ResourceId id) const;

    std::optional<ResourceId> find(const Term& term) const;

    // Number of interned terms; valid ids are 1..size().
    ResourceId size() const;

    // Total order used to pick merge directions: smaller id wins.
    static bool precedes(ResourceId a, ResourceId b) { return a < b; }

private:
    mutable std::shared_mutex mutex_;
    std::deque<Term> terms_;  // terms_[id - 1]
    std::unordered_map<Term, ResourceId, TermHash> ids_;
};

}  // namespace eqmat
