#include "eqmat/term_dictionary.hpp"

#include <mutex>
#include <stdexcept>

namespace eqmat {

TermDictionary::TermDictionary() {
    intern_iri(kSameAsIri);
    intern_iri(kDifferentFromIri);
}

ResourceId TermDictionary::intern(const Term& term) {
    {
        std::shared_lock lock(mutex_);
        auto it = ids_.find(term);
        if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto it = ids_.find(term);
    if (it != ids_.end()) return it->second;
    terms_.push_back(term);
    ResourceId id = static_cast<ResourceId>(terms_.size());
    ids_.emplace(term, id);
    return id;
}

ResourceId TermDictionary::intern_iri(std::string_view iri) {
    return intern(Term{TermKind::Iri, std::string(iri)});
}

ResourceId TermDictionary::intern_literal(std::string_view lexical) {
    return intern(Term{TermKind::Literal, std::string(lexical)});
}

const Term& TermDictionary::lookup(ResourceId id) const {
    std::shared_lock lock(mutex_);
    if (id == kNoResource || id > terms_.size())
        throw std::out_of_range("term dictionary: unknown resource id " + std::to_string(id));
    return terms_[id - 1];
}

std::optional<ResourceId> TermDictionary::find(const Term& term) const {
    std::shared_lock lock(mutex_);
    auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

ResourceId TermDictionary::size() const {
    std::shared_lock lock(mutex_);
    return static_cast<ResourceId>(terms_.size());
}

}  // namespace eqmat
