#include "eqmat/representative_map.hpp"

#include <stdexcept>
#include <string>

namespace eqmat {

RepresentativeMap::RepresentativeMap(std::size_t term_count)
    : succ_(term_count + 1), pred_(term_count + 1) {}

void RepresentativeMap::check_range(ResourceId r) const {
    if (r == kNoResource || r >= succ_.size())
        throw std::invalid_argument("representative map: resource id " + std::to_string(r) +
                                    " out of range");
}

bool RepresentativeMap::merge_into(ResourceId d, ResourceId c) {
    check_range(d);
    check_range(c);
    if (c >= d)
        throw std::invalid_argument("representative map: merge target must precede the merged "
                                    "resource");
    ResourceId none = kNoResource;
    if (!succ_[d].compare_exchange_strong(none, c, std::memory_order_acq_rel)) return false;
    // Splice d onto the end of c's predecessor list. Each pred slot is written
    // once; on a lost CAS the observed value points further down the list.
    ResourceId e = c;
    for (;;) {
        ResourceId expected = kNoResource;
        if (pred_[e].compare_exchange_strong(expected, d, std::memory_order_acq_rel)) break;
        e = expected;
    }
    merged_.fetch_add(1, std::memory_order_relaxed);
    return true;
}

ResourceId RepresentativeMap::resolve(ResourceId r) const {
    check_range(r);
    for (;;) {
        ResourceId next = succ_[r].load(std::memory_order_acquire);
        if (next == kNoResource) return r;
        r = next;
    }
}

std::vector<ResourceId> RepresentativeMap::clique_members(ResourceId rep) const {
    check_range(rep);
    if (!is_representative(rep))
        throw std::invalid_argument("representative map: clique walk requires a representative");
    std::vector<ResourceId> members;
    for (ResourceId r = rep; r != kNoResource; r = pred_[r].load(std::memory_order_acquire))
        members.push_back(r);
    return members;
}

std::size_t RepresentativeMap::clique_size(ResourceId rep) const {
    check_range(rep);
    if (!is_representative(rep))
        throw std::invalid_argument("representative map: clique walk requires a representative");
    std::size_t n = 0;
    for (ResourceId r = rep; r != kNoResource; r = pred_[r].load(std::memory_order_acquire)) ++n;
    return n;
}

}  // namespace eqmat
