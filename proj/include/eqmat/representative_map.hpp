#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "eqmat/types.hpp"

namespace eqmat {

// Union map from resources to representatives, implemented as write-once
// successor/predecessor arrays (0 = none). merge_into is lock-free: the CAS on
// succ decides the merge, then the caller splices the merged clique onto the
// end of the winner's predecessor list, retrying past concurrent splices.
// resolve is wait-free and returns a representative at least as current as the
// map just before the call.
class RepresentativeMap {
public:
    explicit RepresentativeMap(std::size_t term_count);

    // Merges d (and its clique) into c. Requires c < d (smaller id wins);
    // throws std::invalid_argument otherwise. Returns false iff d was already
    // merged into something.
    bool merge_into(ResourceId d, ResourceId c);

    ResourceId resolve(ResourceId r) const;

    Triple normalize(const Triple& t) const {
        return Triple{resolve(t.s), resolve(t.p), resolve(t.o)};
    }

    bool is_representative(ResourceId r) const {
        return succ_[r].load(std::memory_order_acquire) == kNoResource;
    }

    std::size_t merged_count() const { return merged_.load(std::memory_order_acquire); }

    // The following walk the predecessor list and are meant for a frozen map
    // (between materialisation phases or after the run). They throw
    // std::invalid_argument when rep is not a representative.
    std::vector<ResourceId> clique_members(ResourceId rep) const;
    std::size_t clique_size(ResourceId rep) const;

    std::size_t capacity() const { return succ_.size() - 1; }

private:
    void check_range(ResourceId r) const;

    std::vector<std::atomic<ResourceId>> succ_;
    std::vector<std::atomic<ResourceId>> pred_;
    std::atomic<std::size_t> merged_{0};
};

}  // namespace eqmat
