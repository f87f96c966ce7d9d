#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace eqmat {

// Dense resource identifier assigned by the term dictionary. Id 0 is reserved
// as the "no resource" sentinel so that it can double as the empty successor /
// predecessor marker in the representative map and as the wildcard in
// patterns.
using ResourceId = std::uint32_t;

inline constexpr ResourceId kNoResource = 0;
inline constexpr ResourceId kSameAs = 1;         // owl:sameAs, interned eagerly
inline constexpr ResourceId kDifferentFrom = 2;  // owl:differentFrom, interned eagerly

struct Triple {
    ResourceId s = kNoResource;
    ResourceId p = kNoResource;
    ResourceId o = kNoResource;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        };
        mix(t.s);
        mix(t.p);
        mix(t.o);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace eqmat
