#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "eqmat/types.hpp"

namespace eqmat {

class TermDictionary;

enum class Strictness : std::uint8_t { Strict, Inclusive };

// Triple pattern; kNoResource in a position means "any".
struct Pattern {
    ResourceId s = kNoResource;
    ResourceId p = kNoResource;
    ResourceId o = kNoResource;
};

using LogPosition = std::int64_t;
inline constexpr LogPosition kNoPosition = -1;
inline constexpr LogPosition kUnbounded = std::numeric_limits<LogPosition>::max();

struct Fact {
    Triple t;
    std::atomic<std::uint32_t> flags{0};  // bit 0: marked outdated
    LogPosition position = kNoPosition;   // written once, before publication

    std::atomic<Fact*> uniq_next{nullptr};
    std::atomic<Fact*> s_next{nullptr};
    std::atomic<Fact*> p_next{nullptr};
    std::atomic<Fact*> o_next{nullptr};
    std::atomic<Fact*> sp_next{nullptr};
    std::atomic<Fact*> po_next{nullptr};
    std::atomic<Fact*> so_next{nullptr};

    bool marked() const { return flags.load(std::memory_order_acquire) & 1u; }
};

// Append-only fact log with a uniqueness index, six pattern access paths
// (s, p, o, sp, po, so) and a single shared read cursor. A fact is stored at
// most once whether marked or not; add/mark_outdated/next/has_next/last are
// linearisable and safe under concurrent callers. Append reserves a log slot
// with an atomic counter; the uniqueness and pattern indexes are insert-only
// chained hash tables whose inserts are single CAS pushes.
class FactStore {
public:
    // term_count sizes the per-resource chain heads (ids are dense); the
    // capacity hint sizes the hash bucket arrays. Underestimating the hint
    // only lengthens chains.
    explicit FactStore(std::size_t term_count, std::size_t capacity_hint = 0);
    ~FactStore();

    FactStore(const FactStore&) = delete;
    FactStore& operator=(const FactStore&) = delete;

    // True iff the triple was not present before (marked or unmarked).
    bool add(const Triple& t);

    // True iff the fact was unmarked before; at most one caller wins.
    bool mark_outdated(Fact& f);
    bool mark_outdated(const Triple& t);  // false also when absent

    bool contains(const Triple& t) const { return find(t) != nullptr; }
    Fact* find(const Triple& t) const;

    // Facts appended and published so far.
    std::size_t size() const { return published_size(); }
    std::size_t unmarked_count() const;

    bool has_next() const;
    // Returns the earliest fact past the shared cursor (marked facts
    // included) or nullptr when the cursor has caught up with the log.
    Fact* next();
    // Last fact returned by next(); throws std::logic_error before the first
    // next() call.
    Fact& last() const;
    LogPosition last_position() const;  // kNoPosition before the first next()

    // Facts whose position lies in the window: position < window for Strict,
    // <= window for Inclusive. The window position is captured by the caller
    // once; facts published later have larger positions and never qualify.
    void scan(const Pattern& pattern, LogPosition window, Strictness strictness,
              bool skip_marked, const std::function<bool(const Fact&)>& visit) const;

    // Every stored fact containing c in any position (marked ones included;
    // a fact carrying c twice may be visited twice).
    void for_each_containing(ResourceId c, const std::function<void(Fact&)>& visit);

    // All facts in position order, including marked ones.
    void for_each(const std::function<void(const Fact&)>& visit) const;

    // Drops marked facts and renumbers the survivors contiguously in their
    // original position order, resetting the cursor. Throws std::logic_error
    // while a materialisation is active.
    void compact();

    void set_materialisation_active(bool active) { materialisation_active_ = active; }

    // Unmarked facts as N-Triples, one line per fact in position order.
    void export_ntriples(std::ostream& out, const TermDictionary& dict) const;

    std::vector<Triple> unmarked_triples() const;

private:
    static constexpr std::size_t kSegmentBits = 14;
    static constexpr std::size_t kSegmentSize = std::size_t{1} << kSegmentBits;
    static constexpr std::size_t kMaxSegments = 1 << 13;  // ~134M facts

    using Slot = std::atomic<Fact*>;

    std::size_t published_size() const { return size_.load(std::memory_order_acquire); }
    Slot& slot(std::size_t pos) const;
    Slot* segment(std::size_t seg) const;
    void publish(Fact* f);
    void index_fact(Fact* f);
    static std::uint64_t pair_hash(std::uint64_t a, std::uint64_t b);

    struct PairTable {
        std::vector<Slot> buckets;
        void init(std::size_t n);
        Slot& bucket_for(ResourceId a, ResourceId b);
        const Slot& bucket_for(ResourceId a, ResourceId b) const;
    };

    std::size_t term_count_;
    std::vector<Slot> uniq_buckets_;
    std::vector<Slot> by_s_, by_p_, by_o_;
    PairTable by_sp_, by_po_, by_so_;

    // Two-level slot table: segments are allocated on demand with a CAS so
    // appending never moves existing slots.
    mutable std::unique_ptr<std::atomic<Slot*>[]> segments_;
    std::atomic<std::size_t> size_{0};

    alignas(64) std::atomic<std::size_t> cursor_{0};
    alignas(64) std::atomic<std::size_t> marked_count_{0};
    bool materialisation_active_ = false;
};

}  // namespace eqmat
