#include "eqmat/fact_store.hpp"

#include <bit>
#include <stdexcept>

#include "eqmat/ntriples.hpp"
#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

std::size_t pow2_at_least(std::size_t n) {
    if (n < 2) return 2;
    return std::bit_ceil(n);
}

bool triple_matches(const Triple& t, const Pattern& q) {
    return (q.s == kNoResource || q.s == t.s) && (q.p == kNoResource || q.p == t.p) &&
           (q.o == kNoResource || q.o == t.o);
}

// Pushes f onto the chain rooted at head, linking through `next`. Insert-only,
// so a CAS retry loop suffices.
void chain_push(std::atomic<Fact*>& head, Fact* f, std::atomic<Fact*> Fact::* next) {
    Fact* expected = head.load(std::memory_order_acquire);
    do {
        (f->*next).store(expected, std::memory_order_relaxed);
    } while (!head.compare_exchange_weak(expected, f, std::memory_order_release,
                                         std::memory_order_acquire));
}

}  // namespace

void FactStore::PairTable::init(std::size_t n) {
    buckets = std::vector<Slot>(pow2_at_least(n));
}

std::uint64_t FactStore::pair_hash(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = (a << 32) | b;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 29;
    return h;
}

FactStore::Slot& FactStore::PairTable::bucket_for(ResourceId a, ResourceId b) {
    return buckets[pair_hash(a, b) & (buckets.size() - 1)];
}

const FactStore::Slot& FactStore::PairTable::bucket_for(ResourceId a, ResourceId b) const {
    return buckets[pair_hash(a, b) & (buckets.size() - 1)];
}

FactStore::FactStore(std::size_t term_count, std::size_t capacity_hint)
    : term_count_(term_count) {
    if (capacity_hint == 0) capacity_hint = 1024;
    uniq_buckets_ = std::vector<Slot>(pow2_at_least(capacity_hint * 2));
    by_s_ = std::vector<Slot>(term_count + 1);
    by_p_ = std::vector<Slot>(term_count + 1);
    by_o_ = std::vector<Slot>(term_count + 1);
    by_sp_.init(capacity_hint);
    by_po_.init(capacity_hint);
    by_so_.init(capacity_hint);
    segments_ = std::make_unique<std::atomic<Slot*>[]>(kMaxSegments);
}

FactStore::~FactStore() {
    std::size_t n = size_.load();
    for (std::size_t i = 0; i < n; ++i) delete slot(i).load();
    for (std::size_t s = 0; s < kMaxSegments; ++s) delete[] segments_[s].load();
}

FactStore::Slot* FactStore::segment(std::size_t seg) const {
    Slot* p = segments_[seg].load(std::memory_order_acquire);
    if (p) return p;
    Slot* fresh = new Slot[kSegmentSize]();
    if (segments_[seg].compare_exchange_strong(p, fresh, std::memory_order_acq_rel)) return fresh;
    delete[] fresh;
    return p;
}

FactStore::Slot& FactStore::slot(std::size_t pos) const {
    if (pos >= kMaxSegments * kSegmentSize) throw std::length_error("fact store: log full");
    return segment(pos >> kSegmentBits)[pos & (kSegmentSize - 1)];
}

Fact* FactStore::find(const Triple& t) const {
    const Slot& head = uniq_buckets_[TripleHash{}(t) & (uniq_buckets_.size() - 1)];
    for (Fact* f = head.load(std::memory_order_acquire); f;
         f = f->uniq_next.load(std::memory_order_acquire))
        if (f->t == t) return f;
    return nullptr;
}

bool FactStore::add(const Triple& t) {
    Slot& head = uniq_buckets_[TripleHash{}(t) & (uniq_buckets_.size() - 1)];
    Fact* top = head.load(std::memory_order_acquire);
    for (Fact* f = top; f; f = f->uniq_next.load(std::memory_order_acquire))
        if (f->t == t) return false;

    Fact* mine = new Fact();
    mine->t = t;
    for (;;) {
        mine->uniq_next.store(top, std::memory_order_relaxed);
        if (head.compare_exchange_strong(top, mine, std::memory_order_release,
                                         std::memory_order_acquire)) {
            publish(mine);
            return true;
        }
        // Lost the race: another thread prepended something. Check whether it
        // was a duplicate of ours; only the new prefix needs scanning.
        for (Fact* f = top; f && f != mine->uniq_next.load(std::memory_order_relaxed);
             f = f->uniq_next.load(std::memory_order_acquire)) {
            if (f->t == t) {
                delete mine;
                return false;
            }
        }
    }
}

void FactStore::publish(Fact* f) {
    std::size_t pos = size_.fetch_add(1, std::memory_order_acq_rel);
    f->position = static_cast<LogPosition>(pos);
    slot(pos).store(f, std::memory_order_release);
    index_fact(f);
}

void FactStore::index_fact(Fact* f) {
    chain_push(by_s_[f->t.s], f, &Fact::s_next);
    chain_push(by_p_[f->t.p], f, &Fact::p_next);
    chain_push(by_o_[f->t.o], f, &Fact::o_next);
    chain_push(by_sp_.bucket_for(f->t.s, f->t.p), f, &Fact::sp_next);
    chain_push(by_po_.bucket_for(f->t.p, f->t.o), f, &Fact::po_next);
    chain_push(by_so_.bucket_for(f->t.s, f->t.o), f, &Fact::so_next);
}

bool FactStore::mark_outdated(Fact& f) {
    std::uint32_t prev = f.flags.fetch_or(1u, std::memory_order_acq_rel);
    if (prev & 1u) return false;
    marked_count_.fetch_add(1, std::memory_order_relaxed);
    return true;
}

bool FactStore::mark_outdated(const Triple& t) {
    Fact* f = find(t);
    return f ? mark_outdated(*f) : false;
}

std::size_t FactStore::unmarked_count() const {
    return published_size() - marked_count_.load(std::memory_order_acquire);
}

bool FactStore::has_next() const {
    std::size_t c = cursor_.load(std::memory_order_acquire);
    if (c >= published_size()) return false;
    // A reserved-but-unpublished slot does not count as available yet; the
    // reserving thread is still running and will publish before idling.
    return slot(c).load(std::memory_order_acquire) != nullptr;
}

Fact* FactStore::next() {
    for (;;) {
        std::size_t c = cursor_.load(std::memory_order_acquire);
        if (c >= published_size()) return nullptr;
        Fact* f = slot(c).load(std::memory_order_acquire);
        if (!f) return nullptr;
        if (cursor_.compare_exchange_weak(c, c + 1, std::memory_order_acq_rel)) return f;
    }
}

Fact& FactStore::last() const {
    std::size_t c = cursor_.load(std::memory_order_acquire);
    if (c == 0) throw std::logic_error("fact store: last() before any next()");
    return *slot(c - 1).load(std::memory_order_acquire);
}

LogPosition FactStore::last_position() const {
    std::size_t c = cursor_.load(std::memory_order_acquire);
    return c == 0 ? kNoPosition : static_cast<LogPosition>(c - 1);
}

void FactStore::scan(const Pattern& q, LogPosition window, Strictness strictness,
                     bool skip_marked, const std::function<bool(const Fact&)>& visit) const {
    auto in_window = [&](const Fact& f) {
        return strictness == Strictness::Strict ? f.position < window : f.position <= window;
    };

    int bound = (q.s != kNoResource) + (q.p != kNoResource) + (q.o != kNoResource);

    auto walk = [&](const Fact* f, std::atomic<Fact*> Fact::* next) {
        for (; f; f = (f->*next).load(std::memory_order_acquire)) {
            if (!triple_matches(f->t, q)) continue;
            if (!in_window(*f)) continue;
            if (skip_marked && f->marked()) continue;
            if (!visit(*f)) return;
        }
    };

    if (bound == 3) {
        Fact* f = find(Triple{q.s, q.p, q.o});
        if (f && in_window(*f) && !(skip_marked && f->marked())) visit(*f);
        return;
    }
    if (q.s != kNoResource && q.p != kNoResource)
        return walk(by_sp_.bucket_for(q.s, q.p).load(std::memory_order_acquire), &Fact::sp_next);
    if (q.p != kNoResource && q.o != kNoResource)
        return walk(by_po_.bucket_for(q.p, q.o).load(std::memory_order_acquire), &Fact::po_next);
    if (q.s != kNoResource && q.o != kNoResource)
        return walk(by_so_.bucket_for(q.s, q.o).load(std::memory_order_acquire), &Fact::so_next);
    if (q.s != kNoResource)
        return walk(by_s_[q.s].load(std::memory_order_acquire), &Fact::s_next);
    if (q.p != kNoResource)
        return walk(by_p_[q.p].load(std::memory_order_acquire), &Fact::p_next);
    if (q.o != kNoResource)
        return walk(by_o_[q.o].load(std::memory_order_acquire), &Fact::o_next);

    // Unconstrained pattern: walk the log directly; positions are dense.
    std::size_t limit = published_size();
    for (std::size_t pos = 0; pos < limit; ++pos) {
        Fact* f = slot(pos).load(std::memory_order_acquire);
        if (!f) break;
        if (!in_window(*f)) break;  // log order == position order
        if (skip_marked && f->marked()) continue;
        if (!visit(*f)) return;
    }
}

void FactStore::for_each_containing(ResourceId c, const std::function<void(Fact&)>& visit) {
    for (Fact* f = by_s_[c].load(std::memory_order_acquire); f;
         f = f->s_next.load(std::memory_order_acquire))
        visit(*f);
    for (Fact* f = by_p_[c].load(std::memory_order_acquire); f;
         f = f->p_next.load(std::memory_order_acquire))
        visit(*f);
    for (Fact* f = by_o_[c].load(std::memory_order_acquire); f;
         f = f->o_next.load(std::memory_order_acquire))
        visit(*f);
}

void FactStore::for_each(const std::function<void(const Fact&)>& visit) const {
    std::size_t limit = published_size();
    for (std::size_t pos = 0; pos < limit; ++pos) {
        Fact* f = slot(pos).load(std::memory_order_acquire);
        if (!f) break;
        visit(*f);
    }
}

std::vector<Triple> FactStore::unmarked_triples() const {
    std::vector<Triple> out;
    for_each([&](const Fact& f) {
        if (!f.marked()) out.push_back(f.t);
    });
    return out;
}

void FactStore::compact() {
    if (materialisation_active_)
        throw std::logic_error("fact store: compact during active materialisation");
    std::vector<Triple> survivors = unmarked_triples();

    std::size_t n = size_.load();
    for (std::size_t i = 0; i < n; ++i) {
        delete slot(i).load();
        slot(i).store(nullptr);
    }
    for (auto& b : uniq_buckets_) b.store(nullptr);
    for (auto& b : by_s_) b.store(nullptr);
    for (auto& b : by_p_) b.store(nullptr);
    for (auto& b : by_o_) b.store(nullptr);
    for (auto& b : by_sp_.buckets) b.store(nullptr);
    for (auto& b : by_po_.buckets) b.store(nullptr);
    for (auto& b : by_so_.buckets) b.store(nullptr);
    size_.store(0);
    cursor_.store(0);
    marked_count_.store(0);

    for (const Triple& t : survivors) add(t);
}

void FactStore::export_ntriples(std::ostream& out, const TermDictionary& dict) const {
    for_each([&](const Fact& f) {
        if (f.marked()) return;
        write_ntriples_line(out, dict, f.t);
    });
}

}  // namespace eqmat
