#include "eqmat/materialisation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "eqmat/query_eval.hpp"
#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

bool contains_rule(const std::vector<Rule>& rules, const Rule& r) {
    return std::find(rules.begin(), rules.end(), r) != rules.end();
}

// Worker loop: prefer re-evaluating updated rules, then rewriting facts that
// contain a merged resource, then applying rules to the next unprocessed fact.
// A worker with nothing to do enters the gate; when all of them are in it, the
// last one runs the serial phase, which swaps rewritten rules in and queues
// the changed ones for re-evaluation, or signals termination when the program
// is stable. The serial phase is exclusive: every other worker entered the
// gate before it and leaves through the mutex afterwards, so rule storage can
// be replaced without atomics.
class Engine {
  public:
    Engine(const std::vector<Triple>& explicit_facts, const Program& program,
           const TermDictionary& dict, const EngineConfig& config)
        : dict_(dict),
          config_(config),
          rewriting_(config.mode == Mode::Rew),
          threads_(std::max(1u, config.threads)),
          store_(std::make_unique<FactStore>(dict.size(), config.capacity_hint)),
          rho_(std::make_unique<RepresentativeMap>(dict.size())),
          merge_slots_(dict.size() + 2),
          base_program_(rewriting_ ? program : with_equality_axioms(program)) {
        active_ = normalize_program(*rho_, base_program_);
        rule_index_.rebuild(active_);
        for (const Triple& t : explicit_facts) store_->add(t);
    }

    MaterialisationResult run() {
        store_->set_materialisation_active(true);
        std::vector<MaterialisationStats> stats(threads_);
        std::vector<std::thread> workers;
        workers.reserve(threads_);
        for (unsigned i = 0; i < threads_; ++i)
            workers.emplace_back([this, &stats, i] { work(stats[i]); });
        for (std::thread& w : workers) w.join();
        store_->set_materialisation_active(false);

        MaterialisationResult result;
        for (const MaterialisationStats& s : stats) {
            result.stats.rule_applications += s.rule_applications;
            result.stats.derivations += s.derivations;
            result.stats.derivations_rules += s.derivations_rules;
            result.stats.derivations_rewrite += s.derivations_rewrite;
            result.stats.derivations_reflexivity += s.derivations_reflexivity;
            result.stats.successful_adds += s.successful_adds;
            result.stats.merged_resources += s.merged_resources;
            result.stats.marked_facts += s.marked_facts;
            result.stats.serial_phases += s.serial_phases;
        }
        result.outcome = contradiction_.load(std::memory_order_acquire) ? Outcome::Contradiction
                                                                        : Outcome::Consistent;
        result.firings = std::move(firings_);
        result.triples_total = store_->size();
        result.triples_unmarked = store_->unmarked_count();
        store_->compact();
        result.store = std::move(store_);
        result.rho = std::move(rho_);
        return result;
    }

  private:
    void work(MaterialisationStats& stats) {
        while (run_.load(std::memory_order_acquire)) {
            if (evaluate_updated_rules(stats) || rewrite_facts(stats) || apply_rules(stats))
                continue;
            waiting_.fetch_add(1, std::memory_order_acq_rel);
            {
                std::unique_lock<std::mutex> lock(gate_);
                while (update_queue_empty() && merge_queue_empty() && !store_->has_next() &&
                       run_.load(std::memory_order_acquire)) {
                    if (waiting_.load(std::memory_order_acquire) == threads_) {
                        serial_phase(stats);
                    } else {
                        sleepers_.fetch_add(1, std::memory_order_release);
                        gate_cv_.wait_for(lock, std::chrono::microseconds(500));
                        sleepers_.fetch_sub(1, std::memory_order_release);
                    }
                }
                // Leaving inside the mutex keeps the waiting count exact: the
                // serial phase must never start while a worker is on its way
                // back to the queues.
                waiting_.fetch_sub(1, std::memory_order_acq_rel);
            }
        }
    }

    // Runs with every other worker parked in the gate. Queues the rules whose
    // rewritten form is new, remembers the re-evaluation limit, swaps in the
    // rewritten program, and signals termination when nothing changed.
    void serial_phase(MaterialisationStats& stats) {
        ++stats.serial_phases;
        std::vector<Rule> fresh;
        for (const Rule& r : active_.rules) {
            Rule n = normalize_rule(*rho_, r);
            if (!contains_rule(active_.rules, n) && !contains_rule(fresh, n))
                fresh.push_back(std::move(n));
        }
        update_limit_ = store_->last_position();
        active_ = normalize_program(*rho_, base_program_);
        rule_index_.rebuild(active_);
        updated_rules_ = std::move(fresh);
        update_next_.store(0, std::memory_order_release);
        run_.store(!updated_rules_.empty(), std::memory_order_release);
        gate_cv_.notify_all();
    }

    bool evaluate_updated_rules(MaterialisationStats& stats) {
        if (update_queue_empty()) return false;
        std::size_t i = update_next_.fetch_add(1, std::memory_order_acq_rel);
        if (i >= updated_rules_.size()) return false;
        const Rule& rule = updated_rules_[i];
        ++stats.rule_applications;
        Bindings sigma(rule.var_count, kNoResource);
        evaluate(*store_, inclusive_body(rule), update_limit_, sigma, [&](const Bindings& tau) {
            if (config_.collect_firings) record_firing(rule, tau);
            attempt_add(instantiate(rule.head, tau), stats, stats.derivations_rules);
        });
        return true;
    }

    bool rewrite_facts(MaterialisationStats& stats) {
        ResourceId c = dequeue_merge();
        if (c == kNoResource) return false;
        store_->for_each_containing(c, [&](Fact& f) {
            if (f.marked()) return;
            if (store_->mark_outdated(f)) {
                ++stats.marked_facts;
                attempt_add(rho_->normalize(f.t), stats, stats.derivations_rewrite);
            }
        });
        return true;
    }

    bool apply_rules(MaterialisationStats& stats) {
        Fact* f = store_->next();
        if (!f) return false;
        if (f->marked()) return true;
        const Triple t = f->t;

        if (!rewriting_) {
            if (t.p == kDifferentFrom && t.s == t.o) {
                contradiction_.store(true, std::memory_order_release);
                notify_workers();
            }
            apply_rules_to(t, f->position, stats);
            return true;
        }

        Triple g = rho_->normalize(t);
        if (g != t) {
            // Derived after its resource was merged; replace it with the
            // representative form.
            if (store_->mark_outdated(*f)) {
                ++stats.marked_facts;
                attempt_add(g, stats, stats.derivations_rewrite);
            }
            return true;
        }
        if (t.p == kSameAs) {
            if (t.s != t.o) {
                ResourceId c = std::min(t.s, t.o);
                ResourceId d = std::max(t.s, t.o);
                if (rho_->merge_into(d, c)) {
                    ++stats.merged_resources;
                    enqueue_merge(d);
                    notify_workers();
                }
            }
            // Close the clique and the equality resource under reflexivity;
            // rule application is skipped for equality facts, so these adds
            // keep the expansion aligned with the reference fixpoint.
            ResourceId rep = rho_->resolve(t.s);
            attempt_add(Triple{rep, kSameAs, rep}, stats, stats.derivations_reflexivity);
            attempt_add(Triple{kSameAs, kSameAs, kSameAs}, stats, stats.derivations_reflexivity);
            return true;
        }
        if (t.p == kDifferentFrom && t.s == t.o) {
            contradiction_.store(true, std::memory_order_release);
            notify_workers();
            return true;
        }
        apply_rules_to(t, f->position, stats);
        ResourceId seen[3];
        std::size_t seen_count = 0;
        for (ResourceId c : {t.s, t.p, t.o}) {
            bool repeated = false;
            for (std::size_t i = 0; i < seen_count; ++i) repeated = repeated || seen[i] == c;
            if (repeated) continue;
            seen[seen_count++] = c;
            attempt_add(Triple{c, kSameAs, c}, stats, stats.derivations_reflexivity);
        }
        return true;
    }

    void apply_rules_to(const Triple& t, LogPosition pos, MaterialisationStats& stats) {
        rule_index_.rules_for(t, [&](const Rule& rule, std::size_t body_pos,
                                     const Bindings& sigma) {
            ++stats.rule_applications;
            evaluate(*store_, pivot_query(rule, body_pos), pos, sigma, [&](const Bindings& tau) {
                if (config_.collect_firings) record_firing(rule, tau);
                attempt_add(instantiate(rule.head, tau), stats, stats.derivations_rules);
            });
        });
    }

    void attempt_add(const Triple& t, MaterialisationStats& stats, std::uint64_t& category) {
        ++stats.derivations;
        ++category;
        if (store_->add(t)) {
            ++stats.successful_adds;
            notify_workers();
        }
    }

    void enqueue_merge(ResourceId d) {
        std::size_t i = merge_tail_.fetch_add(1, std::memory_order_acq_rel);
        merge_slots_[i].store(d, std::memory_order_release);
    }

    // Never advances past a reserved slot whose value is not yet visible; the
    // enqueuer is mid-flight and the caller simply retries later.
    ResourceId dequeue_merge() {
        for (;;) {
            std::size_t h = merge_head_.load(std::memory_order_acquire);
            if (h >= merge_tail_.load(std::memory_order_acquire)) return kNoResource;
            ResourceId d = merge_slots_[h].load(std::memory_order_acquire);
            if (d == kNoResource) return kNoResource;
            if (merge_head_.compare_exchange_weak(h, h + 1, std::memory_order_acq_rel)) return d;
        }
    }

    bool merge_queue_empty() const {
        return merge_head_.load(std::memory_order_acquire) >=
               merge_tail_.load(std::memory_order_acquire);
    }

    bool update_queue_empty() const {
        return update_next_.load(std::memory_order_acquire) >= updated_rules_.size();
    }

    void notify_workers() {
        if (sleepers_.load(std::memory_order_acquire) > 0) gate_cv_.notify_all();
    }

    void record_firing(const Rule& rule, const Bindings& tau) {
        std::string key = rule_to_string(rule, dict_);
        key += " @";
        for (ResourceId r : tau) {
            key += ' ';
            key += std::to_string(r);
        }
        std::lock_guard<std::mutex> lock(firings_mutex_);
        ++firings_[key];
    }

    const TermDictionary& dict_;
    EngineConfig config_;
    bool rewriting_;
    unsigned threads_;

    std::unique_ptr<FactStore> store_;
    std::unique_ptr<RepresentativeMap> rho_;
    std::vector<std::atomic<ResourceId>> merge_slots_;
    std::atomic<std::size_t> merge_head_{0};
    std::atomic<std::size_t> merge_tail_{0};

    Program base_program_;
    Program active_;
    RuleIndex rule_index_;
    std::vector<Rule> updated_rules_;
    std::atomic<std::size_t> update_next_{0};
    LogPosition update_limit_ = kNoPosition;

    std::atomic<bool> run_{true};
    std::atomic<bool> contradiction_{false};
    std::atomic<unsigned> waiting_{0};
    std::atomic<unsigned> sleepers_{0};
    std::mutex gate_;
    std::condition_variable gate_cv_;

    std::mutex firings_mutex_;
    std::map<std::string, std::uint64_t> firings_;
};

}  // namespace

MaterialisationResult materialise(const std::vector<Triple>& explicit_facts, const Program& program,
                                  const TermDictionary& dict, const EngineConfig& config) {
    Engine engine(explicit_facts, program, dict, config);
    return engine.run();
}

}  // namespace eqmat
