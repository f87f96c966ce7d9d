#include "eqmat/query_eval.hpp"

#include <stdexcept>

namespace eqmat {

namespace {

struct Evaluator {
    const FactStore& store;
    const AnnotatedQuery& query;
    LogPosition window;
    const std::function<void(const Bindings&)>& visit;
    Bindings bindings;

    void run(std::size_t depth) {
        if (depth == query.size()) {
            visit(bindings);
            return;
        }
        const AnnotatedAtom& annotated = query[depth];
        const Atom& atom = annotated.atom;

        auto field = [&](const AtomTerm& t) { return t.is_var ? bindings[t.value] : t.value; };
        Pattern pattern{field(atom.s), field(atom.p), field(atom.o)};

        store.scan(pattern, window, annotated.strictness, true, [&](const Fact& f) {
            ResourceId fields[3] = {f.t.s, f.t.p, f.t.o};
            ResourceId bound[3];
            std::size_t bound_count = 0;
            bool ok = true;
            for (std::size_t pos = 0; pos < 3 && ok; ++pos) {
                const AtomTerm& t = atom.at(pos);
                if (!t.is_var) continue;
                ResourceId& slot = bindings[t.value];
                if (slot == kNoResource) {
                    slot = fields[pos];
                    bound[bound_count++] = t.value;
                } else if (slot != fields[pos]) {
                    ok = false;
                }
            }
            if (ok) run(depth + 1);
            for (std::size_t i = 0; i < bound_count; ++i) bindings[bound[i]] = kNoResource;
            return true;
        });
    }
};

}  // namespace

void evaluate(const FactStore& store, const AnnotatedQuery& query, LogPosition window,
              const Bindings& sigma, const std::function<void(const Bindings&)>& visit) {
    Evaluator ev{store, query, window, visit, sigma};
    ev.run(0);
}

Triple instantiate(const Atom& atom, const Bindings& bindings) {
    auto value = [&](const AtomTerm& term) -> ResourceId {
        if (!term.is_var) return term.value;
        ResourceId r = bindings[term.value];
        if (r == kNoResource) throw std::logic_error("instantiate: unbound variable");
        return r;
    };
    return Triple{value(atom.s), value(atom.p), value(atom.o)};
}

}  // namespace eqmat
