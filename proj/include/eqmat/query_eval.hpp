#pragma once

#include <functional>
#include <vector>

#include "eqmat/fact_store.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/types.hpp"

namespace eqmat {

// Variable index -> bound resource, kNoResource while unbound.
using Bindings = std::vector<ResourceId>;

// Nested index-loop evaluation of an annotated query, in atom order. Calls
// visit once per minimal extension tau of sigma such that every atom matches
// an unmarked fact inside its window relative to `window` (a log position
// captured by the caller). Extensions are distinct because facts are
// duplicate-free. `sigma` must be sized to the query's variable count.
void evaluate(const FactStore& store, const AnnotatedQuery& query, LogPosition window,
              const Bindings& sigma, const std::function<void(const Bindings&)>& visit);

// Instantiates an atom under full bindings; the atom's variables must all be
// bound.
Triple instantiate(const Atom& atom, const Bindings& bindings);

}  // namespace eqmat
