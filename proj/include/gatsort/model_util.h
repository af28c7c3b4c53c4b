#ifndef GATSORT_MODEL_UTIL_H
#define GATSORT_MODEL_UTIL_H

// Helpers shared by the semantic modules.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gatsort/models.h"

namespace gatsort {

// Nested tables over a telescope with `leaf` at every instance.
Value tabulate(const FiniteModel& m, const Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
               const std::function<Value(const Env&, const std::vector<std::string>&)>& leaf);

// Follows table keys; nullptr when a key is missing.
const Value* navigate(const Value& v, const std::vector<std::string>& labels);

// Normalized Pi telescope of a declaration's type.
Telescope decl_telescope(const CheckedTheory& theory, std::size_t i);

std::string describe_instance(const std::vector<std::pair<std::string, Expr>>& binders,
                              const std::vector<std::string>& labels);

std::optional<std::string> equation_failure(const FiniteModel& m, std::size_t i);

// A sort declaration at a tuple of index labels.
struct SortRef {
	std::size_t decl;
	std::vector<std::string> indices;
};

// Resolves a Set-typed term, which is headed by a sort declaration once normalized.
SortRef resolve_sort(const FiniteModel& m, const Env& env, const Expr& sort_term);

// Every instance of the sort equation `i`, with equations at function types
// eta-expanded, and both sides resolved.
void for_each_sort_equation_instance(const FiniteModel& m, std::size_t i,
                                     const std::function<void(const Env&, const SortRef&, const SortRef&)>& visit);

} // namespace gatsort

#endif
