#ifndef GATSORT_INITIAL_H
#define GATSORT_INITIAL_H

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gatsort/kernel.h"
#include "gatsort/models.h"

namespace gatsort {

// A class of closed terms identified by conversion.
struct TermClass {
	Expr representative;       // least by (size, printed form)
	std::string label;         // element label in the model
	std::vector<Expr> members; // every enumerated member
	std::size_t members_seen() const { return members.size(); }
};

struct InitialModelResult {
	FiniteModel model; // tables are partial unless saturated
	std::size_t depth_used = 0;
	bool saturated = false;
	std::vector<std::pair<Expr, Expr>> indeterminate_pairs;
	std::vector<TermClass> classes; // element classes, sorted by label
};

constexpr std::size_t kDefaultTermCap = 100000;

// Label of the class of a closed term: its printed form with brackets for parentheses.
std::string term_label(const Expr& term);

// Closed terms of size at most `depth`, quotiented by conversion. Saturated when one
// more round of applying every operation to every class adds no class and merges
// none. Throws BudgetError when more than `term_cap` element and sort terms are
// enumerated.
InitialModelResult initial_model_bounded(const CheckedTheory& omega, std::size_t depth, const ConvBudget& budget = {},
                                         std::size_t term_cap = kDefaultTermCap);

// The morphism sending each class to the value of its members. Throws NotSaturated or
// WellDefinednessError.
ModelMorphism initial_morphism(const InitialModelResult& r, const FiniteModel& target);

nlohmann::json initial_report(const InitialModelResult& r);

} // namespace gatsort

#endif
