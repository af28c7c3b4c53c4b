#ifndef GATSORT_KERNEL_H
#define GATSORT_KERNEL_H

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gatsort/expr.h"

namespace gatsort {

struct ConvBudget {
	std::size_t fuel = 10000;      // merge steps per conversion query
	std::size_t max_unfold = 1000; // beta steps per comparison
};

enum class Verdict { Equal, Unequal, Indeterminate };
const char* to_string(Verdict verdict);

// Unequal dominates, then Indeterminate.
Verdict both(Verdict a, Verdict b);

enum class DeclClass { Sort, Operation, Equation, SortEquation };
const char* to_string(DeclClass cls);

// An equation declaration `e : (x1 : D1) ... (xn : Dn) l = r : A` read as the
// quantified equation lhs = rhs. Variables are named `?0`, `?1`, ...; `var_sorts[k]`
// is the Set-typed term classifying variable k. Equations at a function type are
// eta-expanded into extra variables, so lhs and rhs are first-order.
struct Rewrite {
	std::string source;
	std::vector<std::string> vars;
	std::vector<Expr> var_sorts;
	Expr lhs;
	Expr rhs;
	bool at_set = false;
};

class CheckedTheory {
public:
	CheckedTheory();

	const Theory& theory() const { return data_->theory; }
	std::size_t size() const { return data_->theory.size(); }
	const Decl& decl(std::size_t i) const { return data_->theory.decls[i]; }
	DeclClass classification(std::size_t i) const { return data_->classes[i]; }
	const std::vector<DeclClass>& classes() const { return data_->classes; }
	const std::vector<Rewrite>& rewrites() const { return data_->rewrites; }
	std::optional<std::size_t> index_of(const std::string& name) const;

	std::size_t count(DeclClass cls) const;

	// Appends an already-checked declaration.
	CheckedTheory extended(Decl decl, DeclClass cls) const;

private:
	struct Data {
		Theory theory;
		std::vector<DeclClass> classes;
		std::vector<Rewrite> rewrites;
	};
	std::shared_ptr<const Data> data_;
};

// A theory plus local binders. Binding a local always yields a name that is fresh for
// the whole context, so names in a Context are unambiguous.
class Context {
public:
	explicit Context(CheckedTheory theory);

	const CheckedTheory& theory() const { return theory_; }
	const std::vector<Decl>& locals() const { return locals_; }

	std::string bind(const std::string& hint, Expr type);
	const Expr* lookup(const std::string& name) const;
	bool bound(const std::string& name) const;

private:
	CheckedTheory theory_;
	std::vector<Decl> locals_;
	std::set<std::string> local_names_;
};

// Full beta normal form. Throws IndeterminateError after `max_unfold` beta steps.
Expr normalize(const Expr& e, std::size_t max_unfold);

Expr infer_term(const Context& ctx, const Expr& term, const ConvBudget& budget);
void check_term(const Context& ctx, const Expr& term, const Expr& type, const ConvBudget& budget);
void check_type(const Context& ctx, const Expr& type, const ConvBudget& budget);

// Definitional equality of two types, or of two terms (whose common type is inferred).
Verdict conv(const Context& ctx, const Expr& lhs, const Expr& rhs, const ConvBudget& budget);
Verdict conv_at(const Context& ctx, const Expr& lhs, const Expr& rhs, const Expr& type, const ConvBudget& budget);

DeclClass classify(const Expr& type, std::size_t max_unfold = 1000);

CheckedTheory check_theory(const Theory& theory, const ConvBudget& budget);

// A morphism `source -> target`: one term in context `source` per declaration of
// `target`, in target order.
struct Substitution {
	CheckedTheory source;
	CheckedTheory target;
	std::vector<Expr> assignments;
};

// The type assignment `i` must have: target type `i` with earlier target names
// replaced by earlier assignments.
Expr expected_type(const Substitution& s, std::size_t i);

void check_substitution(const Substitution& s, const ConvBudget& budget);
Substitution identity_substitution(const CheckedTheory& theory);
// outer : Delta -> Gamma, inner : Theta -> Delta, result : Theta -> Gamma.
Substitution compose_substitutions(const Substitution& outer, const Substitution& inner);
// Componentwise conversion; both substitutions must share endpoints.
Verdict conv_substitutions(const Substitution& a, const Substitution& b, const ConvBudget& budget);

std::string print_substitution(const Substitution& s, const std::string& from_ref, const std::string& to_ref);

} // namespace gatsort

#endif
