#ifndef GATSORT_SORTIFY_H
#define GATSORT_SORTIFY_H

#include <string>

#include "gatsort/kernel.h"

namespace gatsort {

struct FamPrefix {
	std::string u_name = "U";
	std::string el_name = "El";
};

// `U : Set; El : (u : U) Set;` under the given names.
CheckedTheory fam_theory(const FamPrefix& prefix);

// Renames the prefix with numeric suffixes until neither name occurs in `theory`.
FamPrefix fresh_prefix(const Theory& theory, const FamPrefix& requested);

struct TranslationResult {
	CheckedTheory translated;
	FamPrefix prefix;
	Substitution projection;  // translated -> Fam
	Substitution coreflector; // translated -> original
};

// The structural part of the translation, with `prefix` assumed fresh.
Expr translate_type(const Expr& type, const FamPrefix& prefix);
Expr translate_term(const Expr& term, const FamPrefix& prefix);

TranslationResult two_sortify_theory(const CheckedTheory& theory, const FamPrefix& prefix,
                                     const ConvBudget& budget = {});

// Tσ : TΔ -> TΓ for σ : Δ -> Γ. Both endpoints are translated with one prefix, made
// fresh for both theories.
Substitution two_sortify_subst(const Substitution& s, const FamPrefix& prefix, const ConvBudget& budget = {});

Substitution coreflector(const CheckedTheory& theory, const FamPrefix& prefix = {}, const ConvBudget& budget = {});

bool is_family_gat(const CheckedTheory& theory, const FamPrefix& prefix = {});

// Theory of families of models: `index : Set` followed by every declaration indexed
// over it.
CheckedTheory pushforward(const CheckedTheory& theory, const std::string& index_name = "A",
                          const ConvBudget& budget = {});

} // namespace gatsort

#endif
