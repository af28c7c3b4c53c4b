#include "gatsort/sortify.h"

#include <cctype>

#include "gatsort/error.h"

namespace gatsort {

namespace {

Expr el(const FamPrefix& prefix, Expr term) {
	return app(var(prefix.el_name), std::move(term));
}

std::string fam_binder(const FamPrefix& prefix) {
	return fresh_name("u", {prefix.u_name, prefix.el_name});
}

} // namespace

CheckedTheory fam_theory(const FamPrefix& prefix) {
	return CheckedTheory()
		.extended({prefix.u_name, set_universe()}, DeclClass::Sort)
		.extended({prefix.el_name, pi(fam_binder(prefix), var(prefix.u_name), set_universe())}, DeclClass::Sort);
}

FamPrefix fresh_prefix(const Theory& theory, const FamPrefix& requested) {
	std::set<std::string> avoid = all_names(theory);
	FamPrefix prefix;
	prefix.u_name = fresh_name(requested.u_name, avoid);
	avoid.insert(prefix.u_name);
	prefix.el_name = fresh_name(requested.el_name, avoid);
	return prefix;
}

Expr translate_term(const Expr& term, const FamPrefix& prefix) {
	switch (term->kind) {
	case Kind::Var:
		return term;
	case Kind::App:
		return app(translate_term(term->first, prefix), translate_term(term->second, prefix));
	case Kind::Lam:
		return lam(term->name, el(prefix, translate_term(term->first, prefix)), translate_term(term->second, prefix));
	case Kind::Refl:
		return refl(translate_term(term->first, prefix));
	default:
		throw TypeError("expected a term, found the type '" + print_type(term) + "'");
	}
}

Expr translate_type(const Expr& type, const FamPrefix& prefix) {
	switch (type->kind) {
	case Kind::Set:
		return small(var(prefix.u_name));
	case Kind::Small:
		return small(el(prefix, translate_term(type->first, prefix)));
	case Kind::Pi:
		return pi(type->name, el(prefix, translate_term(type->first, prefix)), translate_type(type->second, prefix));
	case Kind::Eq:
		return eq(translate_term(type->first, prefix), translate_term(type->second, prefix),
		          translate_type(type->third, prefix));
	default:
		throw TypeError("expected a type, found the term '" + print_term(type) + "'");
	}
}

namespace {

// Assignment of the coreflector for declaration `index`, given the assignments for
// all earlier declarations.
Expr coreflector_assignment(const Substitution& partial, std::size_t index, const std::set<std::string>& globals,
                            const FamPrefix& prefix, const ConvBudget& budget) {
	const Decl& decl = partial.target.decl(index);
	DeclClass cls = partial.target.classification(index);
	if (cls == DeclClass::Operation || cls == DeclClass::Equation) {
		return var(decl.name);
	}
	Telescope tele = peel_pi(normalize(expected_type(partial, index), budget.max_unfold));
	// Binders become lambda binders around a term that mentions globals, so they must not
	// shadow any of them.
	std::set<std::string> avoid = globals;
	Renaming rename;
	std::vector<std::pair<std::string, Expr>> binders;
	for (const auto& [name, domain] : tele.binders) {
		std::string fresh = fresh_name(name, avoid);
		avoid.insert(fresh);
		binders.emplace_back(fresh, substitute(domain, rename));
		if (fresh != name) {
			rename[name] = var(fresh);
		}
	}
	Expr body;
	if (cls == DeclClass::Sort) {
		std::vector<Expr> args;
		for (const auto& b : binders) {
			args.push_back(var(b.first));
		}
		body = el(prefix, app(var(decl.name), args));
	} else {
		body = refl(substitute(tele.body->first, rename));
	}
	for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
		body = lam(it->first, it->second, body);
	}
	return body;
}

} // namespace

TranslationResult two_sortify_theory(const CheckedTheory& theory, const FamPrefix& requested,
                                     const ConvBudget& budget) {
	TranslationResult result;
	result.prefix = fresh_prefix(theory.theory(), requested);
	const FamPrefix& prefix = result.prefix;

	Theory translated = fam_theory(prefix).theory();
	for (const auto& decl : theory.theory().decls) {
		translated.decls.push_back({decl.name, translate_type(decl.type, prefix)});
	}
	result.translated = check_theory(translated, budget);

	CheckedTheory fam = fam_theory(prefix);
	result.projection = Substitution{result.translated, fam, {var(prefix.u_name), var(prefix.el_name)}};
	check_substitution(result.projection, budget);

	std::set<std::string> globals;
	for (const auto& decl : translated.decls) {
		globals.insert(decl.name);
	}
	result.coreflector = Substitution{result.translated, theory, {}};
	for (std::size_t i = 0; i < theory.size(); ++i) {
		result.coreflector.assignments.push_back(
			coreflector_assignment(result.coreflector, i, globals, prefix, budget));
	}
	check_substitution(result.coreflector, budget);
	return result;
}

Substitution two_sortify_subst(const Substitution& s, const FamPrefix& requested, const ConvBudget& budget) {
	Theory both = s.source.theory();
	for (const auto& decl : s.target.theory().decls) {
		both.decls.push_back(decl);
	}
	FamPrefix prefix = fresh_prefix(both, requested);
	TranslationResult source = two_sortify_theory(s.source, prefix, budget);
	TranslationResult target = two_sortify_theory(s.target, prefix, budget);
	Substitution result{source.translated, target.translated, {var(prefix.u_name), var(prefix.el_name)}};
	for (const auto& a : s.assignments) {
		result.assignments.push_back(translate_term(a, prefix));
	}
	check_substitution(result, budget);
	return result;
}

Substitution coreflector(const CheckedTheory& theory, const FamPrefix& prefix, const ConvBudget& budget) {
	return two_sortify_theory(theory, prefix, budget).coreflector;
}

bool is_family_gat(const CheckedTheory& theory, const FamPrefix& prefix) {
	if (theory.size() < 2) {
		return false;
	}
	const CheckedTheory fam = fam_theory(prefix);
	for (std::size_t i = 0; i < 2; ++i) {
		if (theory.decl(i).name != fam.decl(i).name || !alpha_equal(theory.decl(i).type, fam.decl(i).type)) {
			return false;
		}
	}
	for (std::size_t i = 2; i < theory.size(); ++i) {
		DeclClass cls = theory.classification(i);
		if (cls == DeclClass::Sort || cls == DeclClass::SortEquation) {
			return false;
		}
	}
	return true;
}

CheckedTheory pushforward(const CheckedTheory& theory, const std::string& index_name, const ConvBudget& budget) {
	if (!valid_name(index_name) || is_keyword(index_name)) {
		throw FreshnessError("invalid index name '" + index_name + "'");
	}
	std::set<std::string> globals;
	for (const auto& decl : theory.theory().decls) {
		globals.insert(decl.name);
	}
	if (globals.count(index_name)) {
		throw FreshnessError("index name '" + index_name + "' clashes with a declaration");
	}
	std::string lower = index_name;
	for (char& c : lower) {
		c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	}
	std::set<std::string> avoid = globals;
	avoid.insert(index_name);
	std::string binder = fresh_name(lower, avoid);

	Theory out;
	out.decls.push_back({index_name, set_universe()});
	Renaming indexed;
	for (const auto& decl : theory.theory().decls) {
		out.decls.push_back({decl.name, pi(binder, var(index_name), substitute(decl.type, indexed))});
		indexed[decl.name] = app(var(decl.name), var(binder));
	}
	return check_theory(out, budget);
}

} // namespace gatsort
