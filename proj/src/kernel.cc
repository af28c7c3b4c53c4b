#include "gatsort/kernel.h"

#include <limits>

#include "gatsort/egraph.h"
#include "gatsort/error.h"

namespace gatsort {

const char* to_string(Verdict verdict) {
	switch (verdict) {
	case Verdict::Equal:
		return "EQUAL";
	case Verdict::Unequal:
		return "UNEQUAL";
	case Verdict::Indeterminate:
		return "INDETERMINATE";
	}
	return "?";
}

Verdict both(Verdict a, Verdict b) {
	if (a == Verdict::Unequal || b == Verdict::Unequal) {
		return Verdict::Unequal;
	}
	if (a == Verdict::Indeterminate || b == Verdict::Indeterminate) {
		return Verdict::Indeterminate;
	}
	return Verdict::Equal;
}

const char* to_string(DeclClass cls) {
	switch (cls) {
	case DeclClass::Sort:
		return "sort";
	case DeclClass::Operation:
		return "operation";
	case DeclClass::Equation:
		return "equation";
	case DeclClass::SortEquation:
		return "sort equation";
	}
	return "?";
}

namespace {

constexpr std::size_t kTrustedUnfold = std::numeric_limits<std::size_t>::max();

class Unfolder {
public:
	explicit Unfolder(std::size_t budget) : remaining_(budget) {}

	Expr nf(const Expr& e) {
		switch (e->kind) {
		case Kind::Set:
		case Kind::Var:
			return e;
		case Kind::Small: {
			Expr t = nf(e->first);
			return t == e->first ? e : small(t);
		}
		case Kind::Refl: {
			Expr t = nf(e->first);
			return t == e->first ? e : refl(t);
		}
		case Kind::Eq: {
			Expr l = nf(e->first);
			Expr r = nf(e->second);
			Expr a = nf(e->third);
			return l == e->first && r == e->second && a == e->third ? e : eq(l, r, a);
		}
		case Kind::Pi:
		case Kind::Lam: {
			Expr d = nf(e->first);
			Expr b = nf(e->second);
			if (d == e->first && b == e->second) {
				return e;
			}
			return e->kind == Kind::Pi ? pi(e->name, d, b) : lam(e->name, d, b);
		}
		case Kind::App: {
			Expr f = nf(e->first);
			Expr a = nf(e->second);
			if (f->kind == Kind::Lam) {
				if (remaining_ == 0) {
					throw IndeterminateError("beta-unfolding budget exhausted");
				}
				--remaining_;
				return nf(substitute(f->second, f->name, a));
			}
			return f == e->first && a == e->second ? e : app(f, a);
		}
		}
		return e;
	}

private:
	std::size_t remaining_;
};

// Equations between proofs carry no information and yield nothing.
std::optional<Rewrite> compile_rewrite(const std::string& name, const Expr& type) {
	Rewrite rw;
	rw.source = name;
	Expr t = normalize(type, kTrustedUnfold);
	auto next_var = [&](const Expr& sort) {
		std::string v = "?" + std::to_string(rw.vars.size());
		rw.vars.push_back(v);
		rw.var_sorts.push_back(sort);
		return v;
	};
	while (t->kind == Kind::Pi) {
		std::string v = next_var(t->first);
		t = substitute(t->second, t->name, var(v));
	}
	Expr lhs = t->first;
	Expr rhs = t->second;
	Expr at = t->third;
	while (at->kind == Kind::Pi) {
		std::string v = next_var(at->first);
		lhs = normalize(app(lhs, var(v)), kTrustedUnfold);
		rhs = normalize(app(rhs, var(v)), kTrustedUnfold);
		at = normalize(substitute(at->second, at->name, var(v)), kTrustedUnfold);
	}
	if (at->kind == Kind::Eq) {
		return std::nullopt;
	}
	rw.lhs = lhs;
	rw.rhs = rhs;
	rw.at_set = at->kind == Kind::Set;
	return rw;
}

} // namespace

Expr normalize(const Expr& e, std::size_t max_unfold) {
	Unfolder unfolder(max_unfold);
	return unfolder.nf(e);
}

DeclClass classify(const Expr& type, std::size_t max_unfold) {
	Telescope tele = peel_pi(normalize(type, max_unfold));
	switch (tele.body->kind) {
	case Kind::Set:
		return DeclClass::Sort;
	case Kind::Eq:
		return peel_pi(tele.body->third).body->kind == Kind::Set ? DeclClass::SortEquation : DeclClass::Equation;
	default:
		return DeclClass::Operation;
	}
}

CheckedTheory::CheckedTheory() : data_(std::make_shared<const Data>()) {}

std::optional<std::size_t> CheckedTheory::index_of(const std::string& name) const {
	const auto& decls = data_->theory.decls;
	for (std::size_t i = 0; i < decls.size(); ++i) {
		if (decls[i].name == name) {
			return i;
		}
	}
	return std::nullopt;
}

std::size_t CheckedTheory::count(DeclClass cls) const {
	std::size_t n = 0;
	for (DeclClass c : data_->classes) {
		n += c == cls;
	}
	return n;
}

CheckedTheory CheckedTheory::extended(Decl decl, DeclClass cls) const {
	auto data = std::make_shared<Data>(*data_);
	if (cls == DeclClass::Equation || cls == DeclClass::SortEquation) {
		if (auto rw = compile_rewrite(decl.name, decl.type)) {
			data->rewrites.push_back(std::move(*rw));
		}
	}
	data->theory.decls.push_back(std::move(decl));
	data->classes.push_back(cls);
	CheckedTheory result;
	result.data_ = std::move(data);
	return result;
}

Context::Context(CheckedTheory theory) : theory_(std::move(theory)) {}

std::string Context::bind(const std::string& hint, Expr type) {
	std::string name = hint;
	if (bound(name)) {
		std::set<std::string> avoid = local_names_;
		for (const auto& decl : theory_.theory().decls) {
			avoid.insert(decl.name);
		}
		name = fresh_name(hint, avoid);
	}
	locals_.push_back({name, std::move(type)});
	local_names_.insert(name);
	return name;
}

const Expr* Context::lookup(const std::string& name) const {
	for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
		if (it->name == name) {
			return &it->type;
		}
	}
	if (auto i = theory_.index_of(name)) {
		return &theory_.decl(*i).type;
	}
	return nullptr;
}

bool Context::bound(const std::string& name) const {
	return local_names_.count(name) || theory_.index_of(name).has_value();
}

namespace {

Verdict conv_first_order(const Context& ctx, const Expr& a, const Expr& b, const ConvBudget& budget) {
	if (alpha_equal(a, b)) {
		return Verdict::Equal;
	}
	EGraph graph(ctx);
	auto ca = graph.add(a);
	auto cb = graph.add(b);
	if (!ca || !cb) {
		return Verdict::Indeterminate;
	}
	graph.rebuild();
	auto done = [&] { return graph.equivalent(*ca, *cb); };
	if (done()) {
		return Verdict::Equal;
	}
	EGraph::Status status = graph.saturate(budget.fuel, done);
	if (done()) {
		return Verdict::Equal;
	}
	if (status == EGraph::Status::Saturated && !graph.has_unanchored_rules()) {
		return Verdict::Unequal;
	}
	return Verdict::Indeterminate;
}

// Opens the binder of a normalized Pi or Lam under a context-fresh name.
std::pair<std::string, Expr> open(Context& ctx, const Expr& binder_node, std::size_t max_unfold) {
	std::string name = ctx.bind(binder_node->name, small(binder_node->first));
	Expr body = binder_node->second;
	if (name != binder_node->name) {
		body = substitute(body, binder_node->name, var(name));
	}
	return {name, normalize(body, max_unfold)};
}

Verdict conv_terms_nf(const Context& ctx, const Expr& a, const Expr& b, const Expr& type, const ConvBudget& budget);

Verdict conv_types_nf(const Context& ctx, const Expr& lhs, const Expr& rhs, const ConvBudget& budget) {
	if (alpha_equal(lhs, rhs)) {
		return Verdict::Equal;
	}
	if (lhs->kind != rhs->kind) {
		return Verdict::Unequal;
	}
	switch (lhs->kind) {
	case Kind::Set:
		return Verdict::Equal;
	case Kind::Small:
		return conv_first_order(ctx, lhs->first, rhs->first, budget);
	case Kind::Pi: {
		Verdict domains = conv_first_order(ctx, lhs->first, rhs->first, budget);
		if (domains == Verdict::Unequal) {
			return domains;
		}
		Context inner = ctx;
		auto [name, left] = open(inner, lhs, budget.max_unfold);
		Expr right = normalize(substitute(rhs->second, rhs->name, var(name)), budget.max_unfold);
		return both(domains, conv_types_nf(inner, left, right, budget));
	}
	case Kind::Eq: {
		Verdict carriers = conv_types_nf(ctx, lhs->third, rhs->third, budget);
		if (carriers == Verdict::Unequal) {
			return carriers;
		}
		Verdict left = conv_terms_nf(ctx, lhs->first, rhs->first, lhs->third, budget);
		if (left == Verdict::Unequal) {
			return left;
		}
		return both(both(carriers, left), conv_terms_nf(ctx, lhs->second, rhs->second, lhs->third, budget));
	}
	default:
		return Verdict::Unequal;
	}
}

Verdict conv_terms_nf(const Context& ctx, const Expr& a, const Expr& b, const Expr& type, const ConvBudget& budget) {
	switch (type->kind) {
	case Kind::Eq:
		return Verdict::Equal;
	case Kind::Pi: {
		Context inner = ctx;
		auto [name, codomain] = open(inner, type, budget.max_unfold);
		Expr x = var(name);
		return conv_terms_nf(inner, normalize(app(a, x), budget.max_unfold), normalize(app(b, x), budget.max_unfold),
		                     codomain, budget);
	}
	default:
		return conv_first_order(ctx, a, b, budget);
	}
}

void expect_sort_term(const Context& ctx, const Expr& term, const ConvBudget& budget) {
	Expr type = normalize(infer_term(ctx, term, budget), budget.max_unfold);
	if (type->kind != Kind::Set) {
		throw TypeError("'" + print_term(term) + "' is not a sort: it has type '" + print_type(type) + "'");
	}
}

} // namespace

Expr infer_term(const Context& ctx, const Expr& term, const ConvBudget& budget) {
	switch (term->kind) {
	case Kind::Var: {
		const Expr* type = ctx.lookup(term->name);
		if (!type) {
			throw TypeError("unbound variable " + term->name);
		}
		return *type;
	}
	case Kind::App: {
		Expr fn_type = normalize(infer_term(ctx, term->first, budget), budget.max_unfold);
		if (fn_type->kind != Kind::Pi) {
			throw TypeError("'" + print_term(term->first) + "' is applied but has type '" + print_type(fn_type) + "'");
		}
		check_term(ctx, term->second, small(fn_type->first), budget);
		return substitute(fn_type->second, fn_type->name, term->second);
	}
	case Kind::Lam: {
		expect_sort_term(ctx, term->first, budget);
		Context inner = ctx;
		std::string name = inner.bind(term->name, small(term->first));
		Expr body = name == term->name ? term->second : substitute(term->second, term->name, var(name));
		return pi(name, term->first, infer_term(inner, body, budget));
	}
	case Kind::Refl:
		return eq(term->first, term->first, infer_term(ctx, term->first, budget));
	default:
		throw TypeError("expected a term, found the type '" + print_type(term) + "'");
	}
}

void check_term(const Context& ctx, const Expr& term, const Expr& type, const ConvBudget& budget) {
	Expr actual = infer_term(ctx, term, budget);
	switch (conv(ctx, actual, type, budget)) {
	case Verdict::Equal:
		return;
	case Verdict::Unequal:
		throw TypeError("'" + print_term(term) + "' has type '" + print_type(actual) + "' but '" + print_type(type) +
		                "' was expected");
	case Verdict::Indeterminate:
		throw IndeterminateError("could not decide whether '" + print_type(actual) + "' and '" + print_type(type) +
		                         "' are equal (budget exhausted)");
	}
}

void check_type(const Context& ctx, const Expr& type, const ConvBudget& budget) {
	switch (type->kind) {
	case Kind::Set:
		return;
	case Kind::Small:
		expect_sort_term(ctx, type->first, budget);
		return;
	case Kind::Pi: {
		expect_sort_term(ctx, type->first, budget);
		Context inner = ctx;
		std::string name = inner.bind(type->name, small(type->first));
		Expr codomain = name == type->name ? type->second : substitute(type->second, type->name, var(name));
		check_type(inner, codomain, budget);
		return;
	}
	case Kind::Eq:
		check_type(ctx, type->third, budget);
		check_term(ctx, type->first, type->third, budget);
		check_term(ctx, type->second, type->third, budget);
		return;
	default:
		throw TypeError("expected a type, found the term '" + print_term(type) + "'");
	}
}

Verdict conv(const Context& ctx, const Expr& lhs, const Expr& rhs, const ConvBudget& budget) {
	try {
		if (is_type(lhs) && is_type(rhs)) {
			return conv_types_nf(ctx, normalize(lhs, budget.max_unfold), normalize(rhs, budget.max_unfold), budget);
		}
		if (is_term(lhs) && is_term(rhs)) {
			return conv_at(ctx, lhs, rhs, infer_term(ctx, lhs, budget), budget);
		}
	} catch (const IndeterminateError&) {
		return Verdict::Indeterminate;
	}
	return Verdict::Unequal;
}

Verdict conv_at(const Context& ctx, const Expr& lhs, const Expr& rhs, const Expr& type, const ConvBudget& budget) {
	try {
		return conv_terms_nf(ctx, normalize(lhs, budget.max_unfold), normalize(rhs, budget.max_unfold),
		                     normalize(type, budget.max_unfold), budget);
	} catch (const IndeterminateError&) {
		return Verdict::Indeterminate;
	}
}

CheckedTheory check_theory(const Theory& theory, const ConvBudget& budget) {
	CheckedTheory checked;
	for (const auto& decl : theory.decls) {
		if (!valid_name(decl.name)) {
			throw TypeError("invalid declaration name '" + decl.name + "'");
		}
		if (checked.index_of(decl.name)) {
			throw TypeError("duplicate declaration '" + decl.name + "'");
		}
		try {
			check_type(Context(checked), decl.type, budget);
		} catch (const TypeError& e) {
			throw TypeError("declaration '" + decl.name + "': " + e.what());
		} catch (const IndeterminateError& e) {
			throw IndeterminateError("declaration '" + decl.name + "': " + e.what());
		}
		checked = checked.extended(decl, classify(decl.type, budget.max_unfold));
	}
	return checked;
}

Expr expected_type(const Substitution& s, std::size_t i) {
	Renaming renaming;
	for (std::size_t j = 0; j < i; ++j) {
		renaming[s.target.decl(j).name] = s.assignments[j];
	}
	return substitute(s.target.decl(i).type, renaming);
}

void check_substitution(const Substitution& s, const ConvBudget& budget) {
	if (s.assignments.size() != s.target.size()) {
		throw TypeError("substitution has " + std::to_string(s.assignments.size()) + " assignments but the target has " +
		                std::to_string(s.target.size()) + " declarations");
	}
	Context ctx(s.source);
	for (std::size_t i = 0; i < s.assignments.size(); ++i) {
		try {
			check_term(ctx, s.assignments[i], expected_type(s, i), budget);
		} catch (const TypeError& e) {
			throw TypeError("assignment for '" + s.target.decl(i).name + "': " + e.what());
		} catch (const IndeterminateError& e) {
			throw IndeterminateError("assignment for '" + s.target.decl(i).name + "': " + e.what());
		}
	}
}

Substitution identity_substitution(const CheckedTheory& theory) {
	Substitution s{theory, theory, {}};
	for (const auto& decl : theory.theory().decls) {
		s.assignments.push_back(var(decl.name));
	}
	return s;
}

Substitution compose_substitutions(const Substitution& outer, const Substitution& inner) {
	if (!alpha_equal(inner.target.theory(), outer.source.theory())) {
		throw MismatchError("cannot compose: the inner substitution's target is not the outer one's source");
	}
	Renaming renaming;
	for (std::size_t j = 0; j < inner.target.size(); ++j) {
		renaming[inner.target.decl(j).name] = inner.assignments[j];
	}
	Substitution result{inner.source, outer.target, {}};
	for (const auto& a : outer.assignments) {
		result.assignments.push_back(substitute(a, renaming));
	}
	return result;
}

Verdict conv_substitutions(const Substitution& a, const Substitution& b, const ConvBudget& budget) {
	if (!alpha_equal(a.source.theory(), b.source.theory()) || !alpha_equal(a.target.theory(), b.target.theory())) {
		throw MismatchError("substitutions do not share endpoints");
	}
	Context ctx(a.source);
	Verdict verdict = Verdict::Equal;
	for (std::size_t i = 0; i < a.assignments.size(); ++i) {
		verdict = both(verdict, conv_at(ctx, a.assignments[i], b.assignments[i], expected_type(a, i), budget));
		if (verdict == Verdict::Unequal) {
			break;
		}
	}
	return verdict;
}

std::string print_substitution(const Substitution& s, const std::string& from_ref, const std::string& to_ref) {
	std::string out = "from " + from_ref + " to " + to_ref + ";\n";
	for (std::size_t i = 0; i < s.assignments.size(); ++i) {
		out += s.target.decl(i).name + " := " + print_term(s.assignments[i]) + ";\n";
	}
	return out;
}

} // namespace gatsort
