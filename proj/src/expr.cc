#include "gatsort/expr.h"

#include <algorithm>
#include <cctype>

namespace gatsort {

namespace {

Expr make(Kind kind, std::string name = {}, Expr first = {}, Expr second = {}, Expr third = {}) {
	return std::make_shared<const Node>(Node{kind, std::move(name), std::move(first), std::move(second), std::move(third)});
}

} // namespace

Expr set_universe() {
	static const Expr universe = make(Kind::Set);
	return universe;
}

Expr small(Expr term) { return make(Kind::Small, {}, std::move(term)); }

Expr pi(std::string binder, Expr domain, Expr codomain) {
	return make(Kind::Pi, std::move(binder), std::move(domain), std::move(codomain));
}

Expr eq(Expr lhs, Expr rhs, Expr at) { return make(Kind::Eq, {}, std::move(lhs), std::move(rhs), std::move(at)); }

Expr var(std::string name) { return make(Kind::Var, std::move(name)); }

Expr app(Expr fn, Expr arg) { return make(Kind::App, {}, std::move(fn), std::move(arg)); }

Expr app(Expr fn, const std::vector<Expr>& args) {
	for (const auto& arg : args) {
		fn = app(std::move(fn), arg);
	}
	return fn;
}

Expr lam(std::string binder, Expr domain, Expr body) {
	return make(Kind::Lam, std::move(binder), std::move(domain), std::move(body));
}

Expr refl(Expr witness) { return make(Kind::Refl, {}, std::move(witness)); }

bool is_type(const Expr& e) {
	switch (e->kind) {
	case Kind::Set:
	case Kind::Small:
	case Kind::Pi:
	case Kind::Eq:
		return true;
	default:
		return false;
	}
}

bool is_term(const Expr& e) { return !is_type(e); }

bool is_keyword(std::string_view text) { return text == "Set" || text == "refl"; }

bool valid_name(std::string_view text) {
	if (text.empty() || std::isdigit(static_cast<unsigned char>(text.front()))) {
		return false;
	}
	for (char c : text) {
		if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
			return false;
		}
	}
	return !is_keyword(text);
}

namespace {

using BinderStack = std::vector<std::pair<const std::string*, const std::string*>>;

bool alpha_equal_in(const Expr& a, const Expr& b, BinderStack& stack) {
	if (a == b && stack.empty()) {
		return true;
	}
	if (a->kind != b->kind) {
		return false;
	}
	switch (a->kind) {
	case Kind::Set:
		return true;
	case Kind::Var: {
		for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
			bool left = *it->first == a->name;
			bool right = *it->second == b->name;
			if (left || right) {
				return left && right;
			}
		}
		return a->name == b->name;
	}
	case Kind::Small:
	case Kind::Refl:
		return alpha_equal_in(a->first, b->first, stack);
	case Kind::App:
		return alpha_equal_in(a->first, b->first, stack) && alpha_equal_in(a->second, b->second, stack);
	case Kind::Eq:
		return alpha_equal_in(a->first, b->first, stack) && alpha_equal_in(a->second, b->second, stack) &&
		       alpha_equal_in(a->third, b->third, stack);
	case Kind::Pi:
	case Kind::Lam: {
		if (!alpha_equal_in(a->first, b->first, stack)) {
			return false;
		}
		stack.emplace_back(&a->name, &b->name);
		bool result = alpha_equal_in(a->second, b->second, stack);
		stack.pop_back();
		return result;
	}
	}
	return false;
}

void free_vars_into(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
	switch (e->kind) {
	case Kind::Set:
		return;
	case Kind::Var:
		if (!bound.count(e->name)) {
			out.insert(e->name);
		}
		return;
	case Kind::Small:
	case Kind::Refl:
		free_vars_into(e->first, bound, out);
		return;
	case Kind::App:
		free_vars_into(e->first, bound, out);
		free_vars_into(e->second, bound, out);
		return;
	case Kind::Eq:
		free_vars_into(e->first, bound, out);
		free_vars_into(e->second, bound, out);
		free_vars_into(e->third, bound, out);
		return;
	case Kind::Pi:
	case Kind::Lam: {
		free_vars_into(e->first, bound, out);
		bool inserted = bound.insert(e->name).second;
		free_vars_into(e->second, bound, out);
		if (inserted) {
			bound.erase(e->name);
		}
		return;
	}
	}
}

} // namespace

bool alpha_equal(const Expr& a, const Expr& b) {
	BinderStack stack;
	return alpha_equal_in(a, b, stack);
}

std::set<std::string> free_vars(const Expr& e) {
	std::set<std::string> bound;
	std::set<std::string> out;
	free_vars_into(e, bound, out);
	return out;
}

void collect_names(const Expr& e, std::set<std::string>& out) {
	if (!e) {
		return;
	}
	if (!e->name.empty()) {
		out.insert(e->name);
	}
	collect_names(e->first, out);
	collect_names(e->second, out);
	collect_names(e->third, out);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
	if (!avoid.count(base)) {
		return base;
	}
	std::string stem = base;
	while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) {
		stem.pop_back();
	}
	for (std::size_t i = 1;; ++i) {
		std::string candidate = stem + std::to_string(i);
		if (!avoid.count(candidate)) {
			return candidate;
		}
	}
}

Expr substitute(const Expr& e, const Renaming& renaming) {
	if (renaming.empty()) {
		return e;
	}
	switch (e->kind) {
	case Kind::Set:
		return e;
	case Kind::Var: {
		auto it = renaming.find(e->name);
		return it == renaming.end() ? e : it->second;
	}
	case Kind::Small: {
		Expr t = substitute(e->first, renaming);
		return t == e->first ? e : small(t);
	}
	case Kind::Refl: {
		Expr t = substitute(e->first, renaming);
		return t == e->first ? e : refl(t);
	}
	case Kind::App: {
		Expr f = substitute(e->first, renaming);
		Expr a = substitute(e->second, renaming);
		return f == e->first && a == e->second ? e : app(f, a);
	}
	case Kind::Eq: {
		Expr l = substitute(e->first, renaming);
		Expr r = substitute(e->second, renaming);
		Expr t = substitute(e->third, renaming);
		return l == e->first && r == e->second && t == e->third ? e : eq(l, r, t);
	}
	case Kind::Pi:
	case Kind::Lam: {
		Expr domain = substitute(e->first, renaming);
		std::set<std::string> body_free = free_vars(e->second);
		Renaming inner;
		std::set<std::string> range_free;
		for (const auto& [name, replacement] : renaming) {
			if (name != e->name && body_free.count(name)) {
				inner.emplace(name, replacement);
				auto fv = free_vars(replacement);
				range_free.insert(fv.begin(), fv.end());
			}
		}
		std::string binder = e->name;
		if (range_free.count(binder)) {
			std::set<std::string> avoid = body_free;
			avoid.insert(range_free.begin(), range_free.end());
			for (const auto& [name, _] : renaming) {
				avoid.insert(name);
			}
			binder = fresh_name(binder, avoid);
			inner[e->name] = var(binder);
		}
		Expr body = substitute(e->second, inner);
		if (domain == e->first && body == e->second && binder == e->name) {
			return e;
		}
		return e->kind == Kind::Pi ? pi(binder, domain, body) : lam(binder, domain, body);
	}
	}
	return e;
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
	return substitute(e, Renaming{{name, replacement}});
}

const Expr& spine_head(const Expr& e) {
	const Expr* cur = &e;
	while ((*cur)->kind == Kind::App) {
		cur = &(*cur)->first;
	}
	return *cur;
}

std::vector<Expr> spine_args(const Expr& e) {
	std::vector<Expr> args;
	const Expr* cur = &e;
	while ((*cur)->kind == Kind::App) {
		args.push_back((*cur)->second);
		cur = &(*cur)->first;
	}
	std::reverse(args.begin(), args.end());
	return args;
}

std::size_t term_size(const Expr& e) {
	if (!e) {
		return 0;
	}
	return 1 + term_size(e->first) + term_size(e->second) + term_size(e->third);
}

Telescope peel_pi(const Expr& type) {
	Telescope tele;
	Expr cur = type;
	while (cur->kind == Kind::Pi) {
		tele.binders.emplace_back(cur->name, cur->first);
		cur = cur->second;
	}
	tele.body = cur;
	return tele;
}

namespace {

std::string print_atom(const Expr& e);

std::string print_spine(const Expr& e) {
	if (e->kind == Kind::App) {
		return print_spine(e->first) + " " + print_atom(e->second);
	}
	return print_atom(e);
}

std::string print_atom(const Expr& e) {
	if (e->kind == Kind::Var) {
		return e->name;
	}
	return "(" + print_term(e) + ")";
}

std::string print_domain(const Expr& e) {
	return e->kind == Kind::Lam ? "(" + print_term(e) + ")" : print_term(e);
}

} // namespace

std::string print_term(const Expr& e) {
	switch (e->kind) {
	case Kind::Var:
		return e->name;
	case Kind::App:
		return print_spine(e);
	case Kind::Lam:
		return "\\" + e->name + " : " + print_domain(e->first) + ". " + print_term(e->second);
	case Kind::Refl:
		return "refl " + print_atom(e->first);
	default:
		return print_type(e);
	}
}

std::string print_type(const Expr& e) {
	switch (e->kind) {
	case Kind::Set:
		return "Set";
	case Kind::Small:
		return print_term(e->first);
	case Kind::Pi:
		return "(" + e->name + " : " + print_domain(e->first) + ") " + print_type(e->second);
	case Kind::Eq:
		return print_term(e->first) + " = " + print_term(e->second) + " : " + print_type(e->third);
	default:
		return print_term(e);
	}
}

std::string print(const Expr& e) { return is_type(e) ? print_type(e) : print_term(e); }

std::string print_theory(const Theory& theory) {
	std::string out;
	for (const auto& decl : theory.decls) {
		out += decl.name + " : " + print_type(decl.type) + ";\n";
	}
	return out;
}

bool alpha_equal(const Theory& a, const Theory& b) {
	if (a.size() != b.size()) {
		return false;
	}
	for (std::size_t i = 0; i < a.size(); ++i) {
		if (a.decls[i].name != b.decls[i].name || !alpha_equal(a.decls[i].type, b.decls[i].type)) {
			return false;
		}
	}
	return true;
}

std::set<std::string> all_names(const Theory& theory) {
	std::set<std::string> names;
	for (const auto& decl : theory.decls) {
		names.insert(decl.name);
		collect_names(decl.type, names);
	}
	return names;
}

} // namespace gatsort
