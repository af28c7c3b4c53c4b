#ifndef GATSORT_EXPR_H
#define GATSORT_EXPR_H

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gatsort {

// Syntax of the signature language. Set, Small, Pi and Eq are types; Var, App, Lam and
// Refl are terms. A single node type carries both so that substitution, printing and
// alpha-equivalence are written once.
enum class Kind { Set, Small, Pi, Eq, Var, App, Lam, Refl };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
	Kind kind;
	std::string name; // Var: the variable. Pi, Lam: the binder.
	Expr first;       // Small: term. Pi, Lam: domain. Eq: lhs. App: function. Refl: witness.
	Expr second;      // Pi: codomain. Lam: body. Eq: rhs. App: argument.
	Expr third;       // Eq: carrier type.
};

Expr set_universe();
Expr small(Expr term);
Expr pi(std::string binder, Expr domain, Expr codomain);
Expr eq(Expr lhs, Expr rhs, Expr at);
Expr var(std::string name);
Expr app(Expr fn, Expr arg);
Expr app(Expr fn, const std::vector<Expr>& args);
Expr lam(std::string binder, Expr domain, Expr body);
Expr refl(Expr witness);

bool is_type(const Expr& e);
bool is_term(const Expr& e);

bool valid_name(std::string_view text);
bool is_keyword(std::string_view text);

bool alpha_equal(const Expr& a, const Expr& b);

std::set<std::string> free_vars(const Expr& e);
// Every identifier occurring in `e`, free or bound.
void collect_names(const Expr& e, std::set<std::string>& out);

// `base` with a numeric suffix, avoiding every name in `avoid`. Returns `base` itself
// when it is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

using Renaming = std::map<std::string, Expr>;

// Capture-avoiding simultaneous substitution.
Expr substitute(const Expr& e, const Renaming& renaming);
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

// The head of an application spine and its arguments, left to right.
const Expr& spine_head(const Expr& e);
std::vector<Expr> spine_args(const Expr& e);

// AST node count (Var and App nodes each count one).
std::size_t term_size(const Expr& e);

struct Telescope {
	std::vector<std::pair<std::string, Expr>> binders;
	Expr body;
};
Telescope peel_pi(const Expr& type);

std::string print_term(const Expr& e);
std::string print_type(const Expr& e);
// Dispatches on the node kind.
std::string print(const Expr& e);

struct Decl {
	std::string name;
	Expr type;
};

struct Theory {
	std::vector<Decl> decls;

	std::size_t size() const { return decls.size(); }
	bool empty() const { return decls.empty(); }
};

// One `name : type;` line per declaration.
std::string print_theory(const Theory& theory);
bool alpha_equal(const Theory& a, const Theory& b);
// Global and bound names of the whole theory.
std::set<std::string> all_names(const Theory& theory);

} // namespace gatsort

#endif
