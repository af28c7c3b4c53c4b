#ifndef GATSORT_EGRAPH_H
#define GATSORT_EGRAPH_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gatsort/kernel.h"

namespace gatsort {

// Congruence closure over first-order terms of a context, with typed e-matching of the
// theory's equations. Every class records its type: either the class of a sort term or
// kSort for sort terms themselves.
class EGraph {
public:
	using ClassId = std::uint32_t;
	static constexpr ClassId kSort = 0xffffffffu;

	enum class Status { Saturated, FuelExhausted, Stopped };

	explicit EGraph(Context ctx);

	const Context& context() const { return ctx_; }

	// Adds a beta-normal first-order term. Returns nullopt for anything else (lambdas,
	// partial applications, unknown heads).
	std::optional<ClassId> add(const Expr& term);
	std::optional<ClassId> lookup(const Expr& term) const;

	ClassId find(ClassId id) const;
	bool equivalent(ClassId a, ClassId b) const { return find(a) == find(b); }
	// Type of a class, canonicalized.
	ClassId type_of(ClassId id) const;

	// Runs rounds of equation matching until nothing changes, `fuel` node creations and
	// merges have been spent, or `stop` returns true after a round.
	Status saturate(std::size_t fuel, const std::function<bool()>& stop = {});

	std::vector<ClassId> roots() const;
	std::size_t node_count() const { return nodes_.size(); }

	// True when some equation quantifies over a variable that neither side mentions;
	// matching then needs an inhabitant already present in the graph.
	bool has_unanchored_rules() const { return unanchored_; }

	// Union of two classes (used for ground facts). Returns whether anything changed.
	bool merge(ClassId a, ClassId b);
	void rebuild();

private:
	struct Pattern {
		int var = -1;
		std::uint32_t symbol = 0;
		std::vector<Pattern> args;
	};

	struct Symbol {
		std::string name;
		bool term = false;    // usable as the head of a first-order term
		std::size_t arity = 0;
		bool sort = false;    // codomain is Set
		Pattern codomain;     // codomain sort, in terms of argument variables
	};

	struct Node {
		std::uint32_t symbol;
		std::vector<ClassId> args;
		ClassId cls;
		bool live = true;
	};

	struct Rule {
		std::string source;
		std::size_t var_count = 0;
		std::vector<Pattern> var_sorts;
		Pattern sides[2];
		std::vector<bool> bound_by[2];
	};

	using Binding = std::vector<std::optional<ClassId>>;
	using Key = std::pair<std::uint32_t, std::vector<ClassId>>;

	static void mark_vars(const Pattern& pattern, std::vector<bool>& out);
	std::optional<std::uint32_t> symbol(const std::string& name);
	std::optional<std::uint32_t> symbol_lookup(const std::string& name) const;
	std::optional<Pattern> compile(const Expr& term, const std::map<std::string, int>& vars);
	ClassId add_node(std::uint32_t symbol, std::vector<ClassId> args);
	ClassId instantiate(const Pattern& p, const Binding& binding);
	std::optional<ClassId> lookup_instance(const Pattern& p, const Binding& binding) const;
	void match(const Pattern& p, ClassId cls, Binding& binding, const std::function<void(Binding&)>& k) const;
	void match_args(const Pattern& p, const Node& node, std::size_t i, Binding& binding,
	                const std::function<void(Binding&)>& k) const;
	bool well_typed(const Rule& rule, const Binding& binding) const;

	Context ctx_;
	std::vector<Symbol> symbols_;
	std::unordered_map<std::string, std::uint32_t> symbol_index_;
	std::vector<Node> nodes_;
	std::map<Key, std::uint32_t> hashcons_;
	mutable std::vector<ClassId> parent_;
	std::vector<ClassId> types_;
	std::vector<std::vector<std::uint32_t>> members_;
	std::vector<Rule> rules_;
	bool unanchored_ = false;
	bool dirty_ = false;
	std::size_t spent_ = 0;
};

} // namespace gatsort

#endif
