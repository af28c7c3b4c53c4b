#include "gatsort/egraph.h"

#include <algorithm>
#include <limits>

namespace gatsort {

namespace {

constexpr std::size_t kTrustedUnfold = std::numeric_limits<std::size_t>::max();

} // namespace

void EGraph::mark_vars(const Pattern& pattern, std::vector<bool>& out) {
	if (pattern.var >= 0) {
		out[static_cast<std::size_t>(pattern.var)] = true;
		return;
	}
	for (const auto& arg : pattern.args) {
		mark_vars(arg, out);
	}
}

EGraph::EGraph(Context ctx) : ctx_(std::move(ctx)) {
	for (const auto& rw : ctx_.theory().rewrites()) {
		std::map<std::string, int> vars;
		for (std::size_t k = 0; k < rw.vars.size(); ++k) {
			vars[rw.vars[k]] = static_cast<int>(k);
		}
		Rule rule;
		rule.source = rw.source;
		rule.var_count = rw.vars.size();
		bool ok = true;
		for (const auto& sort : rw.var_sorts) {
			auto p = compile(normalize(sort, kTrustedUnfold), vars);
			if (!p) {
				ok = false;
				break;
			}
			rule.var_sorts.push_back(std::move(*p));
		}
		auto lhs = compile(rw.lhs, vars);
		auto rhs = compile(rw.rhs, vars);
		if (!ok || !lhs || !rhs) {
			continue;
		}
		if (rule.var_count == 0) {
			merge(instantiate(*lhs, Binding{}), instantiate(*rhs, Binding{}));
			continue;
		}
		rule.sides[0] = std::move(*lhs);
		rule.sides[1] = std::move(*rhs);
		for (int side = 0; side < 2; ++side) {
			rule.bound_by[side].assign(rule.var_count, false);
			mark_vars(rule.sides[side], rule.bound_by[side]);
		}
		for (std::size_t k = 0; k < rule.var_count; ++k) {
			if (!rule.bound_by[0][k] && !rule.bound_by[1][k]) {
				unanchored_ = true;
			}
		}
		rules_.push_back(std::move(rule));
	}

	// Constants and locals are always present so that quantified equations can find
	// inhabitants for their variables.
	for (const auto& local : ctx_.locals()) {
		add(var(local.name));
	}
	const CheckedTheory& theory = ctx_.theory();
	for (std::size_t i = 0; i < theory.size(); ++i) {
		if (theory.classification(i) == DeclClass::Operation && theory.decl(i).type->kind != Kind::Pi) {
			add(var(theory.decl(i).name));
		}
	}
	rebuild();
}

std::optional<std::uint32_t> EGraph::symbol_lookup(const std::string& name) const {
	auto it = symbol_index_.find(name);
	if (it == symbol_index_.end()) {
		return std::nullopt;
	}
	return it->second;
}

std::optional<std::uint32_t> EGraph::symbol(const std::string& name) {
	if (auto found = symbol_lookup(name)) {
		return found;
	}
	const Expr* type = ctx_.lookup(name);
	if (!type) {
		return std::nullopt;
	}
	Symbol sym;
	sym.name = name;
	Expr t = normalize(*type, kTrustedUnfold);
	std::map<std::string, int> vars;
	while (t->kind == Kind::Pi) {
		std::string v = "?" + std::to_string(sym.arity);
		vars[v] = static_cast<int>(sym.arity);
		++sym.arity;
		t = substitute(t->second, t->name, var(v));
	}
	if (t->kind == Kind::Set) {
		sym.term = true;
		sym.sort = true;
	} else if (t->kind == Kind::Small) {
		if (auto p = compile(t->first, vars)) {
			sym.term = true;
			sym.codomain = std::move(*p);
		}
	}
	auto id = static_cast<std::uint32_t>(symbols_.size());
	symbols_.push_back(std::move(sym));
	symbol_index_.emplace(name, id);
	return id;
}

std::optional<EGraph::Pattern> EGraph::compile(const Expr& term, const std::map<std::string, int>& vars) {
	const Expr& head = spine_head(term);
	if (head->kind != Kind::Var) {
		return std::nullopt;
	}
	Pattern p;
	if (auto it = vars.find(head->name); it != vars.end()) {
		if (head != term) {
			return std::nullopt;
		}
		p.var = it->second;
		return p;
	}
	auto sym = symbol(head->name);
	if (!sym || !symbols_[*sym].term) {
		return std::nullopt;
	}
	std::vector<Expr> args = spine_args(term);
	if (args.size() != symbols_[*sym].arity) {
		return std::nullopt;
	}
	p.symbol = *sym;
	for (const auto& arg : args) {
		auto sub = compile(arg, vars);
		if (!sub) {
			return std::nullopt;
		}
		p.args.push_back(std::move(*sub));
	}
	return p;
}

std::optional<EGraph::ClassId> EGraph::add(const Expr& term) {
	auto p = compile(term, {});
	if (!p) {
		return std::nullopt;
	}
	return instantiate(*p, Binding{});
}

std::optional<EGraph::ClassId> EGraph::lookup(const Expr& term) const {
	const Expr& head = spine_head(term);
	if (head->kind != Kind::Var) {
		return std::nullopt;
	}
	auto sym = symbol_lookup(head->name);
	if (!sym) {
		return std::nullopt;
	}
	std::vector<ClassId> args;
	for (const auto& arg : spine_args(term)) {
		auto c = lookup(arg);
		if (!c) {
			return std::nullopt;
		}
		args.push_back(*c);
	}
	auto it = hashcons_.find(Key{*sym, args});
	if (it == hashcons_.end()) {
		return std::nullopt;
	}
	return find(nodes_[it->second].cls);
}

EGraph::ClassId EGraph::find(ClassId id) const {
	ClassId root = id;
	while (parent_[root] != root) {
		root = parent_[root];
	}
	while (parent_[id] != root) {
		ClassId next = parent_[id];
		parent_[id] = root;
		id = next;
	}
	return root;
}

EGraph::ClassId EGraph::type_of(ClassId id) const {
	ClassId t = types_[find(id)];
	return t == kSort ? kSort : find(t);
}

EGraph::ClassId EGraph::add_node(std::uint32_t sym, std::vector<ClassId> args) {
	for (auto& a : args) {
		a = find(a);
	}
	Key key{sym, args};
	if (auto it = hashcons_.find(key); it != hashcons_.end()) {
		return find(nodes_[it->second].cls);
	}
	ClassId type = kSort;
	if (!symbols_[sym].sort) {
		Binding binding(args.begin(), args.end());
		type = instantiate(symbols_[sym].codomain, binding);
	}
	auto id = static_cast<ClassId>(parent_.size());
	auto index = static_cast<std::uint32_t>(nodes_.size());
	parent_.push_back(id);
	types_.push_back(type);
	members_.push_back({index});
	nodes_.push_back(Node{sym, args, id, true});
	hashcons_.emplace(std::move(key), index);
	return id;
}

EGraph::ClassId EGraph::instantiate(const Pattern& p, const Binding& binding) {
	if (p.var >= 0) {
		return find(*binding[static_cast<std::size_t>(p.var)]);
	}
	std::vector<ClassId> args;
	args.reserve(p.args.size());
	for (const auto& arg : p.args) {
		args.push_back(instantiate(arg, binding));
	}
	return add_node(p.symbol, std::move(args));
}

std::optional<EGraph::ClassId> EGraph::lookup_instance(const Pattern& p, const Binding& binding) const {
	if (p.var >= 0) {
		const auto& b = binding[static_cast<std::size_t>(p.var)];
		if (!b) {
			return std::nullopt;
		}
		return find(*b);
	}
	std::vector<ClassId> args;
	for (const auto& arg : p.args) {
		auto c = lookup_instance(arg, binding);
		if (!c) {
			return std::nullopt;
		}
		args.push_back(*c);
	}
	auto it = hashcons_.find(Key{p.symbol, args});
	if (it == hashcons_.end()) {
		return std::nullopt;
	}
	return find(nodes_[it->second].cls);
}

bool EGraph::merge(ClassId a, ClassId b) {
	ClassId ra = find(a);
	ClassId rb = find(b);
	if (ra == rb) {
		return false;
	}
	ClassId root = std::min(ra, rb);
	ClassId child = std::max(ra, rb);
	parent_[child] = root;
	auto& into = members_[root];
	into.insert(into.end(), members_[child].begin(), members_[child].end());
	members_[child].clear();
	dirty_ = true;
	return true;
}

void EGraph::rebuild() {
	while (dirty_) {
		dirty_ = false;
		hashcons_.clear();
		for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
			Node& node = nodes_[i];
			if (!node.live) {
				continue;
			}
			for (auto& a : node.args) {
				a = find(a);
			}
			auto [it, inserted] = hashcons_.emplace(Key{node.symbol, node.args}, i);
			if (!inserted) {
				merge(nodes_[it->second].cls, node.cls);
				node.live = false;
			}
		}
	}
	for (auto& m : members_) {
		m.clear();
	}
	for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
		if (nodes_[i].live) {
			members_[find(nodes_[i].cls)].push_back(i);
		}
	}
}

std::vector<EGraph::ClassId> EGraph::roots() const {
	std::vector<ClassId> out;
	for (ClassId c = 0; c < parent_.size(); ++c) {
		if (find(c) == c) {
			out.push_back(c);
		}
	}
	return out;
}

void EGraph::match(const Pattern& p, ClassId cls, Binding& binding, const std::function<void(Binding&)>& k) const {
	if (p.var >= 0) {
		auto& slot = binding[static_cast<std::size_t>(p.var)];
		if (slot) {
			if (find(*slot) == find(cls)) {
				k(binding);
			}
			return;
		}
		slot = find(cls);
		k(binding);
		slot.reset();
		return;
	}
	for (std::uint32_t index : members_[find(cls)]) {
		const Node& node = nodes_[index];
		if (node.symbol == p.symbol && node.args.size() == p.args.size()) {
			match_args(p, node, 0, binding, k);
		}
	}
}

void EGraph::match_args(const Pattern& p, const Node& node, std::size_t i, Binding& binding,
                        const std::function<void(Binding&)>& k) const {
	if (i == p.args.size()) {
		k(binding);
		return;
	}
	match(p.args[i], node.args[i], binding, [&](Binding& b) { match_args(p, node, i + 1, b, k); });
}

bool EGraph::well_typed(const Rule& rule, const Binding& binding) const {
	for (std::size_t k = 0; k < rule.var_count; ++k) {
		auto want = lookup_instance(rule.var_sorts[k], binding);
		if (!want || type_of(*binding[k]) != *want) {
			return false;
		}
	}
	return true;
}

EGraph::Status EGraph::saturate(std::size_t fuel, const std::function<bool()>& stop) {
	rebuild();
	if (stop && stop()) {
		return Status::Stopped;
	}
	struct Pending {
		ClassId cls;
		std::size_t rule;
		int target_side;
		Binding binding;
	};
	std::size_t spent = 0;
	while (true) {
		std::vector<ClassId> classes = roots();
		std::vector<Pending> pending;
		for (std::size_t r = 0; r < rules_.size(); ++r) {
			const Rule& rule = rules_[r];
			for (int side = 0; side < 2; ++side) {
				const Pattern& pattern = rule.sides[side];
				const std::vector<bool>& bound = rule.bound_by[side];
				// Variables the pattern does not fix range over every class.
				std::function<void(Binding&, ClassId, std::size_t)> complete = [&](Binding& b, ClassId cls, std::size_t k) {
					if (k == rule.var_count) {
						if (well_typed(rule, b)) {
							pending.push_back({cls, r, 1 - side, b});
						}
						return;
					}
					if (bound[k]) {
						complete(b, cls, k + 1);
						return;
					}
					for (ClassId c : classes) {
						b[k] = c;
						complete(b, cls, k + 1);
					}
					b[k].reset();
				};
				Binding binding(rule.var_count);
				for (ClassId c : classes) {
					match(pattern, c, binding, [&](Binding& b) { complete(b, c, 0); });
				}
			}
		}

		bool changed = false;
		for (const auto& p : pending) {
			if (spent >= fuel) {
				rebuild();
				return Status::FuelExhausted;
			}
			std::size_t before = nodes_.size();
			ClassId other = instantiate(rules_[p.rule].sides[p.target_side], p.binding);
			if (nodes_.size() != before) {
				spent += nodes_.size() - before;
				changed = true;
			}
			if (merge(p.cls, other)) {
				++spent;
				changed = true;
			}
		}
		rebuild();
		if (!changed) {
			return Status::Saturated;
		}
		if (stop && stop()) {
			return Status::Stopped;
		}
	}
}

} // namespace gatsort
