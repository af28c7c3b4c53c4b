#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "gatsort/error.h"
#include "gatsort/model_util.h"
#include "gatsort/models.h"

namespace gatsort {

using nlohmann::json;

namespace {

std::optional<std::string> lookup_component(const ModelMorphism& h, std::size_t decl, const std::string& key,
                                            const std::string& label) {
	if (decl >= h.components.size()) {
		return std::nullopt;
	}
	const auto& comp = h.components[decl];
	auto it = comp.find(key);
	if (it == comp.end()) {
		return std::nullopt;
	}
	auto e = it->second.find(label);
	if (e == it->second.end()) {
		return std::nullopt;
	}
	return e->second;
}

// Maps each label of an instance of `binders` along its domain; the environment is
// rebuilt step by step so later domains see earlier binders.
std::vector<std::string> map_indices(const FiniteModel& src, const ModelMorphism& h,
                                     const std::vector<std::pair<std::string, Expr>>& binders,
                                     const std::vector<std::string>& labels) {
	Env env;
	std::vector<std::string> out;
	for (std::size_t k = 0; k < labels.size(); ++k) {
		out.push_back(map_element(src, h, env, binders[k].second, labels[k]));
		env[binders[k].first] = Value::elem(labels[k]);
	}
	return out;
}

std::optional<std::string> try_map_indices(const FiniteModel& src, const ModelMorphism& h,
                                           const std::vector<std::pair<std::string, Expr>>& binders,
                                           const std::vector<std::string>& labels, std::vector<std::string>& out) {
	try {
		out = map_indices(src, h, binders, labels);
	} catch (const HomError& e) {
		return std::string(e.what());
	}
	return std::nullopt;
}

std::optional<std::string> operation_failure(const FiniteModel& src, const FiniteModel& dst, const ModelMorphism& h,
                                             std::size_t i, const Telescope& tele) {
	std::optional<std::string> failure;
	const std::string& name = src.theory.decl(i).name;
	for_each_instance(src, {}, tele.binders, [&](const Env& env, const std::vector<std::string>& labels) {
		if (failure) {
			return;
		}
		std::vector<std::string> mapped;
		if ((failure = try_map_indices(src, h, tele.binders, labels, mapped))) {
			return;
		}
		const Value* image_in_src = navigate(src.values[i], labels);
		const Value* applied_in_dst = navigate(dst.values[i], mapped);
		std::string at = "(" + join_key(labels) + ")";
		if (!image_in_src || image_in_src->kind != Value::Kind::Elem) {
			failure = "source table of '" + name + "' has no entry at " + at;
			return;
		}
		if (!applied_in_dst || applied_in_dst->kind != Value::Kind::Elem) {
			failure = "target table of '" + name + "' has no entry at the image of " + at;
			return;
		}
		auto [decl, index] = resolve_sort(src, env, tele.body->first);
		auto mapped_result = lookup_component(h, decl, join_key(index), image_in_src->label);
		if (!mapped_result) {
			failure = "component for '" + src.theory.decl(decl).name + "' does not map '" + image_in_src->label + "'";
			return;
		}
		if (*mapped_result != applied_in_dst->label) {
			failure = "operation '" + name + "' does not commute at " + at + ": mapping then applying gives '" +
			          applied_in_dst->label + "', applying then mapping gives '" + *mapped_result + "'";
		}
	});
	return failure;
}

// Instances of both sides of a sort equation must be mapped by the same component.
std::optional<std::string> sort_equation_failure(const FiniteModel& src, const ModelMorphism& h, std::size_t i) {
	std::optional<std::string> failure;
	for_each_sort_equation_instance(src, i, [&](const Env&, const SortRef& lhs, const SortRef& rhs) {
		if (failure) {
			return;
		}
		for (const auto& label : navigate(src.values[lhs.decl], lhs.indices)->carrier) {
			auto l = lookup_component(h, lhs.decl, join_key(lhs.indices), label);
			auto r = lookup_component(h, rhs.decl, join_key(rhs.indices), label);
			if (!l || !r || *l != *r) {
				failure = "sort equation '" + src.theory.decl(i).name + "': components disagree on '" + label + "'";
				return;
			}
		}
	});
	return failure;
}

std::optional<std::string> sort_component_failure(const FiniteModel& src, const FiniteModel& dst,
                                                  const ModelMorphism& h, std::size_t i, const Telescope& tele) {
	std::optional<std::string> failure;
	const std::string& name = src.theory.decl(i).name;
	std::size_t instances = 0;
	const auto& comp = h.components[i];
	for_each_instance(src, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
		if (failure) {
			return;
		}
		++instances;
		std::string key = join_key(labels);
		auto it = comp.find(key);
		if (it == comp.end()) {
			failure = "no component for '" + name + "' at (" + key + ")";
			return;
		}
		std::vector<std::string> mapped;
		if ((failure = try_map_indices(src, h, tele.binders, labels, mapped))) {
			return;
		}
		const Value* from = navigate(src.values[i], labels);
		const Value* to = navigate(dst.values[i], mapped);
		if (!to || to->kind != Value::Kind::Set) {
			failure = "target has no carrier for '" + name + "' at (" + join_key(mapped) + ")";
			return;
		}
		if (it->second.size() != from->carrier.size()) {
			failure = "component for '" + name + "' at (" + key + ") is not a function on the source carrier";
			return;
		}
		for (const auto& label : from->carrier) {
			auto e = it->second.find(label);
			if (e == it->second.end()) {
				failure = "component for '" + name + "' at (" + key + ") does not map '" + label + "'";
				return;
			}
			if (!std::binary_search(to->carrier.begin(), to->carrier.end(), e->second)) {
				failure = "component for '" + name + "' at (" + key + ") sends '" + label + "' to '" + e->second +
				          "', outside the target carrier";
				return;
			}
		}
	});
	if (!failure && instances != comp.size()) {
		failure = "component for '" + name + "' has entries for indices outside the source";
	}
	return failure;
}

} // namespace

std::string map_element(const FiniteModel& src, const ModelMorphism& h, const Env& env, const Expr& sort_term,
                        const std::string& label) {
	auto [decl, index] = resolve_sort(src, env, sort_term);
	auto mapped = lookup_component(h, decl, join_key(index), label);
	if (!mapped) {
		throw HomError("component for '" + src.theory.decl(decl).name + "' at (" + join_key(index) +
		               ") does not map '" + label + "'");
	}
	return *mapped;
}

void check_morphism(const FiniteModel& src, const FiniteModel& dst, const ModelMorphism& h) {
	const CheckedTheory& theory = src.theory;
	if (h.components.size() != theory.size()) {
		throw HomError("morphism has " + std::to_string(h.components.size()) + " components for " +
		               std::to_string(theory.size()) + " declarations");
	}
	for (std::size_t i = 0; i < theory.size(); ++i) {
		Telescope tele = decl_telescope(theory, i);
		std::optional<std::string> failure;
		switch (theory.classification(i)) {
		case DeclClass::Sort:
			failure = sort_component_failure(src, dst, h, i, tele);
			break;
		case DeclClass::Operation:
			failure = operation_failure(src, dst, h, i, tele);
			break;
		case DeclClass::SortEquation:
			failure = sort_equation_failure(src, h, i);
			break;
		case DeclClass::Equation:
			break;
		}
		if (!failure && theory.classification(i) != DeclClass::Sort && !h.components[i].empty()) {
			failure = "'" + theory.decl(i).name + "' is not a sort but has a component";
		}
		if (failure) {
			throw HomError(*failure);
		}
	}
}

ModelMorphism identity_morphism(const FiniteModel& m) {
	ModelMorphism h;
	h.components.resize(m.theory.size());
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		if (m.theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		Telescope tele = decl_telescope(m.theory, i);
		for_each_instance(m, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			auto& comp = h.components[i][join_key(labels)];
			for (const auto& label : navigate(m.values[i], labels)->carrier) {
				comp[label] = label;
			}
		});
	}
	return h;
}

ModelMorphism compose_morphisms(const FiniteModel& src, const ModelMorphism& f, const ModelMorphism& g) {
	ModelMorphism h;
	h.components.resize(src.theory.size());
	for (std::size_t i = 0; i < src.theory.size(); ++i) {
		if (src.theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		Telescope tele = decl_telescope(src.theory, i);
		for_each_instance(src, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			std::string key = join_key(labels);
			std::string mid_key = join_key(map_indices(src, f, tele.binders, labels));
			auto& comp = h.components[i][key];
			for (const auto& [from, via] : f.components[i].at(key)) {
				auto to = lookup_component(g, i, mid_key, via);
				if (!to) {
					throw HomError("cannot compose: second morphism does not map '" + via + "'");
				}
				comp[from] = *to;
			}
		});
	}
	return h;
}

namespace {

// Backtracking over one slot per source element. Each operation instance is checked
// as soon as the slots it mentions are assigned, and slots are scheduled so that such
// checks happen early. Results are reported in lexicographic order of the slots taken
// in declaration order.
class Enumerator {
public:
	Enumerator(const FiniteModel& src, const FiniteModel& dst) : src_(src), dst_(dst) {
		const CheckedTheory& theory = src.theory;
		skeleton_.components.resize(theory.size());
		for (std::size_t i = 0; i < theory.size(); ++i) {
			Telescope tele = decl_telescope(theory, i);
			switch (theory.classification(i)) {
			case DeclClass::Sort:
				add_slots(i, tele);
				break;
			case DeclClass::Operation:
				add_operation(i, tele);
				break;
			case DeclClass::SortEquation:
				add_sort_equation(i);
				break;
			case DeclClass::Equation:
				break;
			}
		}
		schedule();
	}

	// Product over source elements of the largest target carrier of the same sort.
	long double candidates() const {
		long double total = 1;
		for (const auto& slot : slots_) {
			total *= static_cast<long double>(widest_.at(slot.decl));
		}
		return total;
	}

	std::vector<ModelMorphism> run(std::optional<long double> node_budget) {
		budget_ = node_budget;
		value_.assign(slots_.size(), nullptr);
		search(0);
		std::sort(found_.begin(), found_.end());
		std::vector<ModelMorphism> out;
		for (const auto& labels : found_) {
			ModelMorphism h = skeleton_;
			for (std::size_t s = 0; s < slots_.size(); ++s) {
				h.components[slots_[s].decl][slots_[s].key][slots_[s].element] = labels[s];
			}
			out.push_back(std::move(h));
		}
		return out;
	}

	bool exhausted() const { return exhausted_; }

private:
	struct Slot {
		std::size_t decl;
		std::string key;
		std::vector<std::string> indices;
		std::string element;
		std::vector<std::size_t> deps; // slots of the index elements
	};

	struct Constraint {
		bool operation;
		std::size_t decl;
		std::vector<std::size_t> args; // operation: argument slots
		std::size_t result;            // operation: result slot; sort equation: left slot
		std::size_t other = 0;         // sort equation: right slot
		std::vector<std::size_t> slots;
	};

	std::size_t slot_of(std::size_t decl, const std::vector<std::string>& indices, const std::string& element) const {
		return index_.at(std::make_tuple(decl, join_key(indices), element));
	}

	std::size_t slot_of_element(const Env& env, const Expr& sort_term, const std::string& element) const {
		SortRef ref = resolve_sort(src_, env, sort_term);
		return slot_of(ref.decl, ref.indices, element);
	}

	void add_slots(std::size_t i, const Telescope& tele) {
		std::size_t widest = 0;
		for_each_instance(dst_, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			widest = std::max(widest, navigate(dst_.values[i], labels)->carrier.size());
		});
		widest_[i] = widest;
		for_each_instance(src_, {}, tele.binders, [&](const Env& env, const std::vector<std::string>& labels) {
			std::string key = join_key(labels);
			skeleton_.components[i][key];
			std::vector<std::size_t> deps;
			Env prefix;
			for (std::size_t k = 0; k < labels.size(); ++k) {
				deps.push_back(slot_of_element(prefix, tele.binders[k].second, labels[k]));
				prefix[tele.binders[k].first] = env.at(tele.binders[k].first);
			}
			for (const auto& e : navigate(src_.values[i], labels)->carrier) {
				index_[std::make_tuple(i, key, e)] = slots_.size();
				slots_.push_back({i, key, labels, e, deps});
			}
		});
	}

	void add_operation(std::size_t i, const Telescope& tele) {
		for_each_instance(src_, {}, tele.binders, [&](const Env& env, const std::vector<std::string>& labels) {
			Constraint c{true, i, {}, 0, 0, {}};
			Env prefix;
			for (std::size_t k = 0; k < labels.size(); ++k) {
				c.args.push_back(slot_of_element(prefix, tele.binders[k].second, labels[k]));
				prefix[tele.binders[k].first] = env.at(tele.binders[k].first);
			}
			c.result = slot_of_element(env, tele.body->first, navigate(src_.values[i], labels)->label);
			c.slots = c.args;
			c.slots.push_back(c.result);
			constraints_.push_back(std::move(c));
		});
	}

	void add_sort_equation(std::size_t i) {
		for_each_sort_equation_instance(src_, i, [&](const Env&, const SortRef& lhs, const SortRef& rhs) {
			for (const auto& e : navigate(src_.values[lhs.decl], lhs.indices)->carrier) {
				Constraint c{false, i, {}, slot_of(lhs.decl, lhs.indices, e), slot_of(rhs.decl, rhs.indices, e), {}};
				c.slots = {c.result, c.other};
				constraints_.push_back(std::move(c));
			}
		});
	}

	// Fixes the order in which slots are assigned and which checks run after each one.
	void schedule() {
		std::vector<std::vector<std::size_t>> touching(slots_.size());
		std::vector<std::size_t> open(constraints_.size());
		for (std::size_t c = 0; c < constraints_.size(); ++c) {
			std::set<std::size_t> distinct(constraints_[c].slots.begin(), constraints_[c].slots.end());
			open[c] = distinct.size();
			for (std::size_t s : distinct) {
				touching[s].push_back(c);
			}
		}
		std::vector<bool> assigned(slots_.size(), false);
		auto ready = [&](std::size_t s) {
			return !assigned[s] && std::all_of(slots_[s].deps.begin(), slots_[s].deps.end(),
			                                   [&](std::size_t d) { return assigned[d]; });
		};
		std::vector<std::size_t> pending_checks;
		for (std::size_t c = 0; c < constraints_.size(); ++c) {
			if (open[c] == 0) {
				pending_checks.push_back(c);
			}
		}
		initial_checks_ = pending_checks;
		while (order_.size() < slots_.size()) {
			std::optional<std::size_t> pick;
			// Prefer a slot that completes some check.
			for (std::size_t c = 0; c < constraints_.size() && !pick; ++c) {
				if (open[c] != 1) {
					continue;
				}
				for (std::size_t s : constraints_[c].slots) {
					if (ready(s)) {
						pick = s;
						break;
					}
				}
			}
			for (std::size_t s = 0; s < slots_.size() && !pick; ++s) {
				if (ready(s)) {
					pick = s;
				}
			}
			assigned[*pick] = true;
			order_.push_back(*pick);
			checks_.emplace_back();
			for (std::size_t c : touching[*pick]) {
				if (--open[c] == 0) {
					checks_.back().push_back(c);
				}
			}
		}
	}

	bool holds(const Constraint& c) const {
		if (!c.operation) {
			return *value_[c.result] == *value_[c.other];
		}
		std::vector<std::string> mapped;
		for (std::size_t a : c.args) {
			mapped.push_back(*value_[a]);
		}
		const Value* applied = navigate(dst_.values[c.decl], mapped);
		return applied && applied->kind == Value::Kind::Elem && applied->label == *value_[c.result];
	}

	void search(std::size_t depth) {
		if (depth == 0) {
			for (std::size_t c : initial_checks_) {
				if (!holds(constraints_[c])) {
					return;
				}
			}
		}
		if (depth == order_.size()) {
			std::vector<std::string> labels;
			for (const auto* v : value_) {
				labels.push_back(*v);
			}
			found_.push_back(std::move(labels));
			return;
		}
		const Slot& slot = slots_[order_[depth]];
		std::vector<std::string> mapped;
		for (std::size_t d : slot.deps) {
			mapped.push_back(*value_[d]);
		}
		const Value* carrier = navigate(dst_.values[slot.decl], mapped);
		if (!carrier || carrier->kind != Value::Kind::Set) {
			return;
		}
		for (const auto& choice : carrier->carrier) {
			if (budget_) {
				if (*budget_ <= 0) {
					exhausted_ = true;
					return;
				}
				*budget_ -= 1;
			}
			value_[order_[depth]] = &choice;
			bool ok = true;
			for (std::size_t c : checks_[depth]) {
				if (!holds(constraints_[c])) {
					ok = false;
					break;
				}
			}
			if (ok) {
				search(depth + 1);
			}
			if (exhausted_) {
				return;
			}
		}
		value_[order_[depth]] = nullptr;
	}

	const FiniteModel& src_;
	const FiniteModel& dst_;
	std::vector<Slot> slots_;
	std::map<std::tuple<std::size_t, std::string, std::string>, std::size_t> index_;
	std::map<std::size_t, std::size_t> widest_;
	std::vector<Constraint> constraints_;
	std::vector<std::size_t> order_;
	std::vector<std::vector<std::size_t>> checks_;
	std::vector<std::size_t> initial_checks_;
	ModelMorphism skeleton_;
	std::vector<const std::string*> value_;
	std::vector<std::vector<std::string>> found_;
	std::optional<long double> budget_;
	bool exhausted_ = false;
};

} // namespace

std::vector<ModelMorphism> enumerate_morphisms(const FiniteModel& src, const FiniteModel& dst, long double cap) {
	Enumerator enumerator(src, dst);
	long double candidates = enumerator.candidates();
	// Beyond the cap the pruned search still runs, but may visit at most `cap` nodes.
	std::optional<long double> budget;
	if (candidates > cap) {
		budget = cap;
	}
	std::vector<ModelMorphism> out = enumerator.run(budget);
	if (enumerator.exhausted()) {
		throw SearchSpaceExceeded(candidates);
	}
	return out;
}

json morphism_to_json(const FiniteModel& src, const ModelMorphism& h) {
	json out = json::object();
	for (std::size_t i = 0; i < src.theory.size(); ++i) {
		if (src.theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		const auto& comp = h.components.at(i);
		if (decl_telescope(src.theory, i).binders.empty()) {
			auto it = comp.find("");
			out[src.theory.decl(i).name] = it == comp.end() ? json::object() : json(it->second);
		} else {
			json table = json::object();
			for (const auto& [key, map] : comp) {
				table[key] = map;
			}
			out[src.theory.decl(i).name] = std::move(table);
		}
	}
	return out;
}

} // namespace gatsort
