#include "gatsort/initial.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "gatsort/egraph.h"
#include "gatsort/error.h"
#include "gatsort/model_util.h"

namespace gatsort {

using nlohmann::json;

std::string term_label(const Expr& term) {
	std::string out = print_term(term);
	std::replace(out.begin(), out.end(), '(', '[');
	std::replace(out.begin(), out.end(), ')', ']');
	return out;
}

namespace {

using ClassId = EGraph::ClassId;

bool term_less(const Expr& a, const Expr& b) {
	std::size_t sa = term_size(a);
	std::size_t sb = term_size(b);
	if (sa != sb) {
		return sa < sb;
	}
	return print_term(a) < print_term(b);
}

struct ClassView {
	ClassId id;
	Expr representative;
	std::vector<Expr> members;
};

// Classes of `g` containing one of `terms`, ordered by representative.
std::vector<ClassView> classes_of(const EGraph& g, const std::vector<Expr>& terms) {
	std::map<ClassId, ClassView> by_root;
	for (const auto& t : terms) {
		auto c = g.lookup(t);
		if (!c) {
			continue;
		}
		auto [it, inserted] = by_root.try_emplace(*c, ClassView{*c, t, {}});
		it->second.members.push_back(t);
		if (term_less(t, it->second.representative)) {
			it->second.representative = t;
		}
	}
	std::vector<ClassView> out;
	for (auto& [_, view] : by_root) {
		out.push_back(std::move(view));
	}
	std::sort(out.begin(), out.end(),
	          [](const ClassView& a, const ClassView& b) { return term_less(a.representative, b.representative); });
	return out;
}

class Builder {
public:
	Builder(const CheckedTheory& omega, const ConvBudget& budget, std::size_t term_cap)
		: omega_(omega), budget_(budget), term_cap_(term_cap), graph_(Context(omega)) {
		for (std::size_t i = 0; i < omega.size(); ++i) {
			teles_.push_back(decl_telescope(omega, i));
		}
	}

	InitialModelResult run(std::size_t depth) {
		InitialModelResult r;
		bool fuel_out = false;
		for (std::size_t level = 1; level <= depth; ++level) {
			r.depth_used = level;
			std::vector<Expr> fresh_elements;
			std::vector<Expr> fresh_sorts;
			applications(graph_, classes_of(graph_, elements_), level, fresh_elements, fresh_sorts);
			add_all(graph_, fresh_elements, elements_);
			if (graph_.saturate(budget_.fuel) == EGraph::Status::FuelExhausted) {
				fuel_out = true;
				break;
			}
			fresh_elements.clear();
			applications(graph_, classes_of(graph_, elements_), 0, fresh_elements, fresh_sorts);
			add_all(graph_, fresh_sorts, sorts_);
			if (graph_.saturate(budget_.fuel) == EGraph::Status::FuelExhausted) {
				fuel_out = true;
				break;
			}
			auto closed = closure_certificate();
			if (!closed) {
				fuel_out = true;
				break;
			}
			if (*closed) {
				r.saturated = true;
				break;
			}
		}

		std::vector<ClassView> views = classes_of(graph_, elements_);
		if (fuel_out) {
			for (std::size_t a = 0; a < views.size(); ++a) {
				for (std::size_t b = a + 1; b < views.size(); ++b) {
					if (graph_.type_of(views[a].id) == graph_.type_of(views[b].id)) {
						r.indeterminate_pairs.emplace_back(views[a].representative, views[b].representative);
					}
				}
			}
		}
		for (const auto& v : views) {
			r.classes.push_back({v.representative, term_label(v.representative), v.members});
		}
		std::sort(r.classes.begin(), r.classes.end(),
		          [](const TermClass& a, const TermClass& b) { return a.label < b.label; });
		r.model = build_model(views);
		if (r.saturated) {
			check_model(r.model);
		}
		return r;
	}

private:
	// Well-typed applications of every operation (of size at most `level`, unless it is
	// zero) and every sort declaration to the given classes.
	void applications(EGraph& g, const std::vector<ClassView>& classes, std::size_t level,
	                  std::vector<Expr>& elements, std::vector<Expr>& sorts) {
		for (std::size_t i = 0; i < omega_.size(); ++i) {
			DeclClass cls = omega_.classification(i);
			if (cls != DeclClass::Sort && cls != DeclClass::Operation) {
				continue;
			}
			std::vector<Expr> args;
			tuples(g, classes, teles_[i], args, [&] {
				Expr term = app(var(omega_.decl(i).name), args);
				if (cls == DeclClass::Sort) {
					sorts.push_back(term);
				} else if (level == 0 || term_size(term) <= level) {
					elements.push_back(term);
				}
			});
		}
	}

	void tuples(EGraph& g, const std::vector<ClassView>& classes, const Telescope& tele, std::vector<Expr>& args,
	            const std::function<void()>& visit) {
		std::size_t k = args.size();
		if (k == tele.binders.size()) {
			visit();
			return;
		}
		Expr domain = tele.binders[k].second;
		for (std::size_t j = k; j-- > 0;) {
			domain = substitute(domain, tele.binders[j].first, args[j]);
		}
		auto sort = g.add(domain);
		if (!sort) {
			return;
		}
		ClassId want = g.find(*sort);
		for (const auto& c : classes) {
			if (g.type_of(c.id) != want) {
				continue;
			}
			args.push_back(c.representative);
			tuples(g, classes, tele, args, visit);
			args.pop_back();
		}
	}

	void add_all(EGraph& g, const std::vector<Expr>& terms, std::vector<Expr>& into) {
		for (const auto& t : terms) {
			if (!seen_.insert(print_term(t)).second) {
				continue;
			}
			if (!g.add(t)) {
				throw InvariantError("initial model: cannot represent the term " + print_term(t));
			}
			into.push_back(t);
			if (elements_.size() + sorts_.size() > term_cap_) {
				throw BudgetError("initial model: more than " + std::to_string(term_cap_) + " terms enumerated");
			}
		}
	}

	// Applies every operation and sort to every class on a copy of the graph. True when
	// that creates no class and merges none; nullopt when fuel runs out.
	std::optional<bool> closure_certificate() {
		EGraph probe = graph_;
		std::vector<ClassView> elements = classes_of(probe, elements_);
		std::vector<ClassView> sorts = classes_of(probe, sorts_);
		std::vector<Expr> more_elements;
		std::vector<Expr> more_sorts;
		applications(probe, elements, 0, more_elements, more_sorts);
		for (const auto& t : more_elements) {
			probe.add(t);
		}
		for (const auto& t : more_sorts) {
			probe.add(t);
		}
		if (probe.saturate(budget_.fuel) == EGraph::Status::FuelExhausted) {
			return std::nullopt;
		}
		auto stable = [&](const std::vector<ClassView>& old, const std::vector<Expr>& added) {
			std::set<ClassId> roots;
			for (const auto& v : old) {
				roots.insert(probe.find(v.id));
			}
			if (roots.size() != old.size()) {
				return false;
			}
			return std::all_of(added.begin(), added.end(), [&](const Expr& t) {
				auto c = probe.lookup(t);
				return c && roots.count(*c);
			});
		};
		return stable(elements, more_elements) && stable(sorts, more_sorts);
	}

	Value partial_table(const FiniteModel& m, Env& env, const Telescope& tele, std::vector<Expr>& args,
	                    const std::function<std::optional<Value>(const std::vector<Expr>&)>& leaf, bool& present) {
		std::size_t k = args.size();
		if (k == tele.binders.size()) {
			auto v = leaf(args);
			present = v.has_value();
			return v ? *v : Value::proof();
		}
		std::vector<FnEntry> table;
		for (const auto& label : carrier_of(m, env, small(tele.binders[k].second))) {
			env[tele.binders[k].first] = Value::elem(label);
			args.push_back(by_label_.at(label));
			bool inner = false;
			Value v = partial_table(m, env, tele, args, leaf, inner);
			if (inner) {
				table.push_back({label, std::move(v)});
			}
			args.pop_back();
		}
		env.erase(tele.binders[k].first);
		present = true;
		return Value::fn(std::move(table));
	}

	FiniteModel build_model(const std::vector<ClassView>& views) {
		std::map<ClassId, std::string> label_of;
		for (const auto& v : views) {
			label_of[v.id] = term_label(v.representative);
			by_label_[label_of[v.id]] = v.representative;
		}
		FiniteModel m;
		m.theory = omega_;
		for (std::size_t i = 0; i < omega_.size(); ++i) {
			const std::string& name = omega_.decl(i).name;
			const Telescope& tele = teles_[i];
			Env env;
			std::vector<Expr> args;
			bool present = false;
			switch (omega_.classification(i)) {
			case DeclClass::Sort:
				m.values.push_back(partial_table(m, env, tele, args, [&](const std::vector<Expr>& a) {
					std::vector<std::string> carrier;
					if (auto sort = graph_.lookup(app(var(name), a))) {
						for (const auto& v : views) {
							if (graph_.type_of(v.id) == *sort) {
								carrier.push_back(label_of.at(v.id));
							}
						}
					}
					std::sort(carrier.begin(), carrier.end());
					return std::optional<Value>(Value::set(std::move(carrier)));
				}, present));
				break;
			case DeclClass::Operation: {
				Value v = partial_table(m, env, tele, args, [&](const std::vector<Expr>& a) -> std::optional<Value> {
					auto c = graph_.lookup(app(var(name), a));
					if (!c || !label_of.count(*c)) {
						return std::nullopt;
					}
					return Value::elem(label_of.at(*c));
				}, present);
				m.values.push_back(present ? std::move(v) : Value::fn({}));
				break;
			}
			case DeclClass::Equation:
			case DeclClass::SortEquation:
				m.values.push_back(partial_table(m, env, tele, args, [](const std::vector<Expr>&) {
					return std::optional<Value>(Value::proof());
				}, present));
				break;
			}
		}
		return m;
	}

	CheckedTheory omega_;
	ConvBudget budget_;
	std::size_t term_cap_;
	EGraph graph_;
	std::vector<Telescope> teles_;
	std::vector<Expr> elements_;
	std::vector<Expr> sorts_;
	std::set<std::string> seen_;
	std::map<std::string, Expr> by_label_;
};

} // namespace

InitialModelResult initial_model_bounded(const CheckedTheory& omega, std::size_t depth, const ConvBudget& budget,
                                         std::size_t term_cap) {
	if (depth == 0) {
		throw DomainError("initial model: depth must be at least 1");
	}
	return Builder(omega, budget, term_cap).run(depth);
}

ModelMorphism initial_morphism(const InitialModelResult& r, const FiniteModel& target) {
	if (!r.saturated) {
		throw NotSaturated("initial model is not saturated at depth " + std::to_string(r.depth_used));
	}
	std::map<std::string, const TermClass*> by_label;
	for (const auto& c : r.classes) {
		by_label[c.label] = &c;
	}
	const CheckedTheory& theory = r.model.theory;
	ModelMorphism h;
	h.components.resize(theory.size());
	for (std::size_t i = 0; i < theory.size(); ++i) {
		if (theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		Telescope tele = decl_telescope(theory, i);
		for_each_instance(r.model, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			auto& component = h.components[i][join_key(labels)];
			for (const auto& label : navigate(r.model.values[i], labels)->carrier) {
				const TermClass& cls = *by_label.at(label);
				Value image = eval_term(target, {}, cls.representative);
				for (const auto& member : cls.members) {
					if (eval_term(target, {}, member) != image) {
						throw WellDefinednessError("initial morphism: " + print_term(member) + " and " +
						                           print_term(cls.representative) +
						                           " are identified but evaluate differently");
					}
				}
				component[label] = image.label;
			}
		});
	}
	check_morphism(r.model, target, h);
	return h;
}

json initial_report(const InitialModelResult& r) {
	json counts = json::object();
	const CheckedTheory& theory = r.model.theory;
	for (std::size_t i = 0; i < theory.size(); ++i) {
		if (theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		std::size_t n = 0;
		Telescope tele = decl_telescope(theory, i);
		for_each_instance(r.model, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			if (const Value* v = navigate(r.model.values[i], labels)) {
				n += v->carrier.size();
			}
		});
		counts[theory.decl(i).name] = n;
	}
	return json{{"depth_used", r.depth_used},
	            {"saturated", r.saturated},
	            {"classes", std::move(counts)},
	            {"indeterminate_pairs", r.indeterminate_pairs.size()}};
}

} // namespace gatsort
