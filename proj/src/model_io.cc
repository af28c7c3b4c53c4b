#include <algorithm>
#include <set>

#include "gatsort/error.h"
#include "gatsort/model_util.h"
#include "gatsort/models.h"

namespace gatsort {

using nlohmann::json;

namespace {

Value carrier_from_json(const json& j, const std::string& where) {
	if (!j.is_array()) {
		throw ShapeError(where + ": expected an array of element labels");
	}
	std::vector<std::string> labels;
	for (const auto& item : j) {
		if (!item.is_string()) {
			throw ShapeError(where + ": element labels must be strings");
		}
		std::string label = item.get<std::string>();
		if (!valid_label(label)) {
			throw ShapeError(where + ": invalid element label '" + label + "'");
		}
		labels.push_back(std::move(label));
	}
	std::sort(labels.begin(), labels.end());
	if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
		throw ShapeError(where + ": duplicate element label");
	}
	return Value::set(std::move(labels));
}

Value op_from_json(const FiniteModel& m, const Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
                   std::size_t k, const json& j, const std::string& where) {
	if (k == binders.size()) {
		if (!j.is_string()) {
			throw ShapeError(where + ": expected an element label");
		}
		return Value::elem(j.get<std::string>());
	}
	if (!j.is_object()) {
		throw ShapeError(where + ": expected a table keyed by elements of " + print_term(binders[k].second));
	}
	auto carrier = carrier_of(m, env, small(binders[k].second));
	std::vector<FnEntry> table;
	Env inner = env;
	for (const auto& label : carrier) {
		auto it = j.find(label);
		if (it == j.end()) {
			throw TotalityError(where + ": no entry for '" + label + "'");
		}
		inner[binders[k].first] = Value::elem(label);
		table.push_back({label, op_from_json(m, inner, binders, k + 1, *it, where + " at " + label)});
	}
	for (const auto& [key, _] : j.items()) {
		if (!std::binary_search(carrier.begin(), carrier.end(), key)) {
			throw ShapeError(where + ": entry for '" + key + "' outside the domain");
		}
	}
	return Value::fn(std::move(table));
}

void flatten_sort(const Value& v, std::vector<std::string>& labels, json& out) {
	if (v.kind == Value::Kind::Set) {
		out[join_key(labels)] = v.carrier;
		return;
	}
	for (const auto& entry : v.table) {
		labels.push_back(entry.key);
		flatten_sort(entry.value, labels, out);
		labels.pop_back();
	}
}

json op_to_json(const Value& v) {
	if (v.kind == Value::Kind::Elem) {
		return v.label;
	}
	json out = json::object();
	for (const auto& entry : v.table) {
		out[entry.key] = op_to_json(entry.value);
	}
	return out;
}

} // namespace

FiniteModel model_from_json(const CheckedTheory& theory, const json& j) {
	if (!j.is_object()) {
		throw ShapeError("a model must be a JSON object");
	}
	for (const auto& [key, _] : j.items()) {
		if (key != "theory" && key != "sorts" && key != "ops") {
			throw ShapeError("unknown model field '" + key + "'");
		}
	}
	FiniteModel m;
	m.theory = theory;
	if (auto it = j.find("theory"); it != j.end()) {
		if (!it->is_string()) {
			throw ShapeError("'theory' must be a string");
		}
		m.source = it->get<std::string>();
	}
	const json empty = json::object();
	const json& sorts = j.contains("sorts") ? j.at("sorts") : empty;
	const json& ops = j.contains("ops") ? j.at("ops") : empty;
	if (!sorts.is_object() || !ops.is_object()) {
		throw ShapeError("'sorts' and 'ops' must be objects");
	}
	std::set<std::string> used_sorts;
	std::set<std::string> used_ops;

	for (std::size_t i = 0; i < theory.size(); ++i) {
		const std::string& name = theory.decl(i).name;
		Telescope tele = decl_telescope(theory, i);
		std::string where = "'" + name + "'";
		switch (theory.classification(i)) {
		case DeclClass::Sort: {
			auto it = sorts.find(name);
			if (it == sorts.end()) {
				throw TotalityError("no carrier for sort " + where);
			}
			used_sorts.insert(name);
			if (tele.binders.empty()) {
				m.values.push_back(carrier_from_json(*it, where));
				break;
			}
			if (!it->is_object()) {
				throw ShapeError(where + ": an indexed sort needs an object keyed by index tuples");
			}
			std::size_t seen = 0;
			m.values.push_back(tabulate(m, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
				std::string key = join_key(labels);
				auto entry = it->find(key);
				if (entry == it->end()) {
					throw TotalityError(where + ": no carrier for index '" + key + "'");
				}
				++seen;
				return carrier_from_json(*entry, where + " at " + key);
			}));
			if (seen != it->size()) {
				throw ShapeError(where + ": carrier given for an index outside the domain");
			}
			break;
		}
		case DeclClass::Operation: {
			auto it = ops.find(name);
			if (it == ops.end()) {
				throw TotalityError("no table for operation " + where);
			}
			used_ops.insert(name);
			m.values.push_back(op_from_json(m, {}, tele.binders, 0, *it, where));
			break;
		}
		case DeclClass::Equation:
		case DeclClass::SortEquation:
			m.values.push_back(tabulate(m, {}, tele.binders, [](const Env&, const std::vector<std::string>&) {
				return Value::proof();
			}));
			break;
		}
	}
	for (const auto& [key, _] : sorts.items()) {
		if (!used_sorts.count(key)) {
			throw ShapeError("'sorts' names '" + key + "', which is not a sort declaration");
		}
	}
	for (const auto& [key, _] : ops.items()) {
		if (!used_ops.count(key)) {
			throw ShapeError("'ops' names '" + key + "', which is not an operation declaration");
		}
	}
	return m;
}

json model_to_json(const FiniteModel& m) {
	json sorts = json::object();
	json ops = json::object();
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		const std::string& name = m.theory.decl(i).name;
		const Value& v = m.values.at(i);
		switch (m.theory.classification(i)) {
		case DeclClass::Sort:
			if (v.kind == Value::Kind::Set) {
				sorts[name] = v.carrier;
			} else {
				json table = json::object();
				std::vector<std::string> labels;
				flatten_sort(v, labels, table);
				sorts[name] = std::move(table);
			}
			break;
		case DeclClass::Operation:
			ops[name] = op_to_json(v);
			break;
		default:
			break;
		}
	}
	json out = json::object();
	if (!m.source.empty()) {
		out["theory"] = m.source;
	}
	out["sorts"] = std::move(sorts);
	out["ops"] = std::move(ops);
	return out;
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

std::string canonical(const FiniteModel& m) { return canonical(model_to_json(m)); }

} // namespace gatsort
