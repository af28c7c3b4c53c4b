#include "gatsort/coreflect.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "gatsort/error.h"
#include "gatsort/model_util.h"

namespace gatsort {

using nlohmann::json;

std::string sort_tag(const std::string& sort, const std::vector<std::string>& indices) {
	return sort + "(" + join_key(indices) + ")";
}

std::vector<SortInstance> sort_instances(const FiniteModel& m) {
	std::vector<SortInstance> out;
	std::map<std::string, std::size_t> position;
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		if (m.theory.classification(i) != DeclClass::Sort) {
			continue;
		}
		Telescope tele = decl_telescope(m.theory, i);
		for_each_instance(m, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			std::string tag = sort_tag(m.theory.decl(i).name, labels);
			position[tag] = out.size();
			out.push_back({i, labels, tag, tag});
		});
	}

	std::vector<std::size_t> parent(out.size());
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](std::size_t x) {
		while (parent[x] != x) {
			x = parent[x] = parent[parent[x]];
		}
		return x;
	};
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		if (m.theory.classification(i) != DeclClass::SortEquation) {
			continue;
		}
		for_each_sort_equation_instance(m, i, [&](const Env&, const SortRef& lhs, const SortRef& rhs) {
			std::size_t a = find(position.at(sort_tag(m.theory.decl(lhs.decl).name, lhs.indices)));
			std::size_t b = find(position.at(sort_tag(m.theory.decl(rhs.decl).name, rhs.indices)));
			parent[std::max(a, b)] = std::min(a, b);
		});
	}
	for (std::size_t k = 0; k < out.size(); ++k) {
		out[k].representative = out[find(k)].tag;
	}
	return out;
}

FamilyObject family_of_model(const FiniteModel& m) {
	FamilyObject f;
	for (const auto& inst : sort_instances(m)) {
		if (inst.tag != inst.representative) {
			continue;
		}
		f.u.push_back(inst.tag);
		f.el[inst.tag] = navigate(m.values[inst.decl], inst.indices)->carrier;
	}
	std::sort(f.u.begin(), f.u.end());
	return f;
}

namespace {

std::string translated_source(const std::string& source) { return source.empty() ? "" : "T(" + source + ")"; }

std::string original_source(const std::string& source) {
	if (source.size() > 3 && source.rfind("T(", 0) == 0 && source.back() == ')') {
		return source.substr(2, source.size() - 3);
	}
	return "";
}

void put_family(FiniteModel& n, const FamilyObject& f) {
	n.values.push_back(Value::set(f.u));
	std::vector<FnEntry> table;
	for (const auto& u : f.u) {
		table.push_back({u, Value::set(f.el.at(u))});
	}
	n.values.push_back(Value::fn(std::move(table)));
}

// Model of the translated theory from a model of the original one, a family, and the
// U-element chosen for each sort instance.
FiniteModel assemble(const FiniteModel& m, const FamilyObject& f, const TranslationResult& t,
                     const std::function<std::string(const SortInstance&)>& choose) {
	FiniteModel n;
	n.theory = t.translated;
	n.source = translated_source(m.source);
	put_family(n, f);
	std::vector<SortInstance> instances = sort_instances(m);
	std::map<std::string, std::string> chosen;
	for (const auto& inst : instances) {
		chosen[inst.tag] = choose(inst);
	}
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		if (m.theory.classification(i) != DeclClass::Sort) {
			n.values.push_back(m.values[i]);
			continue;
		}
		Telescope tele = decl_telescope(m.theory, i);
		const std::string& name = m.theory.decl(i).name;
		n.values.push_back(tabulate(m, {}, tele.binders, [&](const Env&, const std::vector<std::string>& labels) {
			return Value::elem(chosen.at(sort_tag(name, labels)));
		}));
	}
	check_model(n);
	return n;
}

} // namespace

FiniteModel sortify_model(const FiniteModel& m, const TranslationResult& t) {
	return assemble(m, family_of_model(m), t, [](const SortInstance& inst) { return inst.representative; });
}

FiniteModel desortify_model(const FiniteModel& n, const TranslationResult& t) {
	FiniteModel m = apply_subst_model(t.coreflector, n);
	m.source = original_source(n.source);
	return m;
}

FamilyObject family_part(const FiniteModel& n, const TranslationResult& t) {
	FamilyObject f;
	f.u = n.value(t.prefix.u_name).carrier;
	const Value& el = n.value(t.prefix.el_name);
	for (const auto& entry : el.table) {
		f.el[entry.key] = entry.value.carrier;
	}
	return f;
}

void check_cartesian(const FamilyObject& source, const FamilyObject& target, const FamilyMorphism& f) {
	for (const auto& u : source.u) {
		auto base = f.base.find(u);
		if (base == f.base.end()) {
			throw CartesianViolation("family morphism does not map '" + u + "'");
		}
		auto to = target.el.find(base->second);
		if (to == target.el.end()) {
			throw CartesianViolation("'" + u + "' is sent to '" + base->second + "', which is not in the target family");
		}
		const auto& from = source.el.at(u);
		if (from != to->second) {
			throw CartesianViolation("fiber over '" + u + "' is not identical to the fiber over '" + base->second + "'");
		}
		auto fiber = f.fibers.find(u);
		if (fiber == f.fibers.end() || fiber->second.size() != from.size()) {
			throw CartesianViolation("fiber map over '" + u + "' is not total");
		}
		for (const auto& [x, y] : fiber->second) {
			if (x != y) {
				throw CartesianViolation("fiber map over '" + u + "' sends '" + x + "' to '" + y + "'");
			}
		}
	}
	if (f.base.size() != source.u.size()) {
		throw CartesianViolation("family morphism maps elements outside its source");
	}
}

namespace {

FamilyMorphism identity_fibers(const FamilyObject& source, std::map<std::string, std::string> base) {
	FamilyMorphism f;
	f.base = std::move(base);
	for (const auto& u : source.u) {
		auto& fiber = f.fibers[u];
		for (const auto& x : source.el.at(u)) {
			fiber[x] = x;
		}
	}
	f.cartesian = true;
	return f;
}

} // namespace

CommaObject comma_of_model(const FiniteModel& n, const TranslationResult& t) {
	CommaObject c;
	c.model = desortify_model(n, t);
	c.family = family_part(n, t);
	std::map<std::string, std::string> base;
	for (const auto& inst : sort_instances(c.model)) {
		if (inst.tag != inst.representative) {
			continue;
		}
		const Value& sort = n.value(c.model.theory.decl(inst.decl).name);
		base[inst.tag] = navigate(sort, inst.indices)->label;
	}
	FamilyObject source = family_of_model(c.model);
	c.map = identity_fibers(source, std::move(base));
	check_cartesian(source, c.family, c.map);
	return c;
}

FiniteModel model_of_comma(const CommaObject& c, const TranslationResult& t) {
	FamilyObject source = family_of_model(c.model);
	try {
		check_cartesian(source, c.family, c.map);
	} catch (const CartesianViolation& e) {
		throw InvariantError(e.what());
	}
	return assemble(c.model, c.family, t, [&](const SortInstance& inst) { return c.map.base.at(inst.representative); });
}

json family_to_json(const FamilyObject& f) {
	json el = json::object();
	for (const auto& [u, fiber] : f.el) {
		el[u] = fiber;
	}
	return json{{"U", f.u}, {"El", std::move(el)}};
}

namespace {

std::vector<std::string> labels_from_json(const json& j, const std::string& where) {
	if (!j.is_array()) {
		throw ShapeError(where + ": expected an array of labels");
	}
	std::vector<std::string> out;
	for (const auto& item : j) {
		if (!item.is_string() || !valid_label(item.get<std::string>())) {
			throw ShapeError(where + ": invalid label");
		}
		out.push_back(item.get<std::string>());
	}
	std::sort(out.begin(), out.end());
	if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
		throw ShapeError(where + ": duplicate label");
	}
	return out;
}

} // namespace

FamilyObject family_from_json(const json& j) {
	if (!j.is_object() || !j.contains("U") || !j.contains("El") || !j.at("El").is_object() || j.size() != 2) {
		throw ShapeError("a family needs exactly the fields 'U' and 'El'");
	}
	FamilyObject f;
	f.u = labels_from_json(j.at("U"), "family U");
	const json& el = j.at("El");
	for (const auto& u : f.u) {
		if (!el.contains(u)) {
			throw TotalityError("family has no fiber over '" + u + "'");
		}
		f.el[u] = labels_from_json(el.at(u), "fiber over '" + u + "'");
	}
	if (el.size() != f.u.size()) {
		throw ShapeError("family has a fiber over an element outside U");
	}
	return f;
}

json comma_to_json(const CommaObject& c) {
	return json{{"model", model_to_json(c.model)}, {"family", family_to_json(c.family)}, {"map", c.map.base}};
}

CommaObject comma_from_json(const CheckedTheory& theory, const json& j) {
	if (!j.is_object() || !j.contains("model") || !j.contains("family") || !j.contains("map") || j.size() != 3) {
		throw ShapeError("a comma object needs exactly the fields 'model', 'family' and 'map'");
	}
	CommaObject c;
	c.model = model_from_json(theory, j.at("model"));
	check_model(c.model);
	c.family = family_from_json(j.at("family"));
	const json& map = j.at("map");
	if (!map.is_object()) {
		throw ShapeError("'map' must be an object");
	}
	std::map<std::string, std::string> base;
	for (const auto& [key, value] : map.items()) {
		if (!value.is_string()) {
			throw ShapeError("'map' values must be labels");
		}
		base[key] = value.get<std::string>();
	}
	c.map = identity_fibers(family_of_model(c.model), std::move(base));
	return c;
}

namespace {

std::string morphism_key(const FiniteModel& src, const ModelMorphism& h) { return morphism_to_json(src, h).dump(); }

} // namespace

AdjunctionReport adjunction_check(const FiniteModel& m, const FiniteModel& n, const TranslationResult& t,
                                  long double cap) {
	AdjunctionReport report;
	FiniteModel lm = sortify_model(m, t);
	FiniteModel rn = desortify_model(n, t);
	report.unit_identity = canonical(desortify_model(lm, t)) == canonical(m);

	std::vector<ModelMorphism> translated = enumerate_morphisms(lm, n, cap);
	std::vector<ModelMorphism> original = enumerate_morphisms(m, rn, cap);
	report.hom_translated = translated.size();
	report.hom_original = original.size();

	std::map<std::string, std::size_t> index;
	for (std::size_t k = 0; k < original.size(); ++k) {
		index[morphism_key(m, original[k])] = k;
	}
	std::size_t el = *t.translated.index_of(t.prefix.el_name);
	std::vector<SortInstance> instances = sort_instances(m);
	std::set<std::size_t> hit;
	bool all_found = true;
	for (const auto& h : translated) {
		// The transpose of h: its fiber maps, read at the tag of each sort instance.
		ModelMorphism k;
		k.components.resize(m.theory.size());
		for (const auto& inst : instances) {
			k.components[inst.decl][join_key(inst.indices)] = h.components[el].at(inst.representative);
		}
		auto it = index.find(morphism_key(m, k));
		if (it == index.end()) {
			all_found = false;
			report.image.push_back(original.size());
			continue;
		}
		report.image.push_back(it->second);
		hit.insert(it->second);
	}
	report.bijective = all_found && hit.size() == translated.size() && hit.size() == original.size();
	return report;
}

json report_to_json(const AdjunctionReport& r) {
	return json{{"hom_translated", r.hom_translated},
	            {"hom_original", r.hom_original},
	            {"image", r.image},
	            {"bijective", r.bijective},
	            {"unit_identity", r.unit_identity}};
}

} // namespace gatsort
