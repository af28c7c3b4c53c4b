#include "gatsort/models.h"

#include <algorithm>
#include <limits>

#include "gatsort/error.h"
#include "gatsort/model_util.h"

namespace gatsort {

Value Value::set(std::vector<std::string> carrier) {
	Value v;
	v.kind = Kind::Set;
	v.carrier = std::move(carrier);
	return v;
}

Value Value::elem(std::string label) {
	Value v;
	v.kind = Kind::Elem;
	v.label = std::move(label);
	return v;
}

Value Value::fn(std::vector<FnEntry> table) {
	Value v;
	v.kind = Kind::Fn;
	v.table = std::move(table);
	return v;
}

Value Value::proof() { return Value{}; }

const Value* Value::at(const std::string& key) const {
	auto it = std::lower_bound(table.begin(), table.end(), key,
	                           [](const FnEntry& entry, const std::string& k) { return entry.key < k; });
	if (it == table.end() || it->key != key) {
		return nullptr;
	}
	return &it->value;
}

bool Value::operator==(const Value& other) const {
	if (kind != other.kind) {
		return false;
	}
	switch (kind) {
	case Kind::Set:
		return carrier == other.carrier;
	case Kind::Elem:
		return label == other.label;
	case Kind::Proof:
		return true;
	case Kind::Fn:
		if (table.size() != other.table.size()) {
			return false;
		}
		for (std::size_t i = 0; i < table.size(); ++i) {
			if (table[i].key != other.table[i].key || table[i].value != other.table[i].value) {
				return false;
			}
		}
		return true;
	}
	return false;
}

std::string describe(const Value& value) {
	switch (value.kind) {
	case Value::Kind::Set: {
		std::string out = "{";
		for (std::size_t i = 0; i < value.carrier.size(); ++i) {
			out += (i ? ", " : "") + value.carrier[i];
		}
		return out + "}";
	}
	case Value::Kind::Elem:
		return "'" + value.label + "'";
	case Value::Kind::Proof:
		return "proof";
	case Value::Kind::Fn: {
		std::string out = "[";
		for (std::size_t i = 0; i < value.table.size(); ++i) {
			out += (i ? ", " : "") + value.table[i].key + " -> " + describe(value.table[i].value);
		}
		return out + "]";
	}
	}
	return "?";
}

namespace {

bool parse_label(std::string_view s, std::size_t& i) {
	std::size_t start = i;
	while (i < s.size() && s[i] != ',' && s[i] != '(' && s[i] != ')') {
		++i;
	}
	if (i == start) {
		return false;
	}
	if (i == s.size() || s[i] != '(') {
		return true;
	}
	++i;
	if (i < s.size() && s[i] == ')') {
		++i;
		return true;
	}
	while (true) {
		if (!parse_label(s, i) || i == s.size()) {
			return false;
		}
		if (s[i] == ')') {
			++i;
			return true;
		}
		if (s[i] != ',') {
			return false;
		}
		++i;
	}
}

} // namespace

bool valid_label(std::string_view label) {
	std::size_t i = 0;
	return parse_label(label, i) && i == label.size();
}

std::string join_key(const std::vector<std::string>& labels) {
	std::string out;
	for (std::size_t i = 0; i < labels.size(); ++i) {
		if (i) {
			out += ',';
		}
		out += labels[i];
	}
	return out;
}

std::vector<std::string> split_key(std::string_view key) {
	std::vector<std::string> parts;
	std::size_t depth = 0;
	std::size_t start = 0;
	for (std::size_t i = 0; i < key.size(); ++i) {
		if (key[i] == '(') {
			++depth;
		} else if (key[i] == ')') {
			depth = depth ? depth - 1 : 0;
		} else if (key[i] == ',' && depth == 0) {
			parts.emplace_back(key.substr(start, i - start));
			start = i + 1;
		}
	}
	parts.emplace_back(key.substr(start));
	return parts;
}

const Value& FiniteModel::value(const std::string& name) const {
	auto i = theory.index_of(name);
	if (!i || *i >= values.size()) {
		throw DomainError("no value for '" + name + "'");
	}
	return values[*i];
}

Value eval_term(const FiniteModel& m, const Env& env, const Expr& term) {
	switch (term->kind) {
	case Kind::Var: {
		if (auto it = env.find(term->name); it != env.end()) {
			return it->second;
		}
		return m.value(term->name);
	}
	case Kind::App: {
		Value fn = eval_term(m, env, term->first);
		Value arg = eval_term(m, env, term->second);
		if (fn.kind != Value::Kind::Fn || arg.kind != Value::Kind::Elem) {
			throw DomainError("cannot apply '" + print_term(term->first) + "' to '" + print_term(term->second) + "'");
		}
		const Value* result = fn.at(arg.label);
		if (!result) {
			throw DomainError("'" + arg.label + "' is outside the table of '" + print_term(term->first) + "'");
		}
		return *result;
	}
	case Kind::Lam: {
		Value domain = eval_term(m, env, term->first);
		if (domain.kind != Value::Kind::Set) {
			throw DomainError("lambda domain '" + print_term(term->first) + "' is not a set");
		}
		std::vector<FnEntry> table;
		Env inner = env;
		for (const auto& label : domain.carrier) {
			inner[term->name] = Value::elem(label);
			table.push_back({label, eval_term(m, inner, term->second)});
		}
		return Value::fn(std::move(table));
	}
	case Kind::Refl:
		return Value::proof();
	default:
		throw DomainError("cannot evaluate the type '" + print_type(term) + "'");
	}
}

std::vector<std::string> carrier_of(const FiniteModel& m, const Env& env, const Expr& small_type) {
	if (small_type->kind != Kind::Small) {
		throw ShapeError("'" + print(small_type) + "' is not a small type");
	}
	Value v = eval_term(m, env, small_type->first);
	if (v.kind != Value::Kind::Set) {
		throw ShapeError("'" + print_term(small_type->first) + "' does not denote a set");
	}
	return v.carrier;
}

namespace {

void instances_from(const FiniteModel& m, Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
                    std::size_t k, std::vector<std::string>& labels,
                    const std::function<void(const Env&, const std::vector<std::string>&)>& visit) {
	if (k == binders.size()) {
		visit(env, labels);
		return;
	}
	const auto& [name, domain] = binders[k];
	std::vector<std::string> carrier = carrier_of(m, env, small(domain));
	std::optional<Value> saved;
	if (auto it = env.find(name); it != env.end()) {
		saved = it->second;
	}
	for (const auto& label : carrier) {
		env[name] = Value::elem(label);
		labels.push_back(label);
		instances_from(m, env, binders, k + 1, labels, visit);
		labels.pop_back();
	}
	if (saved) {
		env[name] = *saved;
	} else {
		env.erase(name);
	}
}

} // namespace

void for_each_instance(const FiniteModel& m, const Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
                       const std::function<void(const Env&, const std::vector<std::string>&)>& visit) {
	Env scratch = env;
	std::vector<std::string> labels;
	instances_from(m, scratch, binders, 0, labels, visit);
}

Value tabulate(const FiniteModel& m, const Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
               const std::function<Value(const Env&, const std::vector<std::string>&)>& leaf) {
	std::function<Value(Env&, std::size_t, std::vector<std::string>&)> go = [&](Env& e, std::size_t k,
	                                                                           std::vector<std::string>& labels) {
		if (k == binders.size()) {
			return leaf(e, labels);
		}
		const auto& [name, domain] = binders[k];
		std::vector<FnEntry> table;
		for (const auto& label : carrier_of(m, e, small(domain))) {
			Env inner = e;
			inner[name] = Value::elem(label);
			labels.push_back(label);
			table.push_back({label, go(inner, k + 1, labels)});
			labels.pop_back();
		}
		return Value::fn(std::move(table));
	};
	Env scratch = env;
	std::vector<std::string> labels;
	return go(scratch, 0, labels);
}

const Value* navigate(const Value& v, const std::vector<std::string>& labels) {
	const Value* cur = &v;
	for (const auto& label : labels) {
		if (cur->kind != Value::Kind::Fn) {
			return nullptr;
		}
		cur = cur->at(label);
		if (!cur) {
			return nullptr;
		}
	}
	return cur;
}

Telescope decl_telescope(const CheckedTheory& theory, std::size_t i) {
	return peel_pi(normalize(theory.decl(i).type, std::numeric_limits<std::size_t>::max()));
}

std::string describe_instance(const std::vector<std::pair<std::string, Expr>>& binders,
                              const std::vector<std::string>& labels) {
	std::string out;
	for (std::size_t k = 0; k < labels.size(); ++k) {
		out += (k ? ", " : "") + binders[k].first + " = " + labels[k];
	}
	return out.empty() ? "no binders" : out;
}

std::optional<std::string> equation_failure(const FiniteModel& m, std::size_t i) {
	Telescope tele = decl_telescope(m.theory, i);
	std::optional<std::string> failure;
	for_each_instance(m, {}, tele.binders, [&](const Env& env, const std::vector<std::string>& labels) {
		if (failure) {
			return;
		}
		Value l = eval_term(m, env, tele.body->first);
		Value r = eval_term(m, env, tele.body->second);
		if (l != r) {
			failure = "equation '" + m.theory.decl(i).name + "' fails at " + describe_instance(tele.binders, labels) +
			          ": left side is " + describe(l) + ", right side is " + describe(r);
		}
	});
	return failure;
}

SortRef resolve_sort(const FiniteModel& m, const Env& env, const Expr& sort_term) {
	Expr t = normalize(sort_term, std::numeric_limits<std::size_t>::max());
	const Expr& head = spine_head(t);
	std::optional<std::size_t> decl;
	if (head->kind == Kind::Var && !env.count(head->name)) {
		decl = m.theory.index_of(head->name);
	}
	if (!decl || m.theory.classification(*decl) != DeclClass::Sort) {
		throw DomainError("'" + print_term(sort_term) + "' is not headed by a sort declaration");
	}
	SortRef ref{*decl, {}};
	for (const auto& arg : spine_args(t)) {
		Value v = eval_term(m, env, arg);
		if (v.kind != Value::Kind::Elem) {
			throw DomainError("index '" + print_term(arg) + "' is not an element");
		}
		ref.indices.push_back(v.label);
	}
	return ref;
}

void for_each_sort_equation_instance(const FiniteModel& m, std::size_t i,
                                     const std::function<void(const Env&, const SortRef&, const SortRef&)>& visit) {
	Telescope tele = decl_telescope(m.theory, i);
	std::vector<std::pair<std::string, Expr>> binders = tele.binders;
	Expr lhs = tele.body->first;
	Expr rhs = tele.body->second;
	Expr at = tele.body->third;
	std::set<std::string> avoid = all_names(m.theory.theory());
	while (at->kind == Kind::Pi) {
		std::string x = fresh_name("x", avoid);
		avoid.insert(x);
		binders.emplace_back(x, at->first);
		lhs = app(lhs, var(x));
		rhs = app(rhs, var(x));
		at = substitute(at->second, at->name, var(x));
	}
	for_each_instance(m, {}, binders, [&](const Env& env, const std::vector<std::string>&) {
		visit(env, resolve_sort(m, env, lhs), resolve_sort(m, env, rhs));
	});
}

namespace {

void check_set(const Value& v, const std::string& where) {
	if (v.kind != Value::Kind::Set) {
		throw ShapeError(where + ": expected a set, found " + describe(v));
	}
	for (std::size_t k = 0; k < v.carrier.size(); ++k) {
		if (!valid_label(v.carrier[k])) {
			throw ShapeError(where + ": invalid element label '" + v.carrier[k] + "'");
		}
		if (k && v.carrier[k - 1] >= v.carrier[k]) {
			throw ShapeError(where + ": carrier is not sorted or has duplicates");
		}
	}
}

void check_value(const FiniteModel& m, Env& env, const Expr& type, const Value& v, const std::string& where) {
	switch (type->kind) {
	case Kind::Set:
		check_set(v, where);
		return;
	case Kind::Small: {
		if (v.kind != Value::Kind::Elem) {
			throw ShapeError(where + ": expected an element, found " + describe(v));
		}
		auto carrier = carrier_of(m, env, type);
		if (!std::binary_search(carrier.begin(), carrier.end(), v.label)) {
			throw ShapeError(where + ": '" + v.label + "' is not an element of " + print_term(type->first));
		}
		return;
	}
	case Kind::Pi: {
		if (v.kind != Value::Kind::Fn) {
			throw ShapeError(where + ": expected a table, found " + describe(v));
		}
		auto carrier = carrier_of(m, env, small(type->first));
		for (const auto& label : carrier) {
			if (!v.at(label)) {
				throw TotalityError(where + ": no entry for '" + label + "'");
			}
		}
		if (v.table.size() != carrier.size()) {
			for (const auto& entry : v.table) {
				if (!std::binary_search(carrier.begin(), carrier.end(), entry.key)) {
					throw ShapeError(where + ": entry for '" + entry.key + "' outside the domain");
				}
			}
			throw ShapeError(where + ": table is not sorted or has duplicate keys");
		}
		std::optional<Value> saved;
		if (auto it = env.find(type->name); it != env.end()) {
			saved = it->second;
		}
		for (const auto& entry : v.table) {
			env[type->name] = Value::elem(entry.key);
			check_value(m, env, type->second, entry.value, where + " at " + entry.key);
		}
		if (saved) {
			env[type->name] = *saved;
		} else {
			env.erase(type->name);
		}
		return;
	}
	case Kind::Eq:
		if (v.kind != Value::Kind::Proof) {
			throw ShapeError(where + ": expected a proof, found " + describe(v));
		}
		return;
	default:
		throw ShapeError(where + ": not a type");
	}
}

} // namespace

void check_model(const FiniteModel& m) {
	if (m.values.size() != m.theory.size()) {
		throw ShapeError("model has " + std::to_string(m.values.size()) + " values for " +
		                 std::to_string(m.theory.size()) + " declarations");
	}
	for (std::size_t i = 0; i < m.theory.size(); ++i) {
		const Decl& decl = m.theory.decl(i);
		Env env;
		check_value(m, env, normalize(decl.type, std::numeric_limits<std::size_t>::max()), m.values[i],
		            "'" + decl.name + "'");
		DeclClass cls = m.theory.classification(i);
		if (cls == DeclClass::Equation || cls == DeclClass::SortEquation) {
			if (auto failure = equation_failure(m, i)) {
				throw EquationError(*failure);
			}
		}
	}
}

FiniteModel apply_subst_model(const Substitution& s, const FiniteModel& m) {
	FiniteModel out;
	out.theory = s.target;
	for (const auto& assignment : s.assignments) {
		out.values.push_back(eval_term(m, {}, assignment));
	}
	check_model(out);
	return out;
}

namespace {

class Generator {
public:
	Generator(const CheckedTheory& theory, std::mt19937_64& rng, std::size_t max_carrier, std::size_t budget)
		: rng_(rng), budget_(budget) {
		model_.theory = theory;
		for (std::size_t k = 0; k < max_carrier; ++k) {
			pool_.push_back("x" + std::to_string(k));
		}
	}

	std::optional<FiniteModel> run() {
		if (fill(0)) {
			return model_;
		}
		return std::nullopt;
	}

private:
	bool spend() {
		if (budget_ == 0) {
			return false;
		}
		--budget_;
		return true;
	}

	Value random_carrier() {
		std::uniform_int_distribution<std::size_t> size(0, pool_.size());
		std::vector<std::string> labels = pool_;
		std::shuffle(labels.begin(), labels.end(), rng_);
		labels.resize(size(rng_));
		std::sort(labels.begin(), labels.end());
		return Value::set(std::move(labels));
	}

	bool fill(std::size_t i) {
		const CheckedTheory& theory = model_.theory;
		if (i == theory.size()) {
			return true;
		}
		if (!spend()) {
			return false;
		}
		Telescope tele = decl_telescope(theory, i);
		switch (theory.classification(i)) {
		case DeclClass::Sort:
			for (int attempt = 0; attempt < 10; ++attempt) {
				model_.values.push_back(
					tabulate(model_, {}, tele.binders, [&](const Env&, const std::vector<std::string>&) {
						return random_carrier();
					}));
				if (fill(i + 1)) {
					return true;
				}
				model_.values.pop_back();
				if (budget_ == 0) {
					return false;
				}
			}
			return false;
		case DeclClass::Operation: {
			std::vector<std::vector<std::string>> keys;
			std::vector<std::vector<std::string>> choices;
			bool empty = false;
			for_each_instance(model_, {}, tele.binders, [&](const Env& env, const std::vector<std::string>& labels) {
				auto carrier = carrier_of(model_, env, tele.body);
				empty = empty || carrier.empty();
				std::shuffle(carrier.begin(), carrier.end(), rng_);
				keys.push_back(labels);
				choices.push_back(std::move(carrier));
			});
			if (empty) {
				return false;
			}
			std::vector<std::size_t> picks(keys.size(), 0);
			return fill_table(i, tele, keys, choices, picks, 0);
		}
		case DeclClass::Equation:
		case DeclClass::SortEquation:
			model_.values.push_back(tabulate(model_, {}, tele.binders, [](const Env&, const std::vector<std::string>&) {
				return Value::proof();
			}));
			if (!equation_failure(model_, i) && fill(i + 1)) {
				return true;
			}
			model_.values.pop_back();
			return false;
		}
		return false;
	}

	bool fill_table(std::size_t i, const Telescope& tele, const std::vector<std::vector<std::string>>& keys,
	                const std::vector<std::vector<std::string>>& choices, std::vector<std::size_t>& picks,
	                std::size_t cell) {
		if (cell == keys.size()) {
			std::size_t next = 0;
			model_.values.push_back(tabulate(model_, {}, tele.binders, [&](const Env&, const std::vector<std::string>&) {
				std::size_t c = next++;
				return Value::elem(choices[c][picks[c]]);
			}));
			if (fill(i + 1)) {
				return true;
			}
			model_.values.pop_back();
			return false;
		}
		for (std::size_t k = 0; k < choices[cell].size(); ++k) {
			if (!spend()) {
				return false;
			}
			picks[cell] = k;
			if (fill_table(i, tele, keys, choices, picks, cell + 1)) {
				return true;
			}
		}
		return false;
	}

	std::mt19937_64& rng_;
	std::size_t budget_;
	std::vector<std::string> pool_;
	FiniteModel model_;
};

} // namespace

std::optional<FiniteModel> random_model(const CheckedTheory& theory, std::mt19937_64& rng, std::size_t max_carrier,
                                        std::size_t node_budget) {
	return Generator(theory, rng, max_carrier, node_budget).run();
}

} // namespace gatsort
