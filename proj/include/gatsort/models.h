#ifndef GATSORT_MODELS_H
#define GATSORT_MODELS_H

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gatsort/kernel.h"

namespace gatsort {

struct FnEntry;

// Interpretation of a term or declaration in a finite model.
struct Value {
	enum class Kind { Set, Elem, Fn, Proof };

	Kind kind = Kind::Proof;
	std::vector<std::string> carrier; // Set, sorted
	std::string label;                // Elem
	std::vector<FnEntry> table;       // Fn, sorted by key

	static Value set(std::vector<std::string> carrier);
	static Value elem(std::string label);
	static Value fn(std::vector<FnEntry> table);
	static Value proof();

	const Value* at(const std::string& key) const;
	bool operator==(const Value& other) const;
	bool operator!=(const Value& other) const { return !(*this == other); }
};

struct FnEntry {
	std::string key;
	Value value;
};

std::string describe(const Value& value);

// Labels are atoms (nonempty, without ',', '(' or ')') or tags `S(l1,...,ln)` whose
// arguments are labels. This keeps comma-joined index keys unambiguous.
bool valid_label(std::string_view label);
std::string join_key(const std::vector<std::string>& labels);
std::vector<std::string> split_key(std::string_view key);

struct FiniteModel {
	CheckedTheory theory;
	std::vector<Value> values; // one per declaration
	std::string source;        // informational "theory" field of the model file

	const Value& value(const std::string& name) const;
};

using Env = std::map<std::string, Value>;

Value eval_term(const FiniteModel& m, const Env& env, const Expr& term);

// Elements of a small type, or nullopt for Set.
std::vector<std::string> carrier_of(const FiniteModel& m, const Env& env, const Expr& small_type);

// Every assignment of elements to the binders of a telescope, in lexicographic order.
void for_each_instance(const FiniteModel& m, const Env& env, const std::vector<std::pair<std::string, Expr>>& binders,
                       const std::function<void(const Env&, const std::vector<std::string>&)>& visit);

// Throws ShapeError, TotalityError or EquationError.
void check_model(const FiniteModel& m);

FiniteModel model_from_json(const CheckedTheory& theory, const nlohmann::json& json);
nlohmann::json model_to_json(const FiniteModel& m);
// Two-space indentation, sorted keys, trailing newline.
std::string canonical(const nlohmann::json& json);
std::string canonical(const FiniteModel& m);

// Model of the substitution's target obtained by evaluating each assignment in `m`.
FiniteModel apply_subst_model(const Substitution& s, const FiniteModel& m);

// A random model with carriers drawn from labels x0, x1, ... (at most `max_carrier` per
// sort). Equations are satisfied by backtracking over operation tables.
std::optional<FiniteModel> random_model(const CheckedTheory& theory, std::mt19937_64& rng,
                                        std::size_t max_carrier = 3, std::size_t node_budget = 200000);

// Components of a morphism: per sort declaration, per source index key, a map of
// elements. Entries for other declarations are empty.
struct ModelMorphism {
	using Component = std::map<std::string, std::map<std::string, std::string>>;
	std::vector<Component> components;
};

// Image under `h` of an element of the sort term `sort_term`, read in the source model.
std::string map_element(const FiniteModel& src, const ModelMorphism& h, const Env& env, const Expr& sort_term,
                        const std::string& label);

// Throws HomError with the offending declaration and argument tuple.
void check_morphism(const FiniteModel& src, const FiniteModel& dst, const ModelMorphism& h);

ModelMorphism identity_morphism(const FiniteModel& m);
// g after f.
ModelMorphism compose_morphisms(const FiniteModel& src, const ModelMorphism& f, const ModelMorphism& g);

constexpr long double kDefaultSearchCap = 1e7L;

// All morphisms src -> dst in lexicographic order of their component tables. When the
// naive candidate count exceeds `cap`, the pruned search may visit at most `cap` nodes
// and throws SearchSpaceExceeded if it needs more.
std::vector<ModelMorphism> enumerate_morphisms(const FiniteModel& src, const FiniteModel& dst,
                                               long double cap = kDefaultSearchCap);

nlohmann::json morphism_to_json(const FiniteModel& src, const ModelMorphism& h);

} // namespace gatsort

#endif
