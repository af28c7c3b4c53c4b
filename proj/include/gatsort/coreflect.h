#ifndef GATSORT_COREFLECT_H
#define GATSORT_COREFLECT_H

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gatsort/models.h"
#include "gatsort/sortify.h"

namespace gatsort {

struct FamilyObject {
	std::vector<std::string> u;                        // sorted
	std::map<std::string, std::vector<std::string>> el; // total over u, fibers sorted

	bool operator==(const FamilyObject& other) const { return u == other.u && el == other.el; }
};

// Base map plus fiber maps. Cartesian morphisms have identity fibers.
struct FamilyMorphism {
	std::map<std::string, std::string> base;
	std::map<std::string, std::map<std::string, std::string>> fibers;
	bool cartesian = false;
};

struct CommaObject {
	FiniteModel model;
	FamilyObject family;
	FamilyMorphism map; // from family_of_model(model) to family
};

// Tag "S(i1,...,in)" of a sort instance.
std::string sort_tag(const std::string& sort, const std::vector<std::string>& indices);

// One entry per sort instance of a model, in declaration then index order. Instances
// identified by a sort equation share the representative of the earliest one.
struct SortInstance {
	std::size_t decl;
	std::vector<std::string> indices;
	std::string tag;
	std::string representative;
};
std::vector<SortInstance> sort_instances(const FiniteModel& m);

FamilyObject family_of_model(const FiniteModel& m);

FiniteModel sortify_model(const FiniteModel& m, const TranslationResult& t);
FiniteModel desortify_model(const FiniteModel& n, const TranslationResult& t);

// The (U, El) part of a model of a translated theory.
FamilyObject family_part(const FiniteModel& n, const TranslationResult& t);

CommaObject comma_of_model(const FiniteModel& n, const TranslationResult& t);
FiniteModel model_of_comma(const CommaObject& c, const TranslationResult& t);

// Throws CartesianViolation when a fiber is not the identity between equal fibers.
void check_cartesian(const FamilyObject& source, const FamilyObject& target, const FamilyMorphism& f);

nlohmann::json family_to_json(const FamilyObject& f);
FamilyObject family_from_json(const nlohmann::json& j);
nlohmann::json comma_to_json(const CommaObject& c);
CommaObject comma_from_json(const CheckedTheory& theory, const nlohmann::json& j);

struct AdjunctionReport {
	std::size_t hom_translated = 0; // |Hom(L m, n)|
	std::size_t hom_original = 0;   // |Hom(m, R n)|
	std::vector<std::size_t> image; // index in the second hom-set of the image of each morphism
	bool bijective = false;
	bool unit_identity = false;

	bool ok() const { return bijective && unit_identity; }
};

// Compares Hom(L m, n) with Hom(m, R n) along the transposition map.
AdjunctionReport adjunction_check(const FiniteModel& m, const FiniteModel& n, const TranslationResult& t,
                                  long double cap = kDefaultSearchCap);

nlohmann::json report_to_json(const AdjunctionReport& r);

} // namespace gatsort

#endif
