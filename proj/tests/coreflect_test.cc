#include <gtest/gtest.h>

#include <random>

#include "gatsort/coreflect.h"
#include "gatsort/error.h"
#include "gatsort/io.h"
#include "gatsort/models.h"
#include "gatsort/sortify.h"
#include "support.h"

using namespace gatsort;
using nlohmann::json;
using testing_support::corpus;
using testing_support::raw;

namespace {

struct Setting {
	CheckedTheory theory;
	TranslationResult t;
};

Setting setting(const std::string& file) {
	CheckedTheory th = load_theory(corpus() / file);
	TranslationResult t = two_sortify_theory(th, {});
	return {th, t};
}

const std::vector<std::pair<std::string, std::vector<std::string>>> kModels = {
	{"empty.gat", {"empty.model"}},
	{"set.gat", {"set_0.model", "set_2.model", "set_3.model"}},
	{"pointed_set.gat", {"ps_1.model", "ps_2.model", "ps_3.model"}},
	{"monoid.gat", {"bool_and.model", "trivial_monoid.model", "z2.model", "z3.model"}},
	{"transitive_graphs.gat", {"g1loop.model", "g2.model", "g2b.model", "g3.model"}},
	{"russell.gat", {"russell_0.model", "russell_1.model"}},
	{"pointed_family.gat", {"pf_1.model", "pf_2.model"}},
};

} // namespace

TEST(FamilyOfModel, TwoVertexGraph) {
	Setting s = setting("transitive_graphs.gat");
	FamilyObject f = family_of_model(load_model(corpus() / "g2.model", s.theory));
	EXPECT_EQ(f.u, (std::vector<std::string>{"E(a,a)", "E(a,b)", "E(b,a)", "E(b,b)", "V()"}));
	EXPECT_EQ(f.el.at("V()"), (std::vector<std::string>{"a", "b"}));
	EXPECT_EQ(f.el.at("E(a,b)"), (std::vector<std::string>{"f"}));
	EXPECT_TRUE(f.el.at("E(b,a)").empty());
}

TEST(FamilyOfModel, BareSet) {
	Setting s = setting("set.gat");
	FamilyObject f = family_of_model(load_model(corpus() / "set_2.model", s.theory));
	EXPECT_EQ(f.u, (std::vector<std::string>{"A()"}));
	EXPECT_EQ(f.el.at("A()"), (std::vector<std::string>{"p", "q"}));
}

TEST(FamilyOfModel, EmptyTheoryGivesEmptyFamily) {
	Setting s = setting("empty.gat");
	FiniteModel m = load_model(corpus() / "empty.model", s.theory);
	EXPECT_TRUE(family_of_model(m).u.empty());
	FiniteModel n = sortify_model(m, s.t);
	EXPECT_EQ(n.value("U"), Value::set({}));
}

TEST(Sortify, PointedSet) {
	Setting s = setting("pointed_set.gat");
	FiniteModel n = sortify_model(load_model(corpus() / "ps_2.model", s.theory), s.t);
	EXPECT_NO_THROW(check_model(n));
	EXPECT_EQ(n.value("U"), Value::set({"A()"}));
	EXPECT_EQ(n.value("A"), Value::elem("A()"));
	EXPECT_EQ(n.value("a"), Value::elem("p"));
	EXPECT_EQ(n.source, "T(pointed_set.gat)");
}

TEST(Sortify, SortEquationSharesRepresentative) {
	Setting s = setting("russell.gat");
	FiniteModel m = load_model(corpus() / "russell_1.model", s.theory);
	std::map<std::string, std::string> rep;
	for (const auto& inst : sort_instances(m)) {
		rep[inst.tag] = inst.representative;
	}
	// R g = u, so Tm(g,u) is identified with Ty(g).
	EXPECT_EQ(rep.at("Tm(g,u)"), rep.at("Ty(g)"));
	EXPECT_NE(rep.at("Tm(g,n)"), rep.at("Ty(g)"));
	FamilyObject f = family_of_model(m);
	EXPECT_EQ(f.u.size(), 3u);
}

TEST(Roundtrip, CorpusModels) {
	for (const auto& [theory, files] : kModels) {
		Setting s = setting(theory);
		for (const auto& file : files) {
			FiniteModel m = load_model(corpus() / file, s.theory);
			FiniteModel n = sortify_model(m, s.t);
			EXPECT_NO_THROW(check_model(n)) << file;
			EXPECT_EQ(canonical(desortify_model(n, s.t)), canonical(m)) << file;
		}
	}
}

TEST(Roundtrip, RandomModels) {
	std::mt19937_64 rng(7);
	for (const auto& [theory, files] : kModels) {
		Setting s = setting(theory);
		int produced = 0;
		for (int i = 0; i < 50; ++i) {
			std::optional<FiniteModel> m = random_model(s.theory, rng);
			if (!m) {
				continue;
			}
			++produced;
			EXPECT_EQ(canonical(desortify_model(sortify_model(*m, s.t), s.t)), canonical(*m)) << theory;
		}
		EXPECT_GT(produced, 40) << theory;
	}
}

TEST(Comma, SortifiedModelHasIdentityMap) {
	for (const auto& [theory, files] : kModels) {
		Setting s = setting(theory);
		for (const auto& file : files) {
			FiniteModel m = load_model(corpus() / file, s.theory);
			CommaObject c = comma_of_model(sortify_model(m, s.t), s.t);
			EXPECT_EQ(canonical(c.model), canonical(m)) << file;
			EXPECT_EQ(c.family, family_of_model(m)) << file;
			for (const auto& [u, v] : c.map.base) {
				EXPECT_EQ(u, v) << file;
			}
		}
	}
}

TEST(Comma, TranslatedModelsRoundtrip) {
	for (const auto& [theory, file] : std::vector<std::pair<std::string, std::string>>{
	         {"set.gat", "t_set.model"}, {"pointed_set.gat", "t_ps.model"}, {"monoid.gat", "t_monoid.model"},
	         {"russell.gat", "t_russell.model"}, {"pointed_family.gat", "t_pf.model"}, {"empty.gat", "t_empty.model"}}) {
		Setting s = setting(theory);
		FiniteModel n = load_model(corpus() / file, s.t.translated);
		CommaObject c = comma_of_model(n, s.t);
		EXPECT_EQ(canonical(model_of_comma(c, s.t)), canonical(n)) << file;
		json j = comma_to_json(c);
		EXPECT_EQ(canonical(comma_to_json(comma_from_json(s.theory, j))), canonical(j)) << file;
	}
}

TEST(Comma, WideFamilyFixture) {
	Setting s = setting("transitive_graphs.gat");
	CommaObject c = comma_from_json(s.theory, raw("g2_wide.comma"));
	FiniteModel n = model_of_comma(c, s.t);
	EXPECT_EQ(canonical(n), read_file(corpus() / "expected" / "g2_wide.T.model"));
	EXPECT_EQ(canonical(comma_to_json(comma_of_model(n, s.t))), read_file(corpus() / "g2_wide.comma"));
}

TEST(Comma, NonCartesianMapRejected) {
	Setting s = setting("transitive_graphs.gat");
	json j = raw("g2_wide.comma");
	j["map"]["V()"] = "extra";
	EXPECT_THROW(model_of_comma(comma_from_json(s.theory, j), s.t), InvariantError);
}

TEST(CheckCartesian, FiberMismatch) {
	FamilyObject a{{"u"}, {{"u", {"x", "y"}}}};
	FamilyObject b{{"v"}, {{"v", {"x"}}}};
	FamilyMorphism f{{{"u", "v"}}, {{"u", {{"x", "x"}, {"y", "x"}}}}, true};
	EXPECT_THROW(check_cartesian(a, b, f), CartesianViolation);
	FamilyObject c{{"v"}, {{"v", {"x", "y"}}}};
	FamilyMorphism g{{{"u", "v"}}, {{"u", {{"x", "x"}, {"y", "y"}}}}, true};
	EXPECT_NO_THROW(check_cartesian(a, c, g));
}

TEST(Adjunction, GraphHomCountsMatchOracle) {
	Setting s = setting("transitive_graphs.gat");
	std::vector<std::string> files = {"g1loop.model", "g2.model", "g2b.model", "g3.model"};
	for (const auto& a : files) {
		for (const auto& b : files) {
			FiniteModel m = load_model(corpus() / a, s.theory);
			FiniteModel n = sortify_model(load_model(corpus() / b, s.theory), s.t);
			AdjunctionReport r = adjunction_check(m, n, s.t);
			EXPECT_TRUE(r.ok()) << a << " " << b;
			EXPECT_EQ(r.hom_original, testing_support::count_graph_homs(raw(a), raw(b))) << a << " " << b;
			EXPECT_EQ(r.hom_translated, r.hom_original);
		}
	}
}

TEST(Adjunction, MonoidAgainstTranslatedModel) {
	Setting s = setting("monoid.gat");
	FiniteModel n = load_model(corpus() / "t_monoid.model", s.t.translated);
	json rn = model_to_json(desortify_model(n, s.t));
	for (const auto& file : {"bool_and.model", "trivial_monoid.model", "z2.model", "z3.model"}) {
		AdjunctionReport r = adjunction_check(load_model(corpus() / file, s.theory), n, s.t);
		EXPECT_TRUE(r.ok()) << file;
		EXPECT_EQ(r.hom_original, testing_support::count_monoid_homs(raw(file), rn)) << file;
	}
}

TEST(Adjunction, EmptyTheorySingletons) {
	Setting s = setting("empty.gat");
	FiniteModel m = load_model(corpus() / "empty.model", s.theory);
	FiniteModel n = load_model(corpus() / "t_empty.model", s.t.translated);
	AdjunctionReport r = adjunction_check(m, n, s.t);
	EXPECT_TRUE(r.ok());
	EXPECT_EQ(r.hom_translated, 1u);
	EXPECT_EQ(r.hom_original, 1u);
}
