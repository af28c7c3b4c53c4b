#include <gtest/gtest.h>

#include "gatsort/error.h"
#include "gatsort/io.h"
#include "gatsort/model_util.h"
#include "gatsort/models.h"
#include "gatsort/parser.h"
#include "gatsort/sortify.h"
#include "support.h"

using namespace gatsort;
using nlohmann::json;
using testing_support::corpus;
using testing_support::raw;

namespace {

CheckedTheory corpus_theory(const std::string& file) { return load_theory(corpus() / file); }

FiniteModel corpus_model(const std::string& theory, const std::string& file) {
	return load_model(corpus() / file, corpus_theory(theory));
}

const std::vector<std::string> kGraphModels = {"g1loop.model", "g2.model", "g2b.model", "g3.model"};
const std::vector<std::string> kMonoidModels = {"bool_and.model", "trivial_monoid.model", "z2.model", "z3.model"};

} // namespace

TEST(Labels, Grammar) {
	EXPECT_TRUE(valid_label("x0"));
	EXPECT_TRUE(valid_label("E(a,b)"));
	EXPECT_TRUE(valid_label("V()"));
	EXPECT_TRUE(valid_label("S(T(a),b)"));
	EXPECT_FALSE(valid_label("a,b"));
	EXPECT_FALSE(valid_label(""));
	EXPECT_FALSE(valid_label("a)"));
	EXPECT_EQ(split_key("E(a,b),c"), (std::vector<std::string>{"E(a,b)", "c"}));
}

TEST(ModelFiles, CanonicalBytes) {
	for (const auto& [theory, file] : std::vector<std::pair<std::string, std::string>>{
	         {"transitive_graphs.gat", "g3.model"}, {"monoid.gat", "z3.model"}, {"russell.gat", "russell_1.model"},
	         {"pointed_family.gat", "pf_2.model"}, {"empty.gat", "empty.model"}}) {
		EXPECT_EQ(canonical(corpus_model(theory, file)), read_file(corpus() / file)) << file;
	}
}

TEST(ModelFiles, RejectsBadShapes) {
	CheckedTheory sets = corpus_theory("set.gat");
	EXPECT_THROW(model_from_json(sets, json::parse(R"({"sorts": {"A": ["a", "a"]}})")), ShapeError);
	EXPECT_THROW(model_from_json(sets, json::parse(R"({"sorts": {"A": ["a,b"]}})")), ShapeError);
	EXPECT_THROW(model_from_json(sets, json::parse(R"({"sorts": {}})")), TotalityError);
	EXPECT_THROW(model_from_json(sets, json::parse(R"({"sorts": {"A": []}, "ops": {"f": "a"}})")), ShapeError);
	EXPECT_THROW(load_model(corpus() / "invalid" / "g2_partial.model", corpus_theory("transitive_graphs.gat")),
	             TotalityError);
}

TEST(Eval, Lookup) {
	FiniteModel g = corpus_model("transitive_graphs.gat", "g2.model");
	EXPECT_EQ(eval_term(g, {}, var("V")), Value::set({"a", "b"}));
}

TEST(Eval, CompositionTable) {
	// In g3, the composite of f : a -> b and g : b -> c is h.
	FiniteModel g = corpus_model("transitive_graphs.gat", "g3.model");
	Env env = {{"v1", Value::elem("a")}, {"v2", Value::elem("b")}, {"v3", Value::elem("c")},
	           {"e1", Value::elem("f")}, {"e2", Value::elem("g")}};
	Value v = eval_term(g, env, parse_term("T v1 v2 v3 e1 e2"));
	EXPECT_EQ(v, Value::elem("h"));
}

TEST(Eval, Beta) {
	FiniteModel m = corpus_model("pointed_set.gat", "ps_2.model");
	EXPECT_EQ(eval_term(m, {}, parse_term("(\\x : A. x) a")), eval_term(m, {}, var("a")));
}

TEST(Eval, LambdaTabulates) {
	FiniteModel m = corpus_model("monoid.gat", "z2.model");
	Value v = eval_term(m, {}, parse_term("\\x : M. mul x x"));
	ASSERT_EQ(v.kind, Value::Kind::Fn);
	EXPECT_EQ(*v.at("1"), Value::elem("0"));
}

TEST(CheckModel, TwoVertexGraph) { EXPECT_NO_THROW(corpus_model("transitive_graphs.gat", "g2.model")); }

TEST(CheckModel, MonoidEquationsByBruteForce) {
	for (const auto& file : kMonoidModels) {
		json m = raw(file);
		std::vector<std::string> xs = m["sorts"]["M"];
		auto mul = [&](const std::string& x, const std::string& y) { return m["ops"]["mul"][x][y].get<std::string>(); };
		std::string e = m["ops"]["e"];
		bool holds = true;
		for (const auto& x : xs) {
			holds = holds && mul(e, x) == x && mul(x, e) == x;
			for (const auto& y : xs) {
				for (const auto& z : xs) {
					holds = holds && mul(mul(x, y), z) == mul(x, mul(y, z));
				}
			}
		}
		ASSERT_TRUE(holds) << file;
		EXPECT_NO_THROW(corpus_model("monoid.gat", file)) << file;
	}
}

TEST(CheckModel, CorruptedUnitLaw) {
	try {
		load_model(corpus() / "invalid" / "z2_bad_unit.model", corpus_theory("monoid.gat"));
		FAIL() << "accepted a model violating the unit law";
	} catch (const EquationError& e) {
		EXPECT_NE(std::string(e.what()).find("unit_l"), std::string::npos) << e.what();
		EXPECT_NE(std::string(e.what()).find("x = 1"), std::string::npos) << e.what();
	}
}

TEST(ApplySubst, CoreflectorOnBareSet) {
	CheckedTheory th = corpus_theory("set.gat");
	TranslationResult t = two_sortify_theory(th, {});
	FiniteModel n = load_model(corpus() / "t_set.model", t.translated);
	FiniteModel m = apply_subst_model(t.coreflector, n);
	EXPECT_EQ(m.value("A"), Value::set({"x", "y"}));
}

TEST(ApplySubst, CoreflectorOnPointedSet) {
	CheckedTheory th = corpus_theory("pointed_set.gat");
	TranslationResult t = two_sortify_theory(th, {});
	FiniteModel m = apply_subst_model(t.coreflector, load_model(corpus() / "t_ps.model", t.translated));
	EXPECT_EQ(m.value("A"), Value::set({"x", "y"}));
	EXPECT_EQ(m.value("a"), Value::elem("y"));
}

TEST(ApplySubst, Identity) {
	for (const auto& file : kGraphModels) {
		FiniteModel m = corpus_model("transitive_graphs.gat", file);
		FiniteModel image = apply_subst_model(identity_substitution(m.theory), m);
		m.source.clear();
		EXPECT_EQ(canonical(image), canonical(m)) << file;
	}
}

TEST(ApplySubst, OppositeGraph) {
	Substitution op = load_substitution(corpus() / "graph_opposite.subst");
	FiniteModel g = corpus_model("transitive_graphs.gat", "g3.model");
	FiniteModel o = apply_subst_model(op, g);
	EXPECT_EQ(*navigate(o.value("E"), {"b", "a"}), Value::set({"f"}));
	Env env = {{"v1", Value::elem("c")}, {"v2", Value::elem("b")}, {"v3", Value::elem("a")},
	           {"e1", Value::elem("g")}, {"e2", Value::elem("f")}};
	EXPECT_EQ(eval_term(o, env, parse_term("T v1 v2 v3 e1 e2")), Value::elem("h"));
}

TEST(ApplySubst, Functorial) {
	std::vector<Substitution> subs;
	for (const char* name : {"display.subst", "constant_family.subst", "monoid_unit.subst", "monoid_opposite.subst",
	                         "graph_opposite.subst", "russell_discrete.subst", "monoid_id.subst", "graph_id.subst"}) {
		subs.push_back(load_substitution(corpus() / name));
	}
	std::map<std::string, std::vector<std::string>> models = {
		{"monoid.gat", kMonoidModels}, {"transitive_graphs.gat", kGraphModels}, {"pointed_set.gat", {"ps_2.model"}}};
	std::size_t checked = 0;
	for (const auto& outer : subs) {
		for (const auto& inner : subs) {
			if (!alpha_equal(inner.target.theory(), outer.source.theory())) {
				continue;
			}
			Substitution both = compose_substitutions(outer, inner);
			for (const auto& [file, names] : models) {
				if (!alpha_equal(corpus_theory(file).theory(), inner.source.theory())) {
					continue;
				}
				for (const auto& name : names) {
					FiniteModel m = corpus_model(file, name);
					EXPECT_EQ(canonical(apply_subst_model(both, m)),
					          canonical(apply_subst_model(outer, apply_subst_model(inner, m))));
					++checked;
				}
			}
		}
	}
	EXPECT_GT(checked, 10u);
}

TEST(Morphisms, IdentityIsAMorphism) {
	for (const auto& file : kGraphModels) {
		FiniteModel m = corpus_model("transitive_graphs.gat", file);
		EXPECT_NO_THROW(check_morphism(m, m, identity_morphism(m))) << file;
	}
}

TEST(Morphisms, CollapseOntoLoop) {
	FiniteModel g2 = corpus_model("transitive_graphs.gat", "g2.model");
	FiniteModel loop = corpus_model("transitive_graphs.gat", "g1loop.model");
	json l = raw("g1loop.model");
	std::string v = l["sorts"]["V"][0];
	std::string edge = l["sorts"]["E"][v + "," + v][0];
	ModelMorphism h;
	h.components.resize(3);
	h.components[0][""] = {{"a", v}, {"b", v}};
	h.components[1] = {{"a,a", {}}, {"a,b", {{"f", edge}}}, {"b,a", {}}, {"b,b", {}}};
	EXPECT_NO_THROW(check_morphism(g2, loop, h));
	h.components[1]["a,b"].clear();
	EXPECT_THROW(check_morphism(g2, loop, h), HomError);
}

TEST(Morphisms, GraphCountsMatchNaiveOracle) {
	for (const auto& a : kGraphModels) {
		for (const auto& b : kGraphModels) {
			auto homs = enumerate_morphisms(corpus_model("transitive_graphs.gat", a),
			                                corpus_model("transitive_graphs.gat", b));
			EXPECT_EQ(homs.size(), testing_support::count_graph_homs(raw(a), raw(b))) << a << " -> " << b;
		}
	}
}

TEST(Morphisms, MonoidCountsMatchNaiveOracle) {
	for (const auto& a : kMonoidModels) {
		for (const auto& b : kMonoidModels) {
			auto homs = enumerate_morphisms(corpus_model("monoid.gat", a), corpus_model("monoid.gat", b));
			EXPECT_EQ(homs.size(), testing_support::count_monoid_homs(raw(a), raw(b))) << a << " -> " << b;
		}
	}
}

TEST(Morphisms, SetCountsArePowers) {
	for (const auto& [a, na] : std::vector<std::pair<std::string, std::size_t>>{{"set_0.model", 0}, {"set_2.model", 2},
	                                                                            {"set_3.model", 3}}) {
		for (const auto& [b, nb] : std::vector<std::pair<std::string, std::size_t>>{
		         {"set_0.model", 0}, {"set_2.model", 2}, {"set_3.model", 3}}) {
			std::size_t expected = 1;
			for (std::size_t k = 0; k < na; ++k) {
				expected *= nb;
			}
			EXPECT_EQ(enumerate_morphisms(corpus_model("set.gat", a), corpus_model("set.gat", b)).size(), expected);
		}
	}
}

TEST(Morphisms, CategoryLaws) {
	for (const auto& a : kGraphModels) {
		FiniteModel ma = corpus_model("transitive_graphs.gat", a);
		auto endos = enumerate_morphisms(ma, ma);
		std::set<std::string> keys;
		for (const auto& h : endos) {
			keys.insert(morphism_to_json(ma, h).dump());
		}
		EXPECT_TRUE(keys.count(morphism_to_json(ma, identity_morphism(ma)).dump())) << a;
		for (const auto& b : kGraphModels) {
			FiniteModel mb = corpus_model("transitive_graphs.gat", b);
			std::set<std::string> ab;
			for (const auto& h : enumerate_morphisms(ma, mb)) {
				ab.insert(morphism_to_json(ma, h).dump());
			}
			for (const auto& f : endos) {
				for (const auto& g : enumerate_morphisms(ma, mb)) {
					ModelMorphism gf = compose_morphisms(ma, f, g);
					EXPECT_NO_THROW(check_morphism(ma, mb, gf));
					EXPECT_TRUE(ab.count(morphism_to_json(ma, gf).dump()));
				}
			}
		}
	}
}

TEST(Morphisms, Deterministic) {
	FiniteModel g = corpus_model("transitive_graphs.gat", "g2b.model");
	auto first = enumerate_morphisms(g, g);
	auto second = enumerate_morphisms(g, g);
	ASSERT_EQ(first.size(), second.size());
	for (std::size_t k = 0; k < first.size(); ++k) {
		EXPECT_EQ(morphism_to_json(g, first[k]), morphism_to_json(g, second[k]));
	}
}

TEST(Morphisms, SearchCap) {
	FiniteModel g = corpus_model("transitive_graphs.gat", "g3.model");
	try {
		enumerate_morphisms(g, g, 5);
		FAIL() << "no SearchSpaceExceeded";
	} catch (const SearchSpaceExceeded& e) {
		EXPECT_GT(e.candidates, 5.0L);
	}
}

TEST(Morphisms, IndexedSortsMapCovariantly) {
	FiniteModel pf = corpus_model("pointed_family.gat", "pf_2.model");
	FiniteModel one = corpus_model("pointed_family.gat", "pf_1.model");
	auto homs = enumerate_morphisms(pf, one);
	ASSERT_FALSE(homs.empty());
	for (const auto& h : homs) {
		EXPECT_NO_THROW(check_morphism(pf, one, h));
	}
}

TEST(RandomModels, AreValid) {
	std::mt19937_64 rng(3);
	for (const char* file : {"monoid.gat", "transitive_graphs.gat", "russell.gat", "pointed_family.gat"}) {
		CheckedTheory th = corpus_theory(file);
		for (int k = 0; k < 10; ++k) {
			auto m = random_model(th, rng, 3);
			ASSERT_TRUE(m.has_value()) << file;
			EXPECT_NO_THROW(check_model(*m));
			EXPECT_NO_THROW(model_from_json(th, model_to_json(*m)));
		}
	}
}
