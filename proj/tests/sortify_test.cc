#include <gtest/gtest.h>

#include <random>

#include "gatsort/error.h"
#include "gatsort/io.h"
#include "gatsort/sortify.h"
#include "support.h"

using namespace gatsort;
using testing_support::corpus;
using testing_support::theory_of;

namespace {

const char* kGraphs =
	"V : Set; E : (a : V) (b : V) Set; T : (v1 : V) (v2 : V) (v3 : V) (e1 : E v1 v2) (e2 : E v2 v3) E v1 v3;";

std::string translated(const std::string& text) {
	return print_theory(two_sortify_theory(theory_of(text), {}).translated.theory());
}

Verdict same(const Substitution& a, const Substitution& b) { return conv_substitutions(a, b, {}); }

std::vector<std::pair<std::string, Substitution>> corpus_substitutions() {
	std::vector<std::pair<std::string, Substitution>> out;
	for (const char* name : {"display.subst", "constant_family.subst", "monoid_unit.subst", "monoid_opposite.subst",
	                         "graph_opposite.subst", "russell_discrete.subst", "monoid_id.subst", "graph_id.subst"}) {
		out.emplace_back(name, load_substitution(corpus() / name));
	}
	return out;
}

FamPrefix shared_prefix(std::initializer_list<const CheckedTheory*> theories) {
	Theory all;
	for (const auto* th : theories) {
		for (const auto& d : th->theory().decls) {
			all.decls.push_back(d);
		}
	}
	return fresh_prefix(all, {});
}

} // namespace

TEST(Translate, TransitiveGraphs) {
	EXPECT_EQ(translated(kGraphs),
	          "U : Set;\n"
	          "El : (u : U) Set;\n"
	          "V : U;\n"
	          "E : (a : El V) (b : El V) U;\n"
	          "T : (v1 : El V) (v2 : El V) (v3 : El V) (e1 : El (E v1 v2)) (e2 : El (E v2 v3)) El (E v1 v3);\n");
}

TEST(Translate, EmptyTheoryIsFam) {
	EXPECT_EQ(translated(""), "U : Set;\nEl : (u : U) Set;\n");
}

TEST(Translate, PointedSet) {
	EXPECT_EQ(translated("A : Set; a : A;"), "U : Set;\nEl : (u : U) Set;\nA : U;\na : El A;\n");
}

TEST(Translate, SortEquationBecomesEquationAtU) {
	CheckedTheory th = load_theory(corpus() / "russell.gat");
	TranslationResult t = two_sortify_theory(th, {});
	auto e = t.translated.index_of("e");
	ASSERT_TRUE(e.has_value());
	EXPECT_EQ(print_type(t.translated.decl(*e).type), "(G : El Con) Tm G (R G) = Ty G : U");
	EXPECT_EQ(th.count(DeclClass::SortEquation), 1u);
	EXPECT_EQ(t.translated.count(DeclClass::SortEquation), 0u);
	EXPECT_EQ(t.translated.classification(*e), DeclClass::Equation);
}

TEST(Translate, LambdaDomainsGetEl) {
	CheckedTheory th = theory_of("A : Set; f : (x : A) A; g : f = \\y : A. y : (z : A) A;");
	TranslationResult t = two_sortify_theory(th, {});
	EXPECT_EQ(print_type(t.translated.decl(*t.translated.index_of("g")).type),
	          "f = \\y : El A. y : (z : El A) El A");
}

TEST(Translate, PrefixIsFreshened) {
	CheckedTheory th = theory_of("U : Set; El : (x : U) Set; u : U;");
	TranslationResult t = two_sortify_theory(th, {});
	EXPECT_NE(t.prefix.u_name, "U");
	EXPECT_NE(t.prefix.el_name, "El");
	EXPECT_TRUE(is_family_gat(t.translated, t.prefix));
	check_substitution(t.coreflector, {});
}

TEST(Translate, RequestedPrefix) {
	TranslationResult t = two_sortify_theory(theory_of("A : Set;"), {"Ty", "Tm"});
	EXPECT_EQ(print_theory(t.translated.theory()), "Ty : Set;\nTm : (u : Ty) Set;\nA : Ty;\n");
}

TEST(Translate, ProjectionToFam) {
	TranslationResult t = two_sortify_theory(theory_of(kGraphs), {});
	EXPECT_TRUE(alpha_equal(t.projection.target.theory(), fam_theory({}).theory()));
	ASSERT_EQ(t.projection.assignments.size(), 2u);
	EXPECT_EQ(print_term(t.projection.assignments[0]), "U");
	EXPECT_EQ(print_term(t.projection.assignments[1]), "El");
}

TEST(Coreflector, BareSet) {
	Substitution r = coreflector(theory_of("A : Set;"));
	ASSERT_EQ(r.assignments.size(), 1u);
	EXPECT_EQ(print_term(r.assignments[0]), "El A");
}

TEST(Coreflector, PointedSet) {
	Substitution r = coreflector(theory_of("A : Set; a : A;"));
	ASSERT_EQ(r.assignments.size(), 2u);
	EXPECT_EQ(print_term(r.assignments[0]), "El A");
	EXPECT_EQ(print_term(r.assignments[1]), "a");
}

TEST(Coreflector, EmptyTheory) {
	Substitution r = coreflector(theory_of(""));
	EXPECT_TRUE(r.assignments.empty());
	EXPECT_EQ(r.source.size(), 2u);
}

TEST(Coreflector, IndexedSortIsEtaExpanded) {
	Substitution r = coreflector(theory_of(kGraphs));
	EXPECT_EQ(print_term(r.assignments[1]), "\\a : El V. \\b : El V. El (E a b)");
}

TEST(Coreflector, ChecksOnEveryCorpusTheory) {
	for (const char* file : {"empty.gat", "set.gat", "pointed_set.gat", "transitive_graphs.gat", "monoid.gat",
	                         "russell.gat", "pointed_family.gat"}) {
		EXPECT_NO_THROW(check_substitution(coreflector(load_theory(corpus() / file)), {})) << file;
	}
}

TEST(IsFamily, Examples) {
	EXPECT_TRUE(is_family_gat(two_sortify_theory(theory_of(kGraphs), {}).translated));
	EXPECT_TRUE(is_family_gat(fam_theory({})));
	EXPECT_FALSE(is_family_gat(theory_of(kGraphs)));
	EXPECT_FALSE(is_family_gat(theory_of("U : Set; El : (u : U) Set; B : Set;")));
	EXPECT_TRUE(is_family_gat(theory_of("U : Set; El : (v : U) Set; V : U; W : V = V : U;")));
}

TEST(Pushforward, TableRows) {
	EXPECT_EQ(print_theory(pushforward(theory_of("B : Set;")).theory()), "A : Set;\nB : (a : A) Set;\n");
	EXPECT_EQ(print_theory(pushforward(theory_of("B : Set; b : B;")).theory()),
	          "A : Set;\nB : (a : A) Set;\nb : (a : A) B a;\n");
	EXPECT_EQ(print_theory(pushforward(theory_of(kGraphs)).theory()),
	          "A : Set;\n"
	          "V : (a : A) Set;\n"
	          "E : (a : A) (a1 : V a) (b : V a) Set;\n"
	          "T : (a : A) (v1 : V a) (v2 : V a) (v3 : V a) (e1 : E a v1 v2) (e2 : E a v2 v3) E a v1 v3;\n");
}

TEST(Pushforward, IndexClash) {
	EXPECT_THROW(pushforward(theory_of("B : Set;"), "B"), FreshnessError);
	EXPECT_THROW(pushforward(theory_of("B : Set;"), "Set"), FreshnessError);
}

TEST(TranslateSubst, Display) {
	Substitution s = load_substitution(corpus() / "display.subst");
	Substitution t = two_sortify_subst(s, {});
	std::vector<std::string> printed;
	for (const auto& a : t.assignments) {
		printed.push_back(print_term(a));
	}
	EXPECT_EQ(printed, (std::vector<std::string>{"U", "El", "A"}));
	EXPECT_EQ(print_theory(t.source.theory()), "U : Set;\nEl : (u : U) Set;\nA : U;\na : El A;\n");
	EXPECT_EQ(print_theory(t.target.theory()), "U : Set;\nEl : (u : U) Set;\nA : U;\n");
}

TEST(TranslateSubst, Identity) {
	for (const char* file : {"set.gat", "transitive_graphs.gat", "monoid.gat", "russell.gat"}) {
		CheckedTheory th = load_theory(corpus() / file);
		TranslationResult t = two_sortify_theory(th, {});
		EXPECT_EQ(same(two_sortify_subst(identity_substitution(th), {}), identity_substitution(t.translated)),
		          Verdict::Equal)
			<< file;
	}
}

TEST(TranslateSubst, CommutesWithProjections) {
	for (const auto& [name, s] : corpus_substitutions()) {
		FamPrefix p = shared_prefix({&s.source, &s.target});
		Substitution ts = two_sortify_subst(s, p);
		Substitution source_projection = two_sortify_theory(s.source, p).projection;
		Substitution target_projection = two_sortify_theory(s.target, p).projection;
		EXPECT_EQ(same(compose_substitutions(target_projection, ts), source_projection), Verdict::Equal) << name;
	}
}

TEST(TranslateSubst, Composition) {
	auto subs = corpus_substitutions();
	std::size_t composable = 0;
	for (const auto& [outer_name, outer] : subs) {
		for (const auto& [inner_name, inner] : subs) {
			if (!alpha_equal(inner.target.theory(), outer.source.theory())) {
				continue;
			}
			++composable;
			FamPrefix p = shared_prefix({&inner.source, &inner.target, &outer.target});
			EXPECT_EQ(same(two_sortify_subst(compose_substitutions(outer, inner), p),
			               compose_substitutions(two_sortify_subst(outer, p), two_sortify_subst(inner, p))),
			          Verdict::Equal)
				<< outer_name << " after " << inner_name;
		}
	}
	EXPECT_GE(composable, 6u);
}

TEST(Coreflector, Naturality) {
	for (const auto& [name, s] : corpus_substitutions()) {
		FamPrefix p = shared_prefix({&s.source, &s.target});
		Substitution lhs = compose_substitutions(coreflector(s.target, p), two_sortify_subst(s, p));
		Substitution rhs = compose_substitutions(s, coreflector(s.source, p));
		EXPECT_EQ(same(lhs, rhs), Verdict::Equal) << name;
	}
}

TEST(TranslateSubst, Injective) {
	auto subs = corpus_substitutions();
	std::size_t distinct = 0;
	for (std::size_t i = 0; i < subs.size(); ++i) {
		for (std::size_t j = i + 1; j < subs.size(); ++j) {
			const Substitution& a = subs[i].second;
			const Substitution& b = subs[j].second;
			if (!alpha_equal(a.source.theory(), b.source.theory()) ||
			    !alpha_equal(a.target.theory(), b.target.theory()) || same(a, b) == Verdict::Equal) {
				continue;
			}
			++distinct;
			FamPrefix p = shared_prefix({&a.source, &a.target});
			EXPECT_NE(same(two_sortify_subst(a, p), two_sortify_subst(b, p)), Verdict::Equal)
				<< subs[i].first << " vs " << subs[j].first;
		}
	}
	EXPECT_EQ(distinct, 2u);
}

// Random theories: sorts indexed by earlier plain sorts, operations between them, and
// occasionally a sort equation between two plain sorts.
TEST(Translate, RandomTheories) {
	std::mt19937_64 rng(7);
	for (int round = 0; round < 100; ++round) {
		std::string text;
		std::vector<std::string> plain;
		std::vector<std::pair<std::string, std::size_t>> indexed;
		std::uniform_int_distribution<int> pick(0, 9);
		int decls = 2 + pick(rng) % 6;
		for (int d = 0; d < decls; ++d) {
			std::string name = "d" + std::to_string(d);
			int kind = pick(rng);
			auto any_plain = [&] { return plain[static_cast<std::size_t>(pick(rng)) % plain.size()]; };
			if (plain.empty() || kind < 3) {
				text += name + " : Set;\n";
				plain.push_back(name);
			} else if (kind < 5) {
				std::string s = any_plain();
				text += name + " : (x : " + s + ") Set;\n";
				indexed.emplace_back(name + ":" + s, 1);
			} else if (kind < 8) {
				std::string a = any_plain();
				std::string b = any_plain();
				text += name + " : (x : " + a + ") (y : " + b + ") " + any_plain() + ";\n";
			} else if (kind == 8 && plain.size() >= 2) {
				text += name + " : " + plain[0] + " = " + plain.back() + " : Set;\n";
			} else if (!indexed.empty()) {
				const std::string& entry = indexed[static_cast<std::size_t>(pick(rng)) % indexed.size()].first;
				std::string fam = entry.substr(0, entry.find(':'));
				std::string base = entry.substr(entry.find(':') + 1);
				text += name + " : (x : " + base + ") " + fam + " x;\n";
			} else {
				text += name + " : Set;\n";
				plain.push_back(name);
			}
		}
		CheckedTheory th = theory_of(text);
		TranslationResult t = two_sortify_theory(th, {});
		EXPECT_TRUE(is_family_gat(t.translated, t.prefix)) << text;
		EXPECT_EQ(t.translated.count(DeclClass::SortEquation), 0u) << text;
		EXPECT_EQ(t.translated.count(DeclClass::Sort), 2u) << text;
		EXPECT_NO_THROW(check_substitution(t.coreflector, {})) << text;
		EXPECT_NO_THROW(check_substitution(t.projection, {})) << text;
		EXPECT_EQ(parse_theory(print_theory(t.translated.theory())).size(), t.translated.size());
	}
}
