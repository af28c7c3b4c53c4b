#include <gtest/gtest.h>

#include "gatsort/error.h"
#include "gatsort/kernel.h"
#include "gatsort/parser.h"

using namespace gatsort;

namespace {

const char* kGraphs =
	"V : Set; E : (a:V)(b:V) Set; T : (v1:V)(v2:V)(v3:V)(e1: E v1 v2)(e2: E v2 v3) E v1 v3;";

const char* kMonoid =
	"M : Set; e : M; mul : (x : M) (y : M) M;"
	"unit_l : (x : M) mul e x = x : M;"
	"unit_r : (x : M) mul x e = x : M;"
	"assoc : (x : M) (y : M) (z : M) mul (mul x y) z = mul x (mul y z) : M;";

CheckedTheory checked(const char* text) {
	return check_theory(parse_theory(text), ConvBudget{});
}

} // namespace

TEST(Parser, TransitiveGraphsHasThreeDeclarations) {
	Theory th = parse_theory(kGraphs);
	ASSERT_EQ(th.size(), 3u);
	EXPECT_EQ(th.decls[2].name, "T");
}

TEST(Parser, EmptyInput) {
	EXPECT_TRUE(parse_theory("").empty());
	EXPECT_TRUE(parse_theory("  -- only a comment\n").empty());
}

TEST(Parser, DuplicateNameRejected) {
	EXPECT_THROW(parse_theory("A : Set; A : A;"), ParseError);
}

TEST(Parser, ErrorCarriesPosition) {
	try {
		parse_theory("A : Set;\nB : (x : A Set;");
		FAIL();
	} catch (const ParseError& e) {
		EXPECT_EQ(e.line, 2u);
	}
}

TEST(Parser, PrintRoundTrip) {
	for (const char* text : {kGraphs, kMonoid, "A : Set; f : (x : A) A; g : (h : A) A = \\y : A. f (f y) : (z : A) A;",
	                         "A : Set; a : A; p : refl a = refl a : a = a : A;"}) {
		Theory th = parse_theory(text);
		std::string printed = print_theory(th);
		Theory again = parse_theory(printed);
		EXPECT_EQ(print_theory(again), printed);
		EXPECT_TRUE(alpha_equal(th, again));
	}
}

TEST(Check, TransitiveGraphClasses) {
	CheckedTheory th = checked(kGraphs);
	EXPECT_EQ(th.classes(), (std::vector<DeclClass>{DeclClass::Sort, DeclClass::Sort, DeclClass::Operation}));
}

TEST(Check, PointedSet) {
	CheckedTheory th = checked("A : Set; a : A;");
	EXPECT_EQ(th.classes(), (std::vector<DeclClass>{DeclClass::Sort, DeclClass::Operation}));
}

TEST(Check, UnboundVariable) {
	try {
		checked("a : A;");
		FAIL();
	} catch (const TypeError& e) {
		EXPECT_NE(std::string(e.what()).find("unbound variable A"), std::string::npos);
	}
}

TEST(Check, SortEquationClassified) {
	CheckedTheory th = checked("A : Set; B : Set; e : A = B : Set; f : (x : A) A; g : f = \\y : A. y : (z : A) A;");
	EXPECT_EQ(th.classification(2), DeclClass::SortEquation);
	EXPECT_EQ(th.classification(4), DeclClass::Equation);
}

TEST(Check, EquationReflectionInTyping) {
	// b : B is accepted at type A only because of e.
	EXPECT_NO_THROW(checked("A : Set; B : Set; e : A = B : Set; b : B; f : (x : A) A; c : f b = f b : A;"));
	EXPECT_THROW(checked("A : Set; B : Set; b : B; f : (x : A) A; c : f b = f b : A;"), TypeError);
}

TEST(Infer, TransitivityApplied) {
	CheckedTheory th = checked(kGraphs);
	Context ctx(th);
	for (const char* v : {"v1", "v2", "v3"}) {
		ctx.bind(v, small(var("V")));
	}
	ctx.bind("e1", parse_type("E v1 v2"));
	ctx.bind("e2", parse_type("E v2 v3"));
	Expr t = infer_term(ctx, parse_term("T v1 v2 v3 e1 e2"), ConvBudget{});
	EXPECT_TRUE(alpha_equal(t, parse_type("E v1 v3")));
}

TEST(Infer, SetAndRefl) {
	Context ctx(checked("A : Set; a : A;"));
	EXPECT_EQ(infer_term(ctx, var("A"), ConvBudget{})->kind, Kind::Set);
	EXPECT_TRUE(alpha_equal(infer_term(ctx, parse_term("refl a"), ConvBudget{}), parse_type("a = a : A")));
}

TEST(Conv, Eta) {
	Context ctx(checked("A : Set; f : (x : A) A;"));
	EXPECT_EQ(conv(ctx, parse_term("\\x : A. f x"), var("f"), ConvBudget{}), Verdict::Equal);
}

TEST(Conv, Reflection) {
	Context ctx(checked("A : Set; B : Set; e : A = B : Set;"));
	EXPECT_EQ(conv(ctx, var("A"), var("B"), ConvBudget{}), Verdict::Equal);
}

TEST(Conv, DistinctGenerators) {
	Context ctx(checked("A : Set; B : Set;"));
	EXPECT_EQ(conv(ctx, var("A"), var("B"), ConvBudget{}), Verdict::Unequal);
}

TEST(Conv, ProofIrrelevance) {
	Context ctx(checked("A : Set; a : A; p : a = a : A;"));
	EXPECT_EQ(conv(ctx, var("p"), parse_term("refl a"), ConvBudget{}), Verdict::Equal);
}

TEST(Conv, MonoidEquations) {
	Context ctx(checked(kMonoid));
	ConvBudget b;
	EXPECT_EQ(conv(ctx, parse_term("mul e (mul e e)"), var("e"), b), Verdict::Equal);
	ctx.bind("x", small(var("M")));
	ctx.bind("y", small(var("M")));
	EXPECT_EQ(conv(ctx, parse_term("mul (mul x e) (mul e y)"), parse_term("mul x y"), b), Verdict::Equal);
	EXPECT_EQ(conv(ctx, parse_term("mul x y"), parse_term("mul y x"), b), Verdict::Unequal);
}

TEST(Conv, ZeroFuelIsIndeterminate) {
	Context ctx(checked(kMonoid));
	EXPECT_EQ(conv(ctx, parse_term("mul e e"), var("e"), ConvBudget{0, 1000}), Verdict::Indeterminate);
}

TEST(Conv, AlphaInsensitive) {
	Context ctx(checked("A : Set; f : (x : A) A;"));
	EXPECT_EQ(conv(ctx, parse_term("\\x : A. f x"), parse_term("\\y : A. f y"), ConvBudget{}), Verdict::Equal);
}

TEST(Conv, UnfoldBudget) {
	Context ctx(checked("A : Set; a : A;"));
	Expr t = parse_term("(\\x : A. (\\y : A. y) x) a");
	EXPECT_EQ(conv(ctx, t, var("a"), ConvBudget{10000, 1}), Verdict::Indeterminate);
	EXPECT_EQ(conv(ctx, t, var("a"), ConvBudget{}), Verdict::Equal);
}

TEST(Subst, DisplayChecks) {
	CheckedTheory ps = checked("A : Set; a : A;");
	CheckedTheory set = checked("A : Set;");
	EXPECT_NO_THROW(check_substitution(Substitution{ps, set, {var("A")}}, ConvBudget{}));
}

TEST(Subst, IdentityChecks) {
	for (const char* text : {kGraphs, kMonoid, "A : Set; a : A;", ""}) {
		CheckedTheory th = checked(text);
		EXPECT_NO_THROW(check_substitution(identity_substitution(th), ConvBudget{}));
	}
}

TEST(Subst, KindConfusion) {
	CheckedTheory ps = checked("A : Set; a : A;");
	CheckedTheory set = checked("A : Set;");
	try {
		check_substitution(Substitution{set, ps, {var("A"), var("A")}}, ConvBudget{});
		FAIL();
	} catch (const TypeError& e) {
		EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
	}
}

TEST(Subst, ComposeWithDisplayProjects) {
	CheckedTheory ps = checked("A : Set; a : A;");
	CheckedTheory set = checked("A : Set;");
	CheckedTheory fam = checked("B : Set; P : (x : B) Set; p : (x : B) P x; b : B;");
	Substitution display{ps, set, {var("A")}};
	Substitution sigma{fam, ps, {parse_term("P b"), parse_term("p b")}};
	check_substitution(sigma, ConvBudget{});
	Substitution c = compose_substitutions(display, sigma);
	ASSERT_EQ(c.assignments.size(), 1u);
	EXPECT_TRUE(alpha_equal(c.assignments[0], parse_term("P b")));
	EXPECT_THROW(compose_substitutions(sigma, display), MismatchError);
}

TEST(Subst, IdentityLaws) {
	CheckedTheory ps = checked("A : Set; a : A;");
	CheckedTheory fam = checked("B : Set; P : (x : B) Set; p : (x : B) P x; b : B;");
	Substitution sigma{fam, ps, {parse_term("P b"), parse_term("p b")}};
	EXPECT_EQ(conv_substitutions(compose_substitutions(identity_substitution(ps), sigma), sigma, ConvBudget{}),
	          Verdict::Equal);
	EXPECT_EQ(conv_substitutions(compose_substitutions(sigma, identity_substitution(fam)), sigma, ConvBudget{}),
	          Verdict::Equal);
}

TEST(Subst, CaptureAvoidance) {
	CheckedTheory src = checked("A : Set; x : A;");
	CheckedTheory tgt = checked("A : Set; k : A; f : (x : A) A; c : f = \\x : A. k : (x : A) A;");
	// f must be the constant function at x, not the identity.
	Substitution s{src, tgt, {var("A"), var("x"), parse_term("\\y : A. x"), parse_term("refl (\\y : A. x)")}};
	EXPECT_NO_THROW(check_substitution(s, ConvBudget{}));
}
