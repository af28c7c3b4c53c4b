#include "gatsort/selftest.h"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "gatsort/coreflect.h"
#include "gatsort/error.h"
#include "gatsort/initial.h"
#include "gatsort/io.h"
#include "gatsort/model_util.h"
#include "gatsort/sortify.h"

namespace gatsort {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kTheoryFiles = {"empty.gat",   "set.gat",    "pointed_set.gat",   "transitive_graphs.gat",
                                               "monoid.gat", "russell.gat", "pointed_family.gat"};

std::string translated_ref(const std::string& ref) {
	if (ref.size() > 3 && ref.rfind("T(", 0) == 0 && ref.back() == ')') {
		return ref.substr(2, ref.size() - 3);
	}
	return "";
}

} // namespace

Corpus load_corpus(const fs::path& dir, const ConvBudget& budget) {
	Corpus c;
	c.dir = dir;
	c.theory_files = kTheoryFiles;
	auto theory = [&](const std::string& file) -> const CheckedTheory& {
		auto it = c.theories.find(file);
		if (it == c.theories.end()) {
			it = c.theories.emplace(file, load_theory(dir / file, budget)).first;
		}
		return it->second;
	};
	for (const auto& file : kTheoryFiles) {
		theory(file);
	}
	std::vector<fs::path> entries;
	for (const auto& entry : fs::directory_iterator(dir)) {
		if (entry.is_regular_file()) {
			entries.push_back(entry.path());
		}
	}
	std::sort(entries.begin(), entries.end());
	for (const auto& path : entries) {
		std::string name = path.filename().string();
		if (path.extension() == ".model") {
			nlohmann::json j = load_json(path);
			std::string ref = j.value("theory", "");
			if (std::string inner = translated_ref(ref); !inner.empty()) {
				TranslationResult t = two_sortify_theory(theory(inner), {}, budget);
				FiniteModel m = model_from_json(t.translated, j);
				check_model(m);
				c.translated_models[inner].emplace_back(name, std::move(m));
			} else {
				FiniteModel m = model_from_json(theory(ref), j);
				check_model(m);
				c.models[ref].emplace_back(name, std::move(m));
			}
		} else if (path.extension() == ".subst") {
			Substitution s = load_substitution(path, {}, budget);
			check_substitution(s, budget);
			c.substitutions.emplace_back(name, std::move(s));
		}
	}
	return c;
}

std::vector<Expr> small_terms(const Context& ctx, std::size_t max_size, std::size_t cap, const ConvBudget& budget) {
	struct Head {
		std::string name;
		std::size_t arity;
	};
	std::vector<Head> heads;
	for (const auto& local : ctx.locals()) {
		heads.push_back({local.name, 0});
	}
	const CheckedTheory& theory = ctx.theory();
	for (std::size_t i = 0; i < theory.size(); ++i) {
		if (theory.classification(i) == DeclClass::Operation) {
			heads.push_back({theory.decl(i).name, peel_pi(theory.decl(i).type).binders.size()});
		}
	}
	std::vector<std::vector<Expr>> by_size(max_size + 1);
	std::vector<Expr> out;
	for (std::size_t size = 1; size <= max_size && out.size() < cap; ++size) {
		for (const auto& head : heads) {
			if (1 + head.arity > size) {
				continue;
			}
			std::vector<Expr> args;
			std::function<void(std::size_t)> fill = [&](std::size_t remaining) {
				if (out.size() >= cap) {
					return;
				}
				if (args.size() == head.arity) {
					if (remaining != 0) {
						return;
					}
					Expr term = app(var(head.name), args);
					try {
						Expr type = normalize(infer_term(ctx, term, budget), budget.max_unfold);
						if (type->kind == Kind::Small) {
							by_size[size].push_back(term);
							out.push_back(term);
						}
					} catch (const TypeError&) {
					}
					return;
				}
				for (std::size_t s = 1; s <= remaining; ++s) {
					for (const auto& arg : by_size[s]) {
						args.push_back(arg);
						fill(remaining - s);
						args.pop_back();
					}
				}
			};
			fill(size - 1 - head.arity);
		}
	}
	return out;
}

namespace {

struct Failures {
	std::vector<std::string> items;
	std::size_t checks = 0;

	void expect(bool ok, const std::string& what) {
		++checks;
		if (!ok) {
			items.push_back(what);
		}
	}
	std::string summary() const {
		std::ostringstream out;
		out << checks << " checks";
		if (!items.empty()) {
			out << ", " << items.size() << " failed; first: " << items.front();
		}
		return out.str();
	}
};

std::string golden(const Corpus& c, const std::string& name) { return read_file(c.dir / "expected" / name); }

std::string stem(const std::string& file) { return fs::path(file).stem().string(); }

CriterionResult translation_goldens(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	for (const std::string file : {"transitive_graphs.gat", "pointed_set.gat", "empty.gat"}) {
		TranslationResult t = two_sortify_theory(c.theories.at(file), {}, o.budget);
		f.expect(print_theory(t.translated.theory()) == golden(c, stem(file) + ".T.gat"), file);
	}
	f.expect(alpha_equal(two_sortify_theory(c.theories.at("empty.gat"), {}, o.budget).translated.theory(),
	                     fam_theory({}).theory()),
	         "translation of the empty theory is not Fam");
	return {1, "translation goldens", f.items.empty(), f.summary()};
}

CriterionResult sort_equation_elimination(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	const CheckedTheory& th = c.theories.at("russell.gat");
	TranslationResult t = two_sortify_theory(th, {}, o.budget);
	f.expect(th.count(DeclClass::SortEquation) > 0, "input has no sort equation");
	f.expect(t.translated.count(DeclClass::SortEquation) == 0, "translation still has a sort equation");
	f.expect(is_family_gat(t.translated, t.prefix), "translation is not a family GAT");
	f.expect(print_theory(t.translated.theory()) == golden(c, "russell.T.gat"), "russell.T.gat");
	return {2, "sort-equation elimination", f.items.empty(),
	        f.summary() + "; sort equations " + std::to_string(th.count(DeclClass::SortEquation)) + " -> " +
	            std::to_string(t.translated.count(DeclClass::SortEquation))};
}

CriterionResult coreflector_typing(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	for (const auto& file : c.theory_files) {
		try {
			check_substitution(coreflector(c.theories.at(file), {}, o.budget), o.budget);
			f.expect(true, file);
		} catch (const Error& e) {
			f.expect(false, file + ": " + e.what());
		}
	}
	return {3, "coreflector well-typedness", f.items.empty(), f.summary()};
}

CriterionResult strict_roundtrip(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	std::mt19937_64 rng(o.seed);
	std::size_t random_total = 0;
	for (const auto& file : c.theory_files) {
		const CheckedTheory& th = c.theories.at(file);
		TranslationResult t = two_sortify_theory(th, {}, o.budget);
		auto check = [&](const FiniteModel& m, const std::string& what) {
			f.expect(canonical(desortify_model(sortify_model(m, t), t)) == canonical(m), what);
		};
		if (auto it = c.models.find(file); it != c.models.end()) {
			for (const auto& [name, m] : it->second) {
				check(m, name);
			}
		}
		for (std::size_t k = 0; k < o.random_models; ++k) {
			auto m = random_model(th, rng, 3);
			f.expect(m.has_value(), file + ": no random model found");
			if (m) {
				check(*m, file + " random model " + std::to_string(k));
				++random_total;
			}
		}
	}
	return {4, "strict coreflection roundtrip", f.items.empty(),
	        f.summary() + "; " + std::to_string(random_total) + " random models"};
}

CriterionResult comma_isomorphism(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	for (const auto& file : c.theory_files) {
		TranslationResult t = two_sortify_theory(c.theories.at(file), {}, o.budget);
		std::vector<std::pair<std::string, FiniteModel>> ns;
		if (auto it = c.models.find(file); it != c.models.end()) {
			for (const auto& [name, m] : it->second) {
				ns.emplace_back("L " + name, sortify_model(m, t));
			}
		}
		if (auto it = c.translated_models.find(file); it != c.translated_models.end()) {
			ns.insert(ns.end(), it->second.begin(), it->second.end());
		}
		for (const auto& [name, n] : ns) {
			CommaObject comma = comma_of_model(n, t);
			f.expect(canonical(model_of_comma(comma, t)) == canonical(n), name + ": model -> comma -> model");
			nlohmann::json j = comma_to_json(comma);
			CommaObject back = comma_from_json(c.theories.at(file), j);
			f.expect(comma_to_json(comma_of_model(model_of_comma(back, t), t)) == j, name + ": comma -> model -> comma");
			f.expect(family_part(n, t) == comma.family, name + ": family differs from the (U, El) part");
		}
		if (auto it = c.models.find(file); it != c.models.end()) {
			for (const auto& [name, m] : it->second) {
				f.expect(family_of_model(m) == family_part(sortify_model(m, t), t), name + ": family of model");
			}
		}
	}
	const CheckedTheory& graphs = c.theories.at("transitive_graphs.gat");
	TranslationResult t = two_sortify_theory(graphs, {}, o.budget);
	nlohmann::json j = load_json(c.dir / "g2_wide.comma");
	CommaObject comma = comma_from_json(graphs, j);
	FiniteModel n = model_of_comma(comma, t);
	f.expect(canonical(n) == golden(c, "g2_wide.T.model"), "hand-built comma object");
	f.expect(canonical(comma_to_json(comma_of_model(n, t))) == read_file(c.dir / "g2_wide.comma"),
	         "hand-built comma object does not come back");
	return {5, "comma isomorphism", f.items.empty(), f.summary()};
}

CriterionResult adjunction(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	std::size_t skipped = 0;
	for (const auto& file : c.theory_files) {
		TranslationResult t = two_sortify_theory(c.theories.at(file), {}, o.budget);
		auto it = c.models.find(file);
		if (it == c.models.end()) {
			continue;
		}
		std::vector<std::pair<std::string, FiniteModel>> ns;
		for (const auto& [name, m] : it->second) {
			ns.emplace_back("L " + name, sortify_model(m, t));
		}
		if (auto tn = c.translated_models.find(file); tn != c.translated_models.end()) {
			ns.insert(ns.end(), tn->second.begin(), tn->second.end());
		}
		for (const auto& [mname, m] : it->second) {
			for (const auto& [nname, n] : ns) {
				try {
					AdjunctionReport r = adjunction_check(m, n, t, o.search_cap);
					f.expect(r.ok() && r.hom_translated == r.hom_original,
					         mname + " / " + nname + ": " + report_to_json(r).dump());
				} catch (const SearchSpaceExceeded&) {
					++skipped;
				}
			}
		}
	}
	return {6, "adjunction hom-bijection", f.items.empty(),
	        f.summary() + "; " + std::to_string(skipped) + " pairs beyond the search cap"};
}

CriterionResult pushforward_goldens(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	for (const std::string file : {"set_b.gat", "pointed_set_b.gat", "transitive_graphs.gat"}) {
		CheckedTheory th = load_theory(c.dir / file, o.budget);
		f.expect(print_theory(pushforward(th, "A", o.budget).theory()) == golden(c, stem(file) + ".P.gat"), file);
	}
	return {7, "pushforward goldens", f.items.empty(), f.summary()};
}

CriterionResult initial_models(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	struct Case {
		std::string file;
		std::size_t depth;
		std::size_t elements;
		std::vector<std::string> targets;
	};
	const std::vector<Case> cases = {
		{"pointed_set.gat", 3, 1, {"ps_1.model", "ps_2.model", "ps_3.model"}},
		{"set.gat", 3, 0, {"set_0.model", "set_2.model", "set_3.model"}},
		{"monoid.gat", 5, 1, {"z2.model", "z3.model", "bool_and.model"}},
	};
	for (const auto& k : cases) {
		const CheckedTheory& th = c.theories.at(k.file);
		InitialModelResult r = initial_model_bounded(th, k.depth, o.budget);
		f.expect(r.saturated, k.file + ": not saturated");
		f.expect(r.classes.size() == k.elements, k.file + ": " + std::to_string(r.classes.size()) + " classes");
		if (!r.saturated) {
			continue;
		}
		for (const auto& target : k.targets) {
			FiniteModel m = load_model(c.dir / target, th);
			ModelMorphism h = initial_morphism(r, m);
			std::vector<ModelMorphism> all = enumerate_morphisms(r.model, m, o.search_cap);
			f.expect(all.size() == 1 && morphism_to_json(r.model, all[0]) == morphism_to_json(r.model, h),
			         k.file + " -> " + target + ": " + std::to_string(all.size()) + " morphisms");
		}
	}
	return {8, "initial models", f.items.empty(), f.summary()};
}

CriterionResult naturality(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	auto equal = [&](const Substitution& a, const Substitution& b) {
		return conv_substitutions(a, b, o.budget) == Verdict::Equal;
	};
	for (const auto& [name, s] : c.substitutions) {
		Theory both = s.source.theory();
		for (const auto& d : s.target.theory().decls) {
			both.decls.push_back(d);
		}
		FamPrefix prefix = fresh_prefix(both, {});
		Substitution ts = two_sortify_subst(s, prefix, o.budget);
		Substitution r_source = coreflector(s.source, prefix, o.budget);
		Substitution r_target = coreflector(s.target, prefix, o.budget);
		f.expect(equal(compose_substitutions(r_target, ts), compose_substitutions(s, r_source)), name + ": naturality");
	}
	for (const auto& file : c.theory_files) {
		const CheckedTheory& th = c.theories.at(file);
		TranslationResult t = two_sortify_theory(th, {}, o.budget);
		f.expect(equal(two_sortify_subst(identity_substitution(th), {}, o.budget), identity_substitution(t.translated)),
		         file + ": identity");
	}
	for (const auto& [outer_name, outer] : c.substitutions) {
		for (const auto& [inner_name, inner] : c.substitutions) {
			if (!alpha_equal(inner.target.theory(), outer.source.theory())) {
				continue;
			}
			Substitution composite = compose_substitutions(outer, inner);
			Theory all = inner.source.theory();
			for (const auto* th : {&inner.target, &outer.target}) {
				for (const auto& d : th->theory().decls) {
					all.decls.push_back(d);
				}
			}
			FamPrefix prefix = fresh_prefix(all, {});
			f.expect(equal(two_sortify_subst(composite, prefix, o.budget),
			               compose_substitutions(two_sortify_subst(outer, prefix, o.budget),
			                                     two_sortify_subst(inner, prefix, o.budget))),
			         outer_name + " after " + inner_name + ": composition");
		}
	}
	return {9, "naturality and functoriality", f.items.empty(), f.summary()};
}

// The sort term of a closed or open term's type.
Expr sort_of(const Context& ctx, const Expr& term, const ConvBudget& budget) {
	return normalize(infer_term(ctx, term, budget), budget.max_unfold)->first;
}

CriterionResult soundness(const Corpus& c, const SelftestOptions& o) {
	Failures f;
	std::size_t morphisms = 0;
	std::size_t equal_pairs = 0;
	std::size_t unequal_pairs = 0;
	std::size_t indeterminate = 0;
	for (const auto& file : c.theory_files) {
		const CheckedTheory& th = c.theories.at(file);
		auto it = c.models.find(file);
		if (it == c.models.end()) {
			continue;
		}
		const auto& models = it->second;

		// Evaluation commutes with every morphism between corpus models.
		Context closed(th);
		std::vector<Expr> terms = small_terms(closed, 4, 200, o.budget);
		for (const auto& [sname, src] : models) {
			for (const auto& [dname, dst] : models) {
				std::vector<ModelMorphism> homs;
				try {
					homs = enumerate_morphisms(src, dst, o.search_cap);
				} catch (const SearchSpaceExceeded&) {
					continue;
				}
				for (const auto& h : homs) {
					++morphisms;
					for (const auto& t : terms) {
						std::string image = map_element(src, h, {}, sort_of(closed, t, o.budget), eval_term(src, {}, t).label);
						f.expect(image == eval_term(dst, {}, t).label,
						         sname + " -> " + dname + ": " + print_term(t));
					}
				}
			}
		}

		// Conversion verdicts against evaluation, over two variables per plain sort.
		Context open(th);
		std::vector<std::pair<std::string, Expr>> binders;
		for (std::size_t i = 0; i < th.size(); ++i) {
			if (th.classification(i) == DeclClass::Sort && th.decl(i).type->kind == Kind::Set) {
				for (int k = 1; k <= 2; ++k) {
					Expr type = var(th.decl(i).name);
					binders.emplace_back(open.bind("x" + std::to_string(k), small(type)), type);
				}
			}
		}
		std::vector<Expr> open_terms = small_terms(open, 9, 80, o.budget);
		std::vector<Expr> types;
		for (const auto& t : open_terms) {
			types.push_back(sort_of(open, t, o.budget));
		}
		ConvBudget wide{o.budget.fuel * 10, o.budget.max_unfold * 10};
		for (std::size_t a = 0; a < open_terms.size(); ++a) {
			for (std::size_t b = a + 1; b < open_terms.size(); ++b) {
				if (!alpha_equal(types[a], types[b])) {
					continue;
				}
				Verdict v = conv(open, open_terms[a], open_terms[b], o.budget);
				std::string pair = print_term(open_terms[a]) + " vs " + print_term(open_terms[b]);
				if (v == Verdict::Indeterminate) {
					++indeterminate;
					continue;
				}
				if (v == Verdict::Unequal) {
					++unequal_pairs;
					f.expect(conv(open, open_terms[a], open_terms[b], wide) != Verdict::Equal, "false UNEQUAL: " + pair);
					continue;
				}
				++equal_pairs;
				for (const auto& [mname, m] : models) {
					for_each_instance(m, {}, binders, [&](const Env& env, const std::vector<std::string>&) {
						f.expect(eval_term(m, env, open_terms[a]) == eval_term(m, env, open_terms[b]),
						         mname + ": " + pair);
					});
				}
			}
		}
	}
	std::ostringstream detail;
	detail << f.summary() << "; " << morphisms << " morphisms, " << equal_pairs << " equal and " << unequal_pairs
	       << " unequal pairs, " << indeterminate << " indeterminate";
	return {10, "semantic soundness", f.items.empty(), detail.str()};
}

} // namespace

CriterionResult run_criterion(int id, const Corpus& corpus, const SelftestOptions& options) {
	using Fn = CriterionResult (*)(const Corpus&, const SelftestOptions&);
	static const std::vector<std::pair<Fn, const char*>> table = {
		{translation_goldens, "translation goldens"},
		{sort_equation_elimination, "sort-equation elimination"},
		{coreflector_typing, "coreflector well-typedness"},
		{strict_roundtrip, "strict coreflection roundtrip"},
		{comma_isomorphism, "comma isomorphism"},
		{adjunction, "adjunction hom-bijection"},
		{pushforward_goldens, "pushforward goldens"},
		{initial_models, "initial models"},
		{naturality, "naturality and functoriality"},
		{soundness, "semantic soundness"},
	};
	if (id < 1 || id > static_cast<int>(table.size())) {
		throw DomainError("no criterion " + std::to_string(id));
	}
	const auto& [fn, title] = table[static_cast<std::size_t>(id - 1)];
	try {
		return fn(corpus, options);
	} catch (const std::exception& e) {
		return {id, title, false, std::string("error: ") + e.what()};
	}
}

std::vector<CriterionResult> run_selftest(const SelftestOptions& options) {
	Corpus corpus = load_corpus(options.corpus, options.budget);
	std::vector<CriterionResult> out;
	for (int id = 1; id <= 10; ++id) {
		out.push_back(run_criterion(id, corpus, options));
	}
	return out;
}

} // namespace gatsort
