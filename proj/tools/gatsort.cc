// Command-line driver. Exit codes: 0 success, 1 domain failure, 2 usage or I/O error,
// 3 indeterminate (fuel exhausted or not saturated).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gatsort/coreflect.h"
#include "gatsort/error.h"
#include "gatsort/initial.h"
#include "gatsort/io.h"
#include "gatsort/models.h"
#include "gatsort/selftest.h"
#include "gatsort/sortify.h"

#ifndef GATSORT_CORPUS_DIR
#define GATSORT_CORPUS_DIR "corpus"
#endif

namespace {

using namespace gatsort;
using nlohmann::json;
namespace fs = std::filesystem;

struct Settings {
	ConvBudget budget;
	long double search_cap = kDefaultSearchCap;
	std::string prefix = "U,El";
	std::string format = "text";
	std::string output;
	std::size_t depth = 5;
	std::string index = "A";
	std::string corpus = GATSORT_CORPUS_DIR;
	int criterion = 0;
};

class Driver {
public:
	explicit Driver(const Settings& s) : s_(s) {}

	FamPrefix prefix() const {
		auto comma = s_.prefix.find(',');
		if (comma == std::string::npos || s_.prefix.find(',', comma + 1) != std::string::npos) {
			throw IoError("--prefix expects two names separated by a comma");
		}
		FamPrefix p{s_.prefix.substr(0, comma), s_.prefix.substr(comma + 1)};
		if (!valid_name(p.u_name) || !valid_name(p.el_name) || p.u_name == p.el_name) {
			throw IoError("--prefix expects two distinct valid names");
		}
		return p;
	}

	bool json_format() const { return s_.format == "json"; }

	void emit(const std::string& text) const {
		if (s_.output.empty()) {
			std::cout << text;
		} else {
			write_file(s_.output, text);
		}
	}

	CheckedTheory theory(const std::string& path) const { return load_theory(path, s_.budget); }

	TranslationResult translation(const CheckedTheory& th) const { return two_sortify_theory(th, prefix(), s_.budget); }

	// A model file for the translated theory, with its "theory" field kept as given.
	FiniteModel translated_model(const std::string& path, const TranslationResult& t) const {
		return load_model(path, t.translated);
	}

	int check(const std::string& path) const {
		CheckedTheory th = theory(path);
		json decls = json::array();
		std::ostringstream text;
		for (std::size_t i = 0; i < th.size(); ++i) {
			decls.push_back({{"name", th.decl(i).name}, {"class", to_string(th.classification(i))}});
			text << th.decl(i).name << " : " << to_string(th.classification(i)) << "\n";
		}
		emit(json_format() ? canonical(json{{"declarations", decls}}) : text.str());
		return 0;
	}

	int check_subst(const std::string& path) const {
		Substitution sub = load_substitution(path, prefix(), s_.budget);
		check_substitution(sub, s_.budget);
		emit(json_format() ? canonical(json{{"ok", true}}) : "ok\n");
		return 0;
	}

	int translate(const std::string& path) const {
		emit(print_theory(translation(theory(path)).translated.theory()));
		return 0;
	}

	int coreflect(const std::string& path) const {
		fs::path file = fs::path(path).filename();
		emit(print_substitution(translation(theory(path)).coreflector, "T(" + file.string() + ")", file.string()));
		return 0;
	}

	int push(const std::string& path) const {
		emit(print_theory(pushforward(theory(path), s_.index, s_.budget).theory()));
		return 0;
	}

	int is_family(const std::string& path) const {
		bool verdict = is_family_gat(theory(path), prefix());
		emit(json_format() ? canonical(json{{"family", verdict}}) : std::string(verdict ? "true\n" : "false\n"));
		return verdict ? 0 : 1;
	}

	int model(const std::string& action, const std::string& theory_path, const std::string& model_path) const {
		CheckedTheory th = theory(theory_path);
		if (action == "check") {
			load_model(model_path, th);
			emit(json_format() ? canonical(json{{"ok", true}}) : "ok\n");
			return 0;
		}
		TranslationResult t = translation(th);
		if (action == "sortify") {
			emit(canonical(sortify_model(load_model(model_path, th), t)));
			return 0;
		}
		if (action == "desortify") {
			emit(canonical(desortify_model(translated_model(model_path, t), t)));
			return 0;
		}
		FiniteModel m = load_model(model_path, th);
		bool same = canonical(desortify_model(sortify_model(m, t), t)) == canonical(m);
		emit(json_format() ? canonical(json{{"roundtrip", same ? "identity" : "differs"}})
		                   : std::string("roundtrip: ") + (same ? "identity" : "differs") + "\n");
		return same ? 0 : 1;
	}

	int comma(const std::string& action, const std::string& theory_path, const std::string& file) const {
		CheckedTheory th = theory(theory_path);
		TranslationResult t = translation(th);
		if (action == "to") {
			emit(canonical(comma_to_json(comma_of_model(translated_model(file, t), t))));
		} else {
			emit(canonical(model_of_comma(comma_from_json(th, load_json(file)), t)));
		}
		return 0;
	}

	int initial(const std::string& path) const {
		InitialModelResult r = initial_model_bounded(theory(path), s_.depth, s_.budget);
		r.model.source = fs::path(path).filename().string();
		json report = initial_report(r);
		emit(canonical(r.model));
		if (s_.output.empty()) {
			std::cerr << (json_format() ? report.dump() : describe_report(report)) << "\n";
		} else {
			write_file(s_.output + ".report.json", canonical(report));
		}
		return r.saturated ? 0 : 3;
	}

	int homs(const std::string& theory_path, const std::string& a, const std::string& b) const {
		CheckedTheory th = theory(theory_path);
		FiniteModel src = load_model(a, th);
		FiniteModel dst = load_model(b, th);
		std::vector<ModelMorphism> all = enumerate_morphisms(src, dst, s_.search_cap);
		json list = json::array();
		std::ostringstream text;
		text << all.size() << " morphisms\n";
		for (const auto& h : all) {
			list.push_back(morphism_to_json(src, h));
			text << list.back().dump() << "\n";
		}
		emit(json_format() ? canonical(json{{"count", all.size()}, {"morphisms", list}}) : text.str());
		return 0;
	}

	int adjoint_check(const std::string& theory_path, const std::string& m_path, const std::string& n_path) const {
		CheckedTheory th = theory(theory_path);
		TranslationResult t = translation(th);
		AdjunctionReport r = adjunction_check(load_model(m_path, th), translated_model(n_path, t), t, s_.search_cap);
		std::ostringstream text;
		text << "hom(L m, n): " << r.hom_translated << "\n"
		     << "hom(m, R n): " << r.hom_original << "\n"
		     << "bijective: " << (r.bijective ? "yes" : "no") << "\n"
		     << "unit identity: " << (r.unit_identity ? "yes" : "no") << "\n";
		emit(json_format() ? canonical(report_to_json(r)) : text.str());
		return r.ok() ? 0 : 1;
	}

	int selftest() const {
		SelftestOptions options;
		options.corpus = s_.corpus;
		options.budget = s_.budget;
		options.search_cap = s_.search_cap;
		Corpus corpus = load_corpus(options.corpus, options.budget);
		json results = json::array();
		bool all = true;
		for (int id = 1; id <= 10; ++id) {
			if (s_.criterion != 0 && id != s_.criterion) {
				continue;
			}
			CriterionResult r = run_criterion(id, corpus, options);
			all = all && r.passed;
			if (json_format()) {
				results.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
			} else {
				std::cout << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << " " << r.title << " ("
				          << r.detail << ")" << std::endl;
			}
			if (!r.passed) {
				std::cerr << "selftest: criterion " << r.id << " failed" << std::endl;
				break;
			}
		}
		if (json_format()) {
			emit(canonical(json{{"passed", all}, {"criteria", results}}));
		}
		return all ? 0 : 1;
	}

private:
	static std::string describe_report(const json& report) {
		std::ostringstream out;
		out << "depth used: " << report["depth_used"] << ", saturated: " << (report["saturated"] ? "yes" : "no")
		    << ", indeterminate pairs: " << report["indeterminate_pairs"];
		for (const auto& [sort, n] : report["classes"].items()) {
			out << ", " << sort << ": " << n;
		}
		return out.str();
	}

	Settings s_;
};

} // namespace

int main(int argc, char** argv) {
	Settings s;
	CLI::App app{"Two-sortification of generalised algebraic theories"};
	app.fallthrough();
	app.require_subcommand(1);
	app.add_option("--fuel", s.budget.fuel, "Conversion fuel (merge steps)")->capture_default_str();
	app.add_option("--max-unfold", s.budget.max_unfold, "Beta steps per comparison")->capture_default_str();
	app.add_option("--search-cap", s.search_cap, "Largest hom search space")->capture_default_str();
	app.add_option("--prefix", s.prefix, "Names of the family sorts, as U,El")->capture_default_str();
	app.add_option("--format", s.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
	app.add_option("-o,--output", s.output, "Write the artifact to this file");

	std::string a;
	std::string b;
	std::string c;
	std::string action;
	std::function<int(const Driver&)> run;

	auto one = [&](const std::string& name, const std::string& help, int (Driver::*fn)(const std::string&) const) {
		CLI::App* sub = app.add_subcommand(name, help);
		sub->add_option("theory", a, "Theory or substitution file")->required();
		sub->callback([&, fn] { run = [&, fn](const Driver& d) { return (d.*fn)(a); }; });
		return sub;
	};
	one("check", "Typecheck a theory and classify its declarations", &Driver::check);
	one("check-subst", "Typecheck a substitution", &Driver::check_subst);
	one("translate", "Print the two-sortified theory", &Driver::translate);
	one("coreflect", "Print the coreflector substitution", &Driver::coreflect);
	one("pushforward", "Print the theory of indexed families", &Driver::push)
		->add_option("--index", s.index, "Name of the index sort")
		->capture_default_str();
	one("is-family", "Decide whether a theory is a family GAT", &Driver::is_family);
	one("initial", "Build the bounded initial term model", &Driver::initial)
		->add_option("--depth", s.depth, "Largest term size")
		->capture_default_str();

	CLI::App* model = app.add_subcommand("model", "Model operations");
	model->add_option("action", action, "check, sortify, desortify or roundtrip")
		->required()
		->check(CLI::IsMember({"check", "sortify", "desortify", "roundtrip"}));
	model->add_option("theory", a, "Theory file")->required();
	model->add_option("model", b, "Model file")->required();
	model->callback([&] { run = [&](const Driver& d) { return d.model(action, a, b); }; });

	CLI::App* comma = app.add_subcommand("comma", "Translate between translated models and comma objects");
	comma->add_option("action", action, "to or from")->required()->check(CLI::IsMember({"to", "from"}));
	comma->add_option("theory", a, "Theory file")->required();
	comma->add_option("file", b, "Translated model (to) or comma object (from)")->required();
	comma->callback([&] { run = [&](const Driver& d) { return d.comma(action, a, b); }; });

	CLI::App* homs = app.add_subcommand("homs", "Enumerate model morphisms");
	homs->add_option("theory", a, "Theory file")->required();
	homs->add_option("source", b, "Source model")->required();
	homs->add_option("target", c, "Target model")->required();
	homs->callback([&] { run = [&](const Driver& d) { return d.homs(a, b, c); }; });

	CLI::App* adjoint = app.add_subcommand("adjoint-check", "Compare the hom-sets of the coreflection");
	adjoint->add_option("theory", a, "Theory file")->required();
	adjoint->add_option("model", b, "Model of the theory")->required();
	adjoint->add_option("translated", c, "Model of the translated theory")->required();
	adjoint->callback([&] { run = [&](const Driver& d) { return d.adjoint_check(a, b, c); }; });

	CLI::App* selftest = app.add_subcommand("selftest", "Run every acceptance check on the corpus");
	selftest->add_option("--corpus", s.corpus, "Corpus directory")->capture_default_str();
	selftest->add_option("--criterion", s.criterion, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
	selftest->callback([&] { run = [](const Driver& d) { return d.selftest(); }; });

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		return run(Driver(s));
	} catch (const ParseError& e) {
		std::cerr << "parse error: " << e.what() << "\n";
		return 1;
	} catch (const SearchSpaceExceeded& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	} catch (const Error& e) {
		std::cerr << "error: " << e.what() << "\n";
		return static_cast<int>(e.failure());
	} catch (const std::exception& e) {
		std::cerr << "internal error: " << e.what() << "\n";
		return 1;
	}
}
