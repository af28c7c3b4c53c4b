#ifndef GATSORT_SELFTEST_H
#define GATSORT_SELFTEST_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gatsort/kernel.h"
#include "gatsort/models.h"

namespace gatsort {

// The bundled fixtures, grouped by theory file name.
struct Corpus {
	std::filesystem::path dir;
	std::vector<std::string> theory_files; // the seven reference theories
	std::map<std::string, CheckedTheory> theories;
	std::map<std::string, std::vector<std::pair<std::string, FiniteModel>>> models;            // over the theory
	std::map<std::string, std::vector<std::pair<std::string, FiniteModel>>> translated_models; // over its translation
	std::vector<std::pair<std::string, Substitution>> substitutions;                           // all checked
};

Corpus load_corpus(const std::filesystem::path& dir, const ConvBudget& budget = {});

// Well-typed first-order terms of small type built from the operations and locals of
// `ctx`, by increasing size up to `max_size`, at most `cap` of them.
std::vector<Expr> small_terms(const Context& ctx, std::size_t max_size, std::size_t cap, const ConvBudget& budget);

struct SelftestOptions {
	std::filesystem::path corpus;
	ConvBudget budget;
	long double search_cap = kDefaultSearchCap;
	std::size_t random_models = 50;
	std::uint64_t seed = 20241;
};

struct CriterionResult {
	int id = 0;
	std::string title;
	bool passed = false;
	std::string detail;
};

CriterionResult run_criterion(int id, const Corpus& corpus, const SelftestOptions& options);
std::vector<CriterionResult> run_selftest(const SelftestOptions& options);

} // namespace gatsort

#endif
