#ifndef GATSORT_IO_H
#define GATSORT_IO_H

#include <filesystem>
#include <string>

#include "gatsort/kernel.h"
#include "gatsort/models.h"
#include "gatsort/sortify.h"

namespace gatsort {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

CheckedTheory load_theory(const std::filesystem::path& path, const ConvBudget& budget = {});

// Resolves a theory reference from a substitution header, relative to `base`. A
// reference of the form `T(<file>)` names the two-sortification of that file.
CheckedTheory resolve_theory_ref(const std::string& ref, const std::filesystem::path& base, const FamPrefix& prefix,
                                 const ConvBudget& budget = {});

// Assignments must name every target declaration, in target order.
Substitution load_substitution(const std::filesystem::path& path, const FamPrefix& prefix = {},
                               const ConvBudget& budget = {});

nlohmann::json load_json(const std::filesystem::path& path);

// Loads and checks a model of `theory`.
FiniteModel load_model(const std::filesystem::path& path, const CheckedTheory& theory);

} // namespace gatsort

#endif
