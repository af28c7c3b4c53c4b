#include "gatsort/io.h"

#include <fstream>
#include <sstream>

#include "gatsort/error.h"
#include "gatsort/parser.h"

namespace gatsort {

std::string read_file(const std::filesystem::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw IoError("cannot read '" + path.string() + "'");
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
	std::ofstream out(path, std::ios::binary);
	if (!out || !(out << content)) {
		throw IoError("cannot write '" + path.string() + "'");
	}
}

CheckedTheory load_theory(const std::filesystem::path& path, const ConvBudget& budget) {
	std::string text = read_file(path);
	try {
		return check_theory(parse_theory(text), budget);
	} catch (const ParseError& e) {
		throw ParseError(e.line, e.column, path.string() + ": " + e.what());
	}
}

CheckedTheory resolve_theory_ref(const std::string& ref, const std::filesystem::path& base, const FamPrefix& prefix,
                                 const ConvBudget& budget) {
	if (ref.size() > 3 && ref.rfind("T(", 0) == 0 && ref.back() == ')') {
		CheckedTheory inner = resolve_theory_ref(ref.substr(2, ref.size() - 3), base, prefix, budget);
		return two_sortify_theory(inner, prefix, budget).translated;
	}
	std::filesystem::path path(ref);
	if (path.is_relative()) {
		path = base / path;
	}
	return load_theory(path, budget);
}

Substitution load_substitution(const std::filesystem::path& path, const FamPrefix& prefix, const ConvBudget& budget) {
	SubstitutionSyntax syntax = parse_substitution(read_file(path));
	std::filesystem::path base = path.parent_path();
	Substitution s;
	s.source = resolve_theory_ref(syntax.from, base, prefix, budget);
	s.target = resolve_theory_ref(syntax.to, base, prefix, budget);
	const auto& decls = s.target.theory().decls;
	for (std::size_t i = 0; i < syntax.assignments.size(); ++i) {
		const std::string& name = syntax.assignments[i].first;
		if (i >= decls.size()) {
			throw TypeError("assignment for '" + name + "', which the target does not declare");
		}
		if (name != decls[i].name) {
			throw TypeError("expected the assignment for '" + decls[i].name + "', found '" + name + "'");
		}
		s.assignments.push_back(syntax.assignments[i].second);
	}
	if (s.assignments.size() < decls.size()) {
		throw TypeError("no assignment for target declaration '" + decls[s.assignments.size()].name + "'");
	}
	return s;
}

nlohmann::json load_json(const std::filesystem::path& path) {
	std::string text = read_file(path);
	try {
		return nlohmann::json::parse(text);
	} catch (const nlohmann::json::parse_error& e) {
		throw ShapeError(path.string() + ": malformed JSON: " + e.what());
	}
}

FiniteModel load_model(const std::filesystem::path& path, const CheckedTheory& theory) {
	FiniteModel m = model_from_json(theory, load_json(path));
	check_model(m);
	return m;
}

} // namespace gatsort
