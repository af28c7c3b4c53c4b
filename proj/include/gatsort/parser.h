#ifndef GATSORT_PARSER_H
#define GATSORT_PARSER_H

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatsort/expr.h"

namespace gatsort {

// Surface syntax:
//
//   theory = { decl } ;
//   decl   = NAME ":" type ";" ;
//   type   = "Set" | "(" NAME ":" term ")" type | term "=" term ":" type | term ;
//   term   = atom { atom } ;
//   atom   = NAME | "(" term ")" | "\" NAME ":" term "." term | "refl" atom ;
//
// `--` starts a comment that runs to the end of the line. Duplicate declaration names
// are rejected here. All functions throw ParseError.
Theory parse_theory(std::string_view text);
Expr parse_type(std::string_view text);
Expr parse_term(std::string_view text);

// A substitution file before its endpoints are resolved:
//
//   from <theory-ref> to <theory-ref>;
//   NAME := term;
//   ...
struct SubstitutionSyntax {
	std::string from;
	std::string to;
	std::vector<std::pair<std::string, Expr>> assignments;
};
SubstitutionSyntax parse_substitution(std::string_view text);

} // namespace gatsort

#endif
