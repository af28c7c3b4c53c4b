#ifndef GATSORT_ERROR_H
#define GATSORT_ERROR_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gatsort {

// Exit-code family a failure belongs to (see tools/gatsort.cc).
enum class Failure { Domain = 1, Usage = 2, Indeterminate = 3 };

class Error : public std::runtime_error {
public:
	Error(Failure failure, const std::string& what) : std::runtime_error(what), failure_(failure) {}
	Failure failure() const noexcept { return failure_; }

private:
	Failure failure_;
};

class ParseError : public Error {
public:
	ParseError(std::size_t line, std::size_t column, const std::string& message)
		: Error(Failure::Domain, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
		  line(line), column(column) {}
	std::size_t line;
	std::size_t column;
};

#define GATSORT_ERROR(Name, Kind)                                                   \
	class Name : public Error {                                                     \
	public:                                                                         \
		explicit Name(const std::string& what) : Error(Failure::Kind, what) {}     \
	}

GATSORT_ERROR(TypeError, Domain);
GATSORT_ERROR(MismatchError, Domain);
GATSORT_ERROR(FreshnessError, Domain);
GATSORT_ERROR(IndeterminateError, Indeterminate);
GATSORT_ERROR(DomainError, Domain);
GATSORT_ERROR(ShapeError, Domain);
GATSORT_ERROR(TotalityError, Domain);
GATSORT_ERROR(EquationError, Domain);
GATSORT_ERROR(HomError, Domain);
GATSORT_ERROR(InvariantError, Domain);
GATSORT_ERROR(CartesianViolation, Domain);
GATSORT_ERROR(NotSaturated, Indeterminate);
GATSORT_ERROR(WellDefinednessError, Domain);
GATSORT_ERROR(BudgetError, Domain);
GATSORT_ERROR(IoError, Usage);

#undef GATSORT_ERROR

class SearchSpaceExceeded : public Error {
public:
	explicit SearchSpaceExceeded(long double candidates)
		: Error(Failure::Domain, "search space exceeded: " + std::to_string(static_cast<double>(candidates)) +
		                             " candidates"),
		  candidates(candidates) {}
	long double candidates;
};

} // namespace gatsort

#endif
