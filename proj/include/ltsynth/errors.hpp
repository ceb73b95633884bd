#pragma once

#include <stdexcept>
#include <string>

namespace ltsynth {

enum class ErrorKind {
    Input,
    Syntax,
    VariableLimit,
    UnknownPredicate,
    Arity,
    NotASentence,
    NotDataFormula,
    NotClosedUnderNegation,
    AlphabetClash,
    PipelineOrder,
    Precondition,
    BudgetExceeded,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(k)) + ": " + msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::size_t explored)
        : Error(ErrorKind::BudgetExceeded, "explored " + std::to_string(explored) + " states"),
          explored_(explored) {}
    std::size_t explored() const { return explored_; }

private:
    std::size_t explored_;
};

} // namespace ltsynth
