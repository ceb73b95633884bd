#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltsynth/logic.hpp"
#include "ltsynth/normalize.hpp"
#include "ltsynth/profiles.hpp"

namespace ltsynth {

// One disjunct of the sentence, compiled down to a constraint instance.
struct Branch {
    F formula;           // the disjunct before the non-erasing step
    bool non_erasing;    // false when the disjunct already forces every input position to be an origin
    Document doc;        // after the non-erasing step
    SnfFormula snf;
    std::shared_ptr<const Context> ctx;
    std::vector<char> allowed;  // labels the search may use; empty means all
};

struct CompiledSpec {
    Document original;
    PredicateTable table;
    EltReduction reduced;  // set variables turned into label bits; identity without them
    std::vector<Branch> branches;
    std::vector<int> base_symbol;  // extended input symbol -> index in the original input alphabet

    const std::vector<std::string>& sigma() const { return original.input_alphabet; }
    // drops the non-erasing positions, the bits of Scott normal form and the set-variable bits
    OGraph project(const OGraph& g) const;
};

CompiledSpec compile(const Document& d, const PredicateTable& table);

enum class Verdict { Sat, Unsat, Indeterminate };
const char* verdict_name(Verdict v);

struct QueryOptions {
    std::size_t budget = 1000000;  // visited states per query, all branches together
};

struct SatResult {
    Verdict verdict = Verdict::Indeterminate;
    std::optional<OGraph> witness;  // projected, when sat
    std::size_t visited = 0;
};

SatResult check_sat(const CompiledSpec& spec, const QueryOptions& opt = {});
Verdict is_satisfiable(const CompiledSpec& spec, const QueryOptions& opt = {});
// throws BudgetExceeded when undecided
std::optional<OGraph> witness(const CompiledSpec& spec, const QueryOptions& opt = {});

// a model over the extended labels of one branch, before projection
struct RawModel {
    std::size_t branch = 0;
    OGraph graph;
};
// any input when u is empty; throws BudgetExceeded
std::optional<RawModel> find_model(const CompiledSpec& spec, const std::vector<std::string>& u,
                                   const QueryOptions& opt = {});

// u over the original input alphabet; both throw BudgetExceeded
bool domain_contains(const CompiledSpec& spec, const std::vector<std::string>& u, const QueryOptions& opt = {});
std::optional<OGraph> apply_spec(const CompiledSpec& spec, const std::vector<std::string>& u,
                            const QueryOptions& opt = {});
// over the original input alphabet; throws BudgetExceeded rather than return a partial automaton
Nfa domain_nfa(const CompiledSpec& spec, const QueryOptions& opt = {});

struct EquivResult {
    Verdict verdict = Verdict::Indeterminate;  // Sat: equivalent
    std::optional<OGraph> counterexample;      // model of exactly one side
    std::size_t visited = 0;
};
// both sides over the same alphabets; set variables are refused
EquivResult equivalent(const Document& a, const Document& b, const PredicateTable& table,
                       const QueryOptions& opt = {});

// no input of length <= n has two models with outputs of length <= max_output
bool bounded_functional(const Document& d, const PredicateTable& table, int n, int max_output = 4);

} // namespace ltsynth
