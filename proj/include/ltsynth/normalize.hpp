#pragma once

#include <map>
#include <string>
#include <vector>

#include "ltsynth/logic.hpp"

namespace ltsynth {

// Output gets `#` (origin 1) and one copy per input position after v.
// Copies are `^a` for input letter a, or a single filler label `^` when
// copy_letters is false.
Document make_non_erasing(const Document& d, bool copy_letters = true);
// forall_in x. exists_out y. o(y) = x as a top-level conjunct
bool has_surjectivity_conjunct(const F& f);

F to_output_form(const F& f);

// forall_out x forall_out y. all  &  AND_i forall_out x exists_out y. exists_parts[i]
struct SnfFormula {
    F all;
    std::vector<F> exists_parts;
    std::vector<std::string> bits;         // fresh unary predicates P1..Pk
    std::vector<std::string> base_labels;  // output labels before bits are added
};

SnfFormula scott_normal_form(const F& output_formula, const std::vector<std::string>& base_labels);
F snf_formula(const SnfFormula& s);  // the sentence it stands for
std::string dump_snf(const SnfFormula& s);

// label of an extended output letter: base plus the set bits, "a%P1%P3"
std::string ext_label(const std::string& base, const std::vector<std::string>& bits, unsigned mask);
std::string label_base(const std::string& ext);

enum class Dir { Up, Down, Same };  // y after x, y before x, y = x

struct ExTuple {
    int label;
    Dir dir;
    int pred;
};
struct ExConstraint {
    int label;
    std::vector<ExTuple> tuples;
};
struct UnConstraint {
    int label1, label2;
    Dir dir;
    int pred;
    bool always = false;  // pred selects every pair
};

struct McpInstance {
    std::vector<std::string> sigma;
    std::vector<std::string> labels;      // every extended label in the instance
    std::vector<char> alive;              // labels that may occur in a model
    std::vector<QueryAutomaton> preds;
    std::vector<std::string> pred_names;
    std::vector<ExConstraint> exists;
    std::vector<UnConstraint> forall;

    int label_index(const std::string& l) const;  // -1 if absent
};

McpInstance compile_mcp(const SnfFormula& s, const PredicateTable& table);
std::string dump_mcp(const McpInstance& c);
// seeds closed under witness targets of their existential constraints
std::vector<char> needed_labels(const McpInstance& c, const std::vector<char>& seeds);
// g over the instance's labels; false when a label is unknown
bool satisfies_mcp(const OGraph& g, const McpInstance& c);

} // namespace ltsynth
