#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltsynth/automata.hpp"
#include "ltsynth/structures.hpp"

namespace ltsynth {

// var is 0 (x) or 1 (y); depth k >= 1 means o^k(var), which equals o(var).
struct Term {
    int var = 0;
    int depth = 0;
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

enum class Kind {
    True, False,
    OutLabel,   // name(t): output label, full label match
    Bit,        // fresh unary predicate name on an output position
    LeqOut,     // t1 <=out t2 (plain <= in data formulas)
    Pred,       // {name}(args)
    In, Out,
    Eq,
    MemberOf,   // name(t) for a set variable
    Not, And, Or, Implies, Iff,
    Quant,
};

enum class QKind { Exists, Forall };
enum class QType { Any, In, Out };

struct Node;
using F = std::shared_ptr<const Node>;

struct Node {
    Kind kind = Kind::True;
    std::string name;   // label, predicate as written, bit or set variable
    std::string key;    // resolved predicate table key
    std::vector<Term> terms;
    std::vector<F> kids;
    QKind q = QKind::Exists;
    QType qtype = QType::Any;
    int var = 0;
};

F mk_true();
F mk_false();
F mk_bool(bool b);
F mk_label(const std::string& g, Term t);
F mk_bit(const std::string& p, Term t);
F mk_leq(Term a, Term b);
F mk_pred(const std::string& name, const std::string& key, std::vector<Term> args);
F mk_in(Term t);
F mk_out(Term t);
F mk_eq(Term a, Term b);
F mk_member(const std::string& set, Term t);
F mk_not(F a);
F mk_and(F a, F b);
F mk_or(F a, F b);
F mk_and(const std::vector<F>& xs);
F mk_or(const std::vector<F>& xs);
F mk_implies(F a, F b);
F mk_iff(F a, F b);
F mk_quant(QKind q, QType t, int var, F body);

inline Term tv(int v) { return {v, 0}; }
inline Term to(int v) { return {v, 1}; }

bool is_atom(const F& f);
bool is_quantifier_free(const F& f);
bool structurally_equal(const F& a, const F& b);
int free_vars(const F& f);  // bitmask over x, y

// A parsed formula file. setvars non-empty means an existential second-order sentence.
struct Document {
    std::vector<std::string> input_alphabet;
    std::vector<std::string> output_alphabet;
    std::vector<std::string> setvars;
    F body;
};

// Reads `input:` / `output:` directives only.
void read_directives(const std::string& text, std::vector<std::string>& input,
                     std::vector<std::string>& output);
Document parse(const std::string& text, const PredicateTable& table);
F parse_formula(const std::string& text, const PredicateTable& table);
// Builds the table from the input directive and/or a predicate directory, then parses.
Document load_document(const std::string& text, const std::string& preds_dir, PredicateTable& table);

std::string print(const F& f, bool data_syntax = false);
std::string print(const Document& d);

std::vector<std::string> labels_used(const F& f);  // OutLabel names, sorted

void check_sentence(const F& f);  // NotASentence on free variables

bool evaluate(const F& f, const OGraph& g, const PredicateTable& table);
// sentences with set variables: some assignment over input and output positions
bool evaluate(const Document& d, const OGraph& g, const PredicateTable& table);
bool evaluate_ld(const F& f, const TypedDataWord& w, const PredicateTable& table);

F negate(const F& f);
F negate(const Document& d);
F nnf(const F& f);
F simplify(const F& f);

// ∃x φ -> ∃in x φ ∨ ∃out x φ, atoms of the wrong type -> false, in/out tests folded
F split_and_type(const F& f);
// eliminates input quantifiers assuming non-erasing models
F output_form(const F& f);
F lt_to_ld(const F& f);
F ld_to_lt(const F& f);

struct EltReduction {
    Document doc;                  // no set variables, extended alphabets
    PredicateTable table;          // predicates lifted to the extended input alphabet
    std::map<std::string, std::string> input_base;   // extended input letter -> base
    std::map<std::string, std::string> output_base;  // extended output label -> base
};
EltReduction elt_reduce(const Document& d, const PredicateTable& table);
OGraph project_graph(const OGraph& g, const std::map<std::string, std::string>& in_base,
                     const std::map<std::string, std::string>& out_base);

} // namespace ltsynth
