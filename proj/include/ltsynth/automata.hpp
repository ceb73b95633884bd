#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltsynth/errors.hpp"

namespace ltsynth {

using Word = std::vector<int>;
using PosPair = std::pair<int, int>;

// NFA over a finite alphabet; states and symbols are dense indices.
struct Nfa {
    std::vector<std::string> alphabet;
    std::vector<std::string> state_names;
    std::vector<char> initial;
    std::vector<char> final;
    // delta[p][a] is a sorted list of targets
    std::vector<std::vector<std::vector<int>>> delta;

    Nfa() = default;
    explicit Nfa(std::vector<std::string> sigma) : alphabet(std::move(sigma)) {}

    int num_states() const { return int(delta.size()); }
    int num_symbols() const { return int(alphabet.size()); }
    int add_state(const std::string& name = "", bool init = false, bool fin = false);
    void add_transition(int p, int a, int q);
    bool has_transition(int p, int a, int q) const;
    int symbol_index(const std::string& s) const;
    Word encode(const std::vector<std::string>& w) const;
    std::string state_name(int q) const;
    std::size_t num_transitions() const;
};

bool run_accepts(const Nfa& a, const Word& w);
bool run_accepts(const Nfa& a, const std::vector<std::string>& w);

Nfa determinize(const Nfa& a);  // complete DFA
Nfa complement(const Nfa& a);
Nfa intersect(const Nfa& a, const Nfa& b);
Nfa unite(const Nfa& a, const Nfa& b);
Nfa trim(const Nfa& a);
Nfa minimize(const Nfa& dfa);   // expects a complete DFA
bool is_empty(const Nfa& a);
bool same_language(const Nfa& a, const Nfa& b);
std::vector<Word> accepted_words_upto(const Nfa& a, int max_len);

std::string to_dot(const Nfa& a, const std::string& name = "nfa");

struct QueryAutomaton {
    Nfa base;
    std::vector<PosPair> selecting_pairs;  // state pairs
};

// 1-based (i,j) position pairs
std::set<PosPair> selected_pairs(const QueryAutomaton& q, const Word& u);

// builders
QueryAutomaton pred_leq_in(const std::vector<std::string>& sigma);
QueryAutomaton pred_lt_in(const std::vector<std::string>& sigma);
QueryAutomaton pred_eq(const std::vector<std::string>& sigma);
QueryAutomaton pred_succ_in(const std::vector<std::string>& sigma);
QueryAutomaton pred_label(const std::vector<std::string>& sigma, const std::string& s);
QueryAutomaton pred_between(const std::vector<std::string>& sigma, const std::string& s);
QueryAutomaton pred_regular_domain(const Nfa& lang);
QueryAutomaton pred_true(const std::vector<std::string>& sigma);
QueryAutomaton pred_first(const std::vector<std::string>& sigma);

enum class BoolOp { And, Or, Not };
QueryAutomaton combine(BoolOp op, const std::vector<QueryAutomaton>& args);

// Where the two marks of a marked word go when an atom is read.
// XY: psi(x,y); YX: psi(y,x); XX: psi(x,x); YY: psi(y,y); Global: some pair.
enum class ArgPattern { XY, YX, XX, YY, Global };

struct Atom {
    const QueryAutomaton* qa;
    ArgPattern pattern;
};

// Boolean function over atoms; truth[m] is f on the assignment whose bit i is atom i.
QueryAutomaton combine_fn(const std::vector<Atom>& atoms, const std::vector<char>& truth,
                          bool add_slack = true);

// Marked words: alphabet sigma x {-,x,y,xy}; symbol index a*4+m, m bit0 = x, bit1 = y.
Nfa marked_nfa(const QueryAutomaton& q, ArgPattern p);
Nfa marked_validity_dfa(int nsigma);
QueryAutomaton qa_from_marked_dfa(const Nfa& dfa, int nsigma, const std::vector<std::string>& sigma);
// adds transitions that leave the selected pairs unchanged
QueryAutomaton add_slack(const QueryAutomaton& q);

bool qa_never(const QueryAutomaton& q, ArgPattern p);   // no word selects anything
bool qa_always(const QueryAutomaton& q, ArgPattern p);  // every valid mark placement selected
QueryAutomaton reverse_pairs(const QueryAutomaton& q);
QueryAutomaton diagonal(const QueryAutomaton& q);  // psi(i,i) as pairs (i,i)
// automaton over a larger alphabet: symbol b reads like base_of[b]
QueryAutomaton lift_alphabet(const QueryAutomaton& q, const std::vector<std::string>& sigma,
                             const std::vector<int>& base_of);
Nfa lift_alphabet(const Nfa& a, const std::vector<std::string>& sigma, const std::vector<int>& base_of);

struct PredEntry {
    QueryAutomaton qa;
    int arity = 2;
};

struct PredicateTable {
    std::vector<std::string> sigma;
    std::map<std::string, PredEntry> entries;

    void add(const std::string& name, QueryAutomaton qa, int arity);
    const PredEntry* find(const std::string& name) const;
    int symbol_index(const std::string& s) const;
    Word encode(const std::vector<std::string>& w) const;
};

// leq, lt, eq, succ, first, true, lab_s, bet_s for every s in sigma
PredicateTable builtin_table(const std::vector<std::string>& sigma);
// adds every *.aut file of dir (name = file stem); returns the sigma found
void load_predicate_dir(PredicateTable& t, const std::string& dir);

QueryAutomaton parse_query_automaton(const std::string& text, int* arity = nullptr);
std::string print_query_automaton(const QueryAutomaton& q, int arity = 2);
Nfa parse_nfa(const std::string& text);
std::string print_nfa(const Nfa& a);

} // namespace ltsynth
