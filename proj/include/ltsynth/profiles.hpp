#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltsynth/bits.hpp"
#include "ltsynth/normalize.hpp"

namespace ltsynth {

// Right: the output position has its origin to the right of the current column.
enum class CKind : std::uint8_t { Local, Right, Left };

// r indexes Context::rel; -1 for Local clauses
struct Clause {
    CKind kind = CKind::Local;
    int label = 0;
    int r = -1;
    bool operator==(const Clause&) const = default;
};

struct Profile {
    int sigma = 0;
    int s = 0;  // Context::sets index
    std::vector<Clause> clauses;
    bool operator==(const Profile&) const = default;
};

using Sequence = std::vector<Profile>;

// Precomputed tables over the tagged union S_Psi of the instance's predicates.
// Relations over S_Psi are bitsets indexed p * n + q and interned.
class Context {
public:
    explicit Context(McpInstance c);

    const McpInstance& mcp() const { return c_; }
    int num_states() const { return n_; }
    int num_symbols() const { return int(c_.sigma.size()); }

    int intern_rel(const Bits& r) const;
    int intern_set(const Bits& s) const;
    const Bits& rel(int id) const { return rels_[id]; }
    const Bits& set(int id) const { return sets_[id]; }
    Bits empty_set() const { return Bits(n_); }
    Bits empty_rel() const { return Bits(std::size_t(n_) * n_); }

    Bits post(const Bits& s, int a) const;
    Bits pre(const Bits& s, int a) const;
    const Bits& initial() const { return init_; }
    const Bits& final() const { return fin_; }
    const Bits& sel(int label) const { return sel_[label]; }

    // exact run sets of a word: S_k for k = 1..n (index k-1)
    std::vector<Bits> run_sets(const Word& u) const;
    // pairs (p,q), p at column k, q at column j, both on accepting runs, q selectable for label
    Bits run_relation(const Word& u, const std::vector<Bits>& S, int k, int j, int label) const;

    // successor relations; nullopt when there is none
    std::optional<int> left_successor(const Clause& a, const Bits& s, const Bits& s2, int sigma) const;
    int local_relation(int label, const Bits& s, const Bits& s2, int sigma) const;  // exact R before a Local
    int max_pred(int r2, const Bits& s, int sigma) const;
    bool is_successor(const Clause& a, const Clause& b, const Bits& s, const Bits& s2, int sigma) const;

    bool witnesses(const Clause& c, const Bits& s, int pred) const;
    // pred(x, y) for a relation r of x read at y's column; transposed: pred(y, x)
    bool rel_selects(int r, int pred, bool transposed) const;
    bool diag_selects(const Bits& s, int pred) const { return s.intersects(diag_[pred]); }
    // some later position could still complete pred(x, .) from relation r
    bool may_select_later(const Bits& r, int pred) const { return r.intersects(fut_[pred]); }

    // predicate and constraint indexes
    const std::vector<std::vector<int>>& exists_by_label() const { return ex_by_label_; }
    const std::vector<std::vector<int>>& forall_by_label() const { return un_by_label_; }
    const std::vector<int>& forall_by_pair(int l1, int l2) const { return un_by_pair_[std::size_t(l1) * nl_ + l2]; }

    // the sets reachable backwards from the final states, and pre-images per letter
    const std::vector<int>& back_family() const { return back_; }
    const std::vector<int>& back_family(int sigma) const { return back_by_sigma_[sigma]; }

    std::string clause_name(const Clause& c) const;
    std::string set_name(const Bits& s) const;
    std::string rel_name(const Bits& r) const;

private:
    McpInstance c_;
    int n_ = 0;
    int nl_ = 0;
    std::vector<int> offset_;
    std::vector<std::string> state_names_;
    std::vector<std::vector<Bits>> post_, pre_;  // [state][symbol]
    Bits init_, fin_;
    std::vector<Bits> sp_;    // per predicate, over pairs
    std::vector<Bits> diag_;  // per predicate: p with (p,p) selected
    std::vector<Bits> spt_;   // transposed
    std::vector<Bits> fut_;
    std::vector<Bits> sel_;
    std::vector<std::vector<int>> ex_by_label_, un_by_label_, un_by_pair_;
    std::vector<int> back_;
    std::vector<std::vector<int>> back_by_sigma_;

    mutable std::vector<Bits> rels_, sets_;
    mutable std::unordered_map<Bits, int> rel_ids_, set_ids_;
};

// abstraction of o-graphs
Profile full_profile(const Context& ctx, const OGraph& g, int k);  // k 1-based
Profile alpha(const Profile& p);
Sequence seq(const Context& ctx, const OGraph& g);
Word input_word(const Context& ctx, const OGraph& g);

bool is_valid(const Context& ctx, const Profile& p);
bool is_initial(const Context& ctx, const Profile& p);
bool is_final(const Context& ctx, const Profile& p);
// edges (i, j) between clause indices, or nullopt when not consistent
std::optional<std::vector<std::pair<int, int>>> consistency_edges(const Context& ctx, const Profile& a,
                                                                  const Profile& b);
bool consistent(const Context& ctx, const Profile& a, const Profile& b);

struct Vertex {
    int col = 0;  // 0-based column
    int row = 0;
    bool operator==(const Vertex&) const = default;
    auto operator<=>(const Vertex&) const = default;
};
struct GsGraph {
    std::vector<std::vector<Vertex>> next;  // next[col][row], col = -1 when none
    std::vector<std::vector<Vertex>> prev;
};
GsGraph build_gs(const Context& ctx, const Sequence& s);  // requires pairwise consistency
std::vector<std::vector<Vertex>> maximal_paths(const Sequence& s, const GsGraph& g);
// less[i][j]: path i before path j in the transitive closure of the row order
std::vector<std::vector<char>> partial_order(const Sequence& s, const std::vector<std::vector<Vertex>>& paths);
bool is_maximal(const Context& ctx, const Sequence& s);
// valid, consistent, initial, final, maximal, and a Local in every column
bool is_good(const Context& ctx, const Sequence& s);

// o-graph over extended labels; least Local first among the minimal paths
OGraph linearize(const Context& ctx, const Sequence& s);
// every linearization, up to limit
std::vector<OGraph> all_linearizations(const Context& ctx, const Sequence& s, std::size_t limit);

// The enriched profile automaton: the current profile plus the states reached
// so far that are on no accepting run.
struct EnrichedState {
    Profile p;
    Bits dead;
};
std::optional<EnrichedState> enriched_start(const Context& ctx, const Profile& p);
std::optional<EnrichedState> enriched_step(const Context& ctx, const EnrichedState& st, const Profile& next);
bool enriched_accepts(const Context& ctx, const EnrichedState& st);

struct SearchOptions {
    std::size_t budget = 1000000;
    std::vector<char> allowed;  // labels the search may use; empty means all alive labels
    int max_new = 0;            // new output positions per column; 0 for no bound
};

struct SearchStats {
    std::size_t visited = 0;
    std::size_t expanded = 0;
};

// Forward search for models of the instance. A state holds the letter, the run
// set S, the forward set, and the output positions produced so far in output
// order: the current column's positions as Local clauses, older ones as Left
// clauses, each with the existential constraints it still waits for.
// Equal clauses without pending constraints keep their first and last copy.
class ProfileSearch {
public:
    ProfileSearch(const Context& ctx, SearchOptions opt);

    std::optional<OGraph> find_any();
    // first model over u in generation order
    std::optional<OGraph> find_for(const Word& u);
    // column i reads one of choices[i], tried in the given order
    std::optional<OGraph> find_for(const std::vector<std::vector<int>>& choices);
    // all reachable states; transitions read the column letter
    Nfa domain_nfa();

    const SearchStats& stats() const { return stats_; }

    struct Item {
        CKind kind = CKind::Local;  // Local or Left
        int label = 0;
        int r = -1;
        std::uint32_t pend = 0;     // bits over exists_by_label()[label]
        bool operator==(const Item&) const = default;
    };
    struct State {
        int sigma = -1;  // -1: before the first column
        int s = -1, fwd = -1;
        std::vector<Item> items;
        bool operator==(const State&) const = default;
    };
    struct StateHash {
        std::size_t operator()(const State& s) const;
    };
    // how a successor was built: parent item index, or -1 - label for a new position
    using Tokens = std::vector<int>;

    std::vector<std::pair<State, Tokens>> successors(const State& st, int sigma2);
    bool accepting(const State& st) const;

private:
    const Context& ctx_;
    SearchOptions opt_;
    SearchStats stats_;
    std::unordered_map<State, int, StateHash> ids_;
    std::vector<State> states_;
    std::vector<int> parent_;
    std::vector<Tokens> how_;

    void reset();
    int intern(const State& st, int parent, const Tokens& how);
    bool label_ok(int l) const;
    void expand(const State& st, int sigma2, const Bits& s2, int fwd2, std::vector<std::pair<State, Tokens>>& out);
    OGraph rebuild(const std::vector<int>& path, const std::vector<Tokens>& hows) const;
};

// positions kept when equal items without pending constraints collapse to their
// first and last copy; empty when more than two equal pending items remain
std::optional<std::vector<int>> collapse_items(const std::vector<ProfileSearch::Item>& items);

std::string to_dot(const Context& ctx, const Sequence& s);
std::string print_sequence(const Context& ctx, const Sequence& s);

} // namespace ltsynth
