#include "ltsynth/automata.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ltsynth/bits.hpp"

namespace ltsynth {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::VariableLimit: return "VariableLimit";
    case ErrorKind::UnknownPredicate: return "UnknownPredicate";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::NotASentence: return "NotASentence";
    case ErrorKind::NotDataFormula: return "NotDataFormula";
    case ErrorKind::NotClosedUnderNegation: return "NotClosedUnderNegation";
    case ErrorKind::AlphabetClash: return "AlphabetClash";
    case ErrorKind::PipelineOrder: return "PipelineOrder";
    case ErrorKind::Precondition: return "PreconditionError";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    }
    return "Error";
}

int Nfa::add_state(const std::string& name, bool init, bool fin) {
    state_names.push_back(name);
    initial.push_back(init);
    final.push_back(fin);
    delta.emplace_back(alphabet.size());
    return int(delta.size()) - 1;
}

void Nfa::add_transition(int p, int a, int q) {
    auto& v = delta[p][a];
    auto it = std::lower_bound(v.begin(), v.end(), q);
    if (it == v.end() || *it != q) v.insert(it, q);
}

bool Nfa::has_transition(int p, int a, int q) const {
    const auto& v = delta[p][a];
    return std::binary_search(v.begin(), v.end(), q);
}

int Nfa::symbol_index(const std::string& s) const {
    for (int i = 0; i < num_symbols(); ++i)
        if (alphabet[i] == s) return i;
    throw Error(ErrorKind::Input, "unknown symbol '" + s + "'");
}

Word Nfa::encode(const std::vector<std::string>& w) const {
    Word r;
    for (auto& s : w) r.push_back(symbol_index(s));
    return r;
}

std::string Nfa::state_name(int q) const {
    if (q < int(state_names.size()) && !state_names[q].empty()) return state_names[q];
    return "q" + std::to_string(q);
}

std::size_t Nfa::num_transitions() const {
    std::size_t n = 0;
    for (auto& row : delta)
        for (auto& v : row) n += v.size();
    return n;
}

static Bits initial_set(const Nfa& a) {
    Bits b(a.num_states());
    for (int q = 0; q < a.num_states(); ++q)
        if (a.initial[q]) b.set(q);
    return b;
}

static Bits post(const Nfa& a, const Bits& s, int sym) {
    Bits r(a.num_states());
    s.for_each([&](std::size_t p) {
        for (int q : a.delta[p][sym]) r.set(q);
    });
    return r;
}

bool run_accepts(const Nfa& a, const Word& w) {
    Bits cur = initial_set(a);
    for (int sym : w) {
        if (sym < 0 || sym >= a.num_symbols()) throw Error(ErrorKind::Input, "symbol out of range");
        cur = post(a, cur, sym);
    }
    bool acc = false;
    cur.for_each([&](std::size_t q) { acc = acc || a.final[q]; });
    return acc;
}

bool run_accepts(const Nfa& a, const std::vector<std::string>& w) { return run_accepts(a, a.encode(w)); }

Nfa determinize(const Nfa& a) {
    Nfa d(a.alphabet);
    std::unordered_map<Bits, int> index;
    std::vector<Bits> sets;
    auto get = [&](const Bits& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        bool fin = false;
        s.for_each([&](std::size_t q) { fin = fin || a.final[q]; });
        int id = d.add_state("", sets.empty(), fin);
        index.emplace(s, id);
        sets.push_back(s);
        return id;
    };
    get(initial_set(a));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (int sym = 0; sym < a.num_symbols(); ++sym) {
            Bits t = post(a, sets[i], sym);
            int j = get(t);
            d.add_transition(int(i), sym, j);
        }
    }
    return d;
}

Nfa complement(const Nfa& a) {
    Nfa d = determinize(a);
    for (auto& f : d.final) f = !f;
    return d;
}

static void check_same_alphabet(const Nfa& a, const Nfa& b) {
    if (a.alphabet != b.alphabet) throw Error(ErrorKind::Input, "automata over different alphabets");
}

Nfa intersect(const Nfa& a, const Nfa& b) {
    check_same_alphabet(a, b);
    Nfa r(a.alphabet);
    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> todo;
    auto get = [&](int p, int q) {
        auto key = std::make_pair(p, q);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = r.add_state("", a.initial[p] && b.initial[q], a.final[p] && b.final[q]);
        index.emplace(key, id);
        todo.push_back(key);
        return id;
    };
    for (int p = 0; p < a.num_states(); ++p)
        if (a.initial[p])
            for (int q = 0; q < b.num_states(); ++q)
                if (b.initial[q]) get(p, q);
    for (std::size_t i = 0; i < todo.size(); ++i) {
        auto [p, q] = todo[i];
        for (int sym = 0; sym < a.num_symbols(); ++sym)
            for (int p2 : a.delta[p][sym])
                for (int q2 : b.delta[q][sym]) {
                    int t = get(p2, q2);
                    r.add_transition(int(i), sym, t);
                }
    }
    return r;
}

Nfa unite(const Nfa& a, const Nfa& b) {
    check_same_alphabet(a, b);
    Nfa r(a.alphabet);
    for (int p = 0; p < a.num_states(); ++p) r.add_state(a.state_name(p), a.initial[p], a.final[p]);
    int off = r.num_states();
    for (int p = 0; p < b.num_states(); ++p) r.add_state(b.state_name(p) + "'", b.initial[p], b.final[p]);
    for (int p = 0; p < a.num_states(); ++p)
        for (int s = 0; s < a.num_symbols(); ++s)
            for (int q : a.delta[p][s]) r.add_transition(p, s, q);
    for (int p = 0; p < b.num_states(); ++p)
        for (int s = 0; s < b.num_symbols(); ++s)
            for (int q : b.delta[p][s]) r.add_transition(off + p, s, off + q);
    return r;
}

Nfa trim(const Nfa& a) {
    int n = a.num_states();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<std::vector<int>> rev(n);
    std::deque<int> q;
    for (int p = 0; p < n; ++p) {
        for (int s = 0; s < a.num_symbols(); ++s)
            for (int t : a.delta[p][s]) rev[t].push_back(p);
        if (a.initial[p]) fwd[p] = 1, q.push_back(p);
    }
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        for (auto& v : a.delta[p])
            for (int t : v)
                if (!fwd[t]) fwd[t] = 1, q.push_back(t);
    }
    for (int p = 0; p < n; ++p)
        if (a.final[p]) bwd[p] = 1, q.push_back(p);
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        for (int t : rev[p])
            if (!bwd[t]) bwd[t] = 1, q.push_back(t);
    }
    Nfa r(a.alphabet);
    std::vector<int> map(n, -1);
    for (int p = 0; p < n; ++p)
        if (fwd[p] && bwd[p]) map[p] = r.add_state(a.state_name(p), a.initial[p], a.final[p]);
    for (int p = 0; p < n; ++p) {
        if (map[p] < 0) continue;
        for (int s = 0; s < a.num_symbols(); ++s)
            for (int t : a.delta[p][s])
                if (map[t] >= 0) r.add_transition(map[p], s, map[t]);
    }
    return r;
}

Nfa minimize(const Nfa& dfa) {
    // Moore refinement on the reachable part of a complete DFA
    Nfa d = dfa;
    int n = d.num_states();
    if (n == 0) return d;
    std::vector<int> cls(n);
    for (int p = 0; p < n; ++p) cls[p] = d.final[p] ? 1 : 0;
    int ncls = 0;
    while (true) {
        std::map<std::vector<int>, int> sig;
        std::vector<int> next(n);
        for (int p = 0; p < n; ++p) {
            std::vector<int> key{cls[p]};
            for (int s = 0; s < d.num_symbols(); ++s)
                key.push_back(d.delta[p][s].empty() ? -1 : cls[d.delta[p][s][0]]);
            auto it = sig.find(key);
            if (it == sig.end()) it = sig.emplace(key, int(sig.size())).first;
            next[p] = it->second;
        }
        int k = int(sig.size());
        cls = next;
        if (k == ncls) break;
        ncls = k;
    }
    // renumber so the initial class comes first, in discovery order
    int init = 0;
    for (int p = 0; p < n; ++p)
        if (d.initial[p]) init = p;
    std::vector<int> order(ncls, -1);
    std::vector<int> rep;
    std::deque<int> q{init};
    order[cls[init]] = 0;
    rep.push_back(init);
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        for (int s = 0; s < d.num_symbols(); ++s)
            for (int t : d.delta[p][s])
                if (order[cls[t]] < 0) {
                    order[cls[t]] = int(rep.size());
                    rep.push_back(t);
                    q.push_back(t);
                }
    }
    Nfa r(d.alphabet);
    for (std::size_t i = 0; i < rep.size(); ++i) r.add_state("", i == 0, d.final[rep[i]]);
    for (std::size_t i = 0; i < rep.size(); ++i)
        for (int s = 0; s < d.num_symbols(); ++s)
            for (int t : d.delta[rep[i]][s]) r.add_transition(int(i), s, order[cls[t]]);
    return r;
}

bool is_empty(const Nfa& a) {
    std::vector<char> seen(a.num_states(), 0);
    std::deque<int> q;
    for (int p = 0; p < a.num_states(); ++p)
        if (a.initial[p]) seen[p] = 1, q.push_back(p);
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        if (a.final[p]) return false;
        for (auto& v : a.delta[p])
            for (int t : v)
                if (!seen[t]) seen[t] = 1, q.push_back(t);
    }
    return true;
}

bool same_language(const Nfa& a, const Nfa& b) {
    check_same_alphabet(a, b);
    Nfa da = determinize(a), db = determinize(b);
    std::set<std::pair<int, int>> seen{{0, 0}};
    std::deque<std::pair<int, int>> q{{0, 0}};
    while (!q.empty()) {
        auto [p, r] = q.front();
        q.pop_front();
        if (da.final[p] != db.final[r]) return false;
        for (int s = 0; s < da.num_symbols(); ++s) {
            std::pair<int, int> n{da.delta[p][s][0], db.delta[r][s][0]};
            if (seen.insert(n).second) q.push_back(n);
        }
    }
    return true;
}

std::vector<Word> accepted_words_upto(const Nfa& a, int max_len) {
    std::vector<Word> out;
    std::vector<std::pair<Word, Bits>> layer{{Word{}, initial_set(a)}};
    for (int len = 0; len <= max_len; ++len) {
        std::vector<std::pair<Word, Bits>> next;
        for (auto& [w, s] : layer) {
            bool acc = false;
            s.for_each([&](std::size_t q) { acc = acc || a.final[q]; });
            if (acc) out.push_back(w);
            if (len == max_len || s.none()) continue;
            for (int sym = 0; sym < a.num_symbols(); ++sym) {
                Word w2 = w;
                w2.push_back(sym);
                next.emplace_back(std::move(w2), post(a, s, sym));
            }
        }
        layer = std::move(next);
    }
    return out;
}

static std::string dot_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

std::string to_dot(const Nfa& a, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int p = 0; p < a.num_states(); ++p) {
        os << "  s" << p << " [label=\"" << dot_escape(a.state_name(p)) << "\"";
        if (a.final[p]) os << ", shape=doublecircle";
        os << "];\n";
        if (a.initial[p]) os << "  init" << p << " [shape=point];\n  init" << p << " -> s" << p << ";\n";
    }
    for (int p = 0; p < a.num_states(); ++p) {
        std::map<int, std::vector<std::string>> labels;
        for (int s = 0; s < a.num_symbols(); ++s)
            for (int q : a.delta[p][s]) labels[q].push_back(a.alphabet[s]);
        for (auto& [q, ls] : labels) {
            std::string l;
            for (auto& x : ls) l += (l.empty() ? "" : ",") + x;
            os << "  s" << p << " -> s" << q << " [label=\"" << dot_escape(l) << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// query automata

std::set<PosPair> selected_pairs(const QueryAutomaton& qa, const Word& u) {
    const Nfa& a = qa.base;
    int n = int(u.size());
    if (n == 0) throw Error(ErrorKind::Precondition, "selected_pairs needs a nonempty word");
    for (int s : u)
        if (s < 0 || s >= a.num_symbols()) throw Error(ErrorKind::Input, "symbol out of range");
    int ns = a.num_states();
    // fwd[k]: reachable before reading u(k) (k = 1..n+1), bwd[k]: can accept from u(k)
    std::vector<Bits> fwd(n + 2, Bits(ns)), bwd(n + 2, Bits(ns));
    fwd[1] = initial_set(a);
    for (int k = 1; k <= n; ++k) fwd[k + 1] = post(a, fwd[k], u[k - 1]);
    for (int q = 0; q < ns; ++q)
        if (a.final[q]) bwd[n + 1].set(q);
    for (int k = n; k >= 1; --k)
        for (int p = 0; p < ns; ++p)
            for (int q : a.delta[p][u[k - 1]])
                if (bwd[k + 1].test(q)) {
                    bwd[k].set(p);
                    break;
                }
    std::set<PosPair> out;
    for (auto [p, q] : qa.selecting_pairs) {
        // first component at i, second at j; handle i <= j and j < i
        for (int i = 1; i <= n; ++i) {
            if (!fwd[i].test(p) || !bwd[i].test(p)) continue;
            Bits cur(ns);
            cur.set(p);
            for (int j = i; j <= n; ++j) {
                if (cur.test(q) && bwd[j].test(q)) out.insert({i, j});
                cur = post(a, cur, u[j - 1]);
            }
        }
        for (int j = 1; j <= n; ++j) {
            if (!fwd[j].test(q) || !bwd[j].test(q)) continue;
            Bits cur(ns);
            cur.set(q);
            for (int i = j; i <= n; ++i) {
                if (i > j && cur.test(p) && bwd[i].test(p)) out.insert({i, j});
                cur = post(a, cur, u[i - 1]);
            }
        }
    }
    return out;
}

static void loop_all(Nfa& a, int p) {
    for (int s = 0; s < a.num_symbols(); ++s) a.add_transition(p, s, p);
}
static void edge_all(Nfa& a, int p, int q) {
    for (int s = 0; s < a.num_symbols(); ++s) a.add_transition(p, s, q);
}

// Point automata: runs 0* X 1*, X marks one position. The direct 0 -> 1 edge
// lets a run skip the mark; such runs select nothing.
static QueryAutomaton point_automaton(const std::vector<std::string>& sigma, int only_symbol,
                                      std::vector<PosPair> sp) {
    QueryAutomaton qa{Nfa(sigma), {}};
    Nfa& a = qa.base;
    int z = a.add_state("0", true, false);
    int x = a.add_state("X", true, false);
    int o = a.add_state("1", false, true);
    loop_all(a, z);
    edge_all(a, z, x);
    edge_all(a, z, o);
    loop_all(a, o);
    if (only_symbol < 0)
        edge_all(a, x, o);
    else
        a.add_transition(x, only_symbol, o);
    a.initial[o] = true;
    for (auto& [p, q] : sp) {
        p = p == 0 ? z : p == 1 ? x : o;
        q = q == 0 ? z : q == 1 ? x : o;
    }
    qa.selecting_pairs = sp;
    return qa;
}

QueryAutomaton pred_leq_in(const std::vector<std::string>& sigma) {
    return point_automaton(sigma, -1, {{1, 1}, {1, 2}});
}
QueryAutomaton pred_lt_in(const std::vector<std::string>& sigma) {
    return point_automaton(sigma, -1, {{1, 2}});
}
QueryAutomaton pred_eq(const std::vector<std::string>& sigma) {
    return point_automaton(sigma, -1, {{1, 1}});
}
QueryAutomaton pred_label(const std::vector<std::string>& sigma, const std::string& s) {
    int idx = -1;
    for (int i = 0; i < int(sigma.size()); ++i)
        if (sigma[i] == s) idx = i;
    if (idx < 0) throw Error(ErrorKind::Input, "label '" + s + "' not in alphabet");
    return point_automaton(sigma, idx, {{1, 1}});
}

QueryAutomaton pred_succ_in(const std::vector<std::string>& sigma) {
    QueryAutomaton qa{Nfa(sigma), {}};
    Nfa& a = qa.base;
    int z = a.add_state("0", true, false);
    int x = a.add_state("X", true, false);
    int y = a.add_state("Y", false, false);
    int o = a.add_state("1", true, true);
    loop_all(a, z);
    edge_all(a, z, x);
    edge_all(a, z, o);
    edge_all(a, x, y);
    edge_all(a, y, o);
    loop_all(a, o);
    qa.selecting_pairs = {{x, y}};
    return qa;
}

QueryAutomaton pred_between(const std::vector<std::string>& sigma, const std::string& s) {
    int idx = -1;
    for (int i = 0; i < int(sigma.size()); ++i)
        if (sigma[i] == s) idx = i;
    if (idx < 0) throw Error(ErrorKind::Input, "label '" + s + "' not in alphabet");
    QueryAutomaton qa{Nfa(sigma), {}};
    Nfa& a = qa.base;
    int qx = a.add_state("qx", true, false);
    int qs = a.add_state("qs", false, false);
    int qy = a.add_state("qy", false, false);
    int qf = a.add_state("qf", false, true);
    for (int p : {qx, qs, qy, qf}) loop_all(a, p);
    edge_all(a, qx, qs);
    a.add_transition(qs, idx, qy);
    edge_all(a, qy, qf);
    qa.selecting_pairs = {{qx, qy}};
    return qa;
}

QueryAutomaton pred_regular_domain(const Nfa& lang) {
    QueryAutomaton qa{trim(lang), {}};
    for (int p = 0; p < qa.base.num_states(); ++p)
        for (int q = 0; q < qa.base.num_states(); ++q) qa.selecting_pairs.push_back({p, q});
    return qa;
}

QueryAutomaton pred_true(const std::vector<std::string>& sigma) {
    QueryAutomaton qa{Nfa(sigma), {}};
    int s = qa.base.add_state("s", true, true);
    loop_all(qa.base, s);
    qa.selecting_pairs = {{s, s}};
    return qa;
}

QueryAutomaton pred_first(const std::vector<std::string>& sigma) {
    QueryAutomaton qa{Nfa(sigma), {}};
    Nfa& a = qa.base;
    int x = a.add_state("X", true, false);
    int o = a.add_state("1", true, true);
    edge_all(a, x, o);
    loop_all(a, o);
    qa.selecting_pairs = {{x, x}};
    return qa;
}

// ---------------------------------------------------------------------------
// marked words and the combinator algebra

static bool sp_is_product(const QueryAutomaton& q, std::vector<char>& X, std::vector<char>& Y) {
    int n = q.base.num_states();
    X.assign(n, 0);
    Y.assign(n, 0);
    std::set<PosPair> sp(q.selecting_pairs.begin(), q.selecting_pairs.end());
    for (auto [p, r] : sp) X[p] = 1, Y[r] = 1;
    std::size_t nx = std::count(X.begin(), X.end(), 1), ny = std::count(Y.begin(), Y.end(), 1);
    return sp.size() == nx * ny;
}

static std::vector<std::string> marked_alphabet(const std::vector<std::string>& sigma) {
    std::vector<std::string> r;
    const char* marks[4] = {"", "^x", "^y", "^xy"};
    for (auto& s : sigma)
        for (auto m : marks) r.push_back(s + m);
    return r;
}

Nfa marked_nfa(const QueryAutomaton& qa, ArgPattern pat) {
    const Nfa& a = qa.base;
    int ns = a.num_states(), nsig = a.num_symbols();
    Nfa r(marked_alphabet(a.alphabet));
    std::vector<char> X, Y;
    bool product = sp_is_product(qa, X, Y);
    // requirements at a mark: first component for argument 1, second for argument 2
    auto mark_ok = [&](int m, bool in_first, bool in_second) {
        bool mx = m & 1, my = m & 2;
        switch (pat) {
        case ArgPattern::XY: return (!mx || in_first) && (!my || in_second);
        case ArgPattern::YX: return (!my || in_first) && (!mx || in_second);
        case ArgPattern::XX: return !mx || (in_first && in_second);
        case ArgPattern::YY: return !my || (in_first && in_second);
        case ArgPattern::Global: return true;
        }
        return false;
    };
    if (pat == ArgPattern::Global) {
        // guess the pair, remember which components have been visited
        std::vector<PosPair> sp = qa.selecting_pairs;
        int nk = int(sp.size());
        auto id = [&](int s, int k, int f) { return ((s * nk) + k) * 4 + f; };
        for (int s = 0; s < ns; ++s)
            for (int k = 0; k < nk; ++k)
                for (int f = 0; f < 4; ++f) r.add_state("", false, false);
        for (int s = 0; s < ns; ++s)
            for (int k = 0; k < nk; ++k)
                for (int f = 0; f < 4; ++f) {
                    int st = id(s, k, f);
                    if (a.initial[s] && f == 0) r.initial[st] = 1;
                    if (a.final[s] && f == 3) r.final[st] = 1;
                    // at this position optionally record the visit
                    std::vector<int> fs{f};
                    int g = f;
                    if (s == sp[k].first) g |= 1;
                    if (s == sp[k].second) g |= 2;
                    if (g != f) {
                        fs.push_back(g);
                        if (s == sp[k].first) fs.push_back(f | 1);
                        if (s == sp[k].second) fs.push_back(f | 2);
                    }
                    for (int sym = 0; sym < nsig; ++sym)
                        for (int t : a.delta[s][sym])
                            for (int m = 0; m < 4; ++m)
                                for (int f2 : fs) r.add_transition(st, sym * 4 + m, id(t, k, f2));
                }
        return r;
    }
    if (product) {
        for (int s = 0; s < ns; ++s) r.add_state(a.state_name(s), a.initial[s], a.final[s]);
        for (int s = 0; s < ns; ++s)
            for (int sym = 0; sym < nsig; ++sym)
                for (int m = 0; m < 4; ++m) {
                    if (!mark_ok(m, X[s], Y[s])) continue;
                    for (int t : a.delta[s][sym]) r.add_transition(s, sym * 4 + m, t);
                }
        return r;
    }
    int nk = int(qa.selecting_pairs.size());
    for (int s = 0; s < ns; ++s)
        for (int k = 0; k < nk; ++k) r.add_state("", a.initial[s], a.final[s]);
    for (int s = 0; s < ns; ++s)
        for (int k = 0; k < nk; ++k) {
            auto [p, q] = qa.selecting_pairs[k];
            for (int sym = 0; sym < nsig; ++sym)
                for (int m = 0; m < 4; ++m) {
                    if (!mark_ok(m, s == p, s == q)) continue;
                    for (int t : a.delta[s][sym]) r.add_transition(s * nk + k, sym * 4 + m, t * nk + k);
                }
        }
    return r;
}

Nfa marked_validity_dfa(int nsigma) {
    std::vector<std::string> sig(nsigma);
    for (int i = 0; i < nsigma; ++i) sig[i] = std::to_string(i);
    Nfa r(marked_alphabet(sig));
    for (int m = 0; m < 5; ++m) r.add_state("", m == 0, m == 3);
    for (int m = 0; m < 5; ++m)
        for (int sym = 0; sym < nsigma; ++sym)
            for (int b = 0; b < 4; ++b) {
                int t = (m == 4 || (m & b)) ? 4 : (m | b);
                r.add_transition(m, sym * 4 + b, t);
            }
    return r;
}

static Nfa with_alphabet(Nfa a, const std::vector<std::string>& sigma) {
    a.alphabet = sigma;
    return a;
}

static Nfa valid_marked(const Nfa& marked, int nsig) {
    return intersect(marked, with_alphabet(marked_validity_dfa(nsig), marked.alphabet));
}

QueryAutomaton qa_from_marked_dfa(const Nfa& dfa, int nsig, const std::vector<std::string>& sigma) {
    // states (d, m, b): m marks read so far, b marks carried by the next letter
    QueryAutomaton qa{Nfa(sigma), {}};
    Nfa& a = qa.base;
    int nd = dfa.num_states();
    auto id = [&](int d, int m, int b) { return (d * 4 + m) * 4 + b; };
    for (int d = 0; d < nd; ++d)
        for (int m = 0; m < 4; ++m)
            for (int b = 0; b < 4; ++b) {
                static const char* ms[4] = {"", "x", "y", "xy"};
                std::string name = "d" + std::to_string(d) + "/" + ms[m] + "/" + ms[b];
                bool init = dfa.initial[d] && m == 0 && (b & m) == 0;
                bool fin = dfa.final[d] && m == 3 && b == 0;
                a.add_state(name, init, fin);
            }
    for (int d = 0; d < nd; ++d)
        for (int m = 0; m < 4; ++m)
            for (int b = 0; b < 4; ++b) {
                if (b & m) continue;
                for (int sym = 0; sym < nsig; ++sym)
                    for (int d2 : dfa.delta[d][sym * 4 + b]) {
                        int m2 = m | b;
                        for (int b2 = 0; b2 < 4; ++b2)
                            if (!(b2 & m2)) a.add_transition(id(d, m, b), sym, id(d2, m2, b2));
                    }
            }
    // selecting pairs are computed after trimming
    Nfa t = trim(a);
    qa.base = t;
    std::vector<int> xs, ys;
    for (int s = 0; s < t.num_states(); ++s) {
        const std::string& nm = t.state_names[s];
        std::string b = nm.substr(nm.rfind('/') + 1);
        if (b.find('x') != std::string::npos) xs.push_back(s);
        if (b.find('y') != std::string::npos) ys.push_back(s);
    }
    for (int p : xs)
        for (int q : ys) qa.selecting_pairs.push_back({p, q});
    return qa;
}

static Nfa reference_dfa(const QueryAutomaton& q) {
    int nsig = q.base.num_symbols();
    return minimize(determinize(valid_marked(marked_nfa(q, ArgPattern::XY), nsig)));
}

QueryAutomaton add_slack(const QueryAutomaton& q) {
    QueryAutomaton cur = q;
    Nfa ref = reference_dfa(q);
    Nfa& a = cur.base;
    int n = a.num_states();
    // reachability in >= 1 steps
    std::vector<Bits> reach(n, Bits(n));
    for (int p = 0; p < n; ++p)
        for (auto& v : a.delta[p])
            for (int t : v) reach[p].set(t);
    for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p)
            if (reach[p].test(k)) reach[p] |= reach[k];
    for (int p = 0; p < n; ++p)
        for (int t : reach[p].elements())
            for (int s = 0; s < a.num_symbols(); ++s) {
                if (a.has_transition(p, s, t)) continue;
                a.add_transition(p, s, t);
                if (!same_language(reference_dfa(cur), ref)) {
                    auto& v = a.delta[p][s];
                    v.erase(std::find(v.begin(), v.end(), t));
                }
            }
    return cur;
}

QueryAutomaton combine_fn(const std::vector<Atom>& atoms, const std::vector<char>& truth, bool slack) {
    if (atoms.empty()) throw Error(ErrorKind::Input, "combine needs at least one argument");
    const auto& sigma = atoms[0].qa->base.alphabet;
    for (auto& at : atoms)
        if (at.qa->base.alphabet != sigma) throw Error(ErrorKind::Input, "mixed alphabets in combine");
    int nsig = int(sigma.size());
    std::vector<Nfa> dfas;
    for (auto& at : atoms) dfas.push_back(minimize(determinize(marked_nfa(*at.qa, at.pattern))));
    Nfa valid = marked_validity_dfa(nsig);
    Nfa prod(dfas[0].alphabet);
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> todo;
    auto get = [&](const std::vector<int>& key) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        unsigned asg = 0;
        for (std::size_t i = 0; i < dfas.size(); ++i)
            if (dfas[i].final[key[i]]) asg |= 1u << i;
        bool fin = key.back() == 3 && truth[asg];
        int id = prod.add_state("", todo.empty(), fin);
        index.emplace(key, id);
        todo.push_back(key);
        return id;
    };
    std::vector<int> start(dfas.size() + 1, 0);
    get(start);
    for (std::size_t i = 0; i < todo.size(); ++i) {
        for (int sym = 0; sym < nsig * 4; ++sym) {
            std::vector<int> key = todo[i];
            for (std::size_t k = 0; k < dfas.size(); ++k) key[k] = dfas[k].delta[key[k]][sym][0];
            key.back() = valid.delta[key.back()][sym][0];
            int t = get(key);
            prod.add_transition(int(i), sym, t);
        }
    }
    Nfa m = minimize(prod);
    QueryAutomaton qa = qa_from_marked_dfa(m, nsig, sigma);
    if (slack && qa.base.num_states() > 0) qa = add_slack(qa);
    return qa;
}

QueryAutomaton combine(BoolOp op, const std::vector<QueryAutomaton>& args) {
    std::vector<Atom> atoms;
    for (auto& q : args) atoms.push_back({&q, ArgPattern::XY});
    if (op == BoolOp::Not && args.size() != 1) throw Error(ErrorKind::Input, "not takes one argument");
    std::size_t n = args.size();
    if (n > 16) throw Error(ErrorKind::Input, "too many arguments");
    std::vector<char> truth(std::size_t{1} << n);
    for (std::size_t m = 0; m < truth.size(); ++m) {
        switch (op) {
        case BoolOp::And: truth[m] = m == truth.size() - 1; break;
        case BoolOp::Or: truth[m] = m != 0; break;
        case BoolOp::Not: truth[m] = m == 0; break;
        }
    }
    return combine_fn(atoms, truth, false);
}

bool qa_never(const QueryAutomaton& q, ArgPattern p) {
    return is_empty(valid_marked(marked_nfa(q, p), q.base.num_symbols()));
}

bool qa_always(const QueryAutomaton& q, ArgPattern p) {
    int nsig = q.base.num_symbols();
    Nfa m = marked_nfa(q, p);
    Nfa valid = with_alphabet(marked_validity_dfa(nsig), m.alphabet);
    return same_language(intersect(m, valid), valid);
}

QueryAutomaton reverse_pairs(const QueryAutomaton& q) {
    QueryAutomaton r = q;
    for (auto& [a, b] : r.selecting_pairs) std::swap(a, b);
    return r;
}

QueryAutomaton diagonal(const QueryAutomaton& q) {
    std::vector<Atom> atoms{{&q, ArgPattern::XX}};
    std::vector<char> truth{0, 1};
    QueryAutomaton d = combine_fn(atoms, truth, false);
    // keep only pairs at the same position: both marks carried together
    std::vector<PosPair> sp;
    for (auto [p, r] : d.selecting_pairs) {
        const std::string& nm = d.base.state_names[p];
        if (p == r && nm.substr(nm.rfind('/') + 1) == "xy") sp.push_back({p, r});
    }
    d.selecting_pairs = sp;
    return d;
}

Nfa lift_alphabet(const Nfa& a, const std::vector<std::string>& sigma, const std::vector<int>& base_of) {
    Nfa r(sigma);
    for (int p = 0; p < a.num_states(); ++p) r.add_state(a.state_name(p), a.initial[p], a.final[p]);
    for (int p = 0; p < a.num_states(); ++p)
        for (int s = 0; s < int(sigma.size()); ++s)
            for (int q : a.delta[p][base_of[s]]) r.add_transition(p, s, q);
    return r;
}

QueryAutomaton lift_alphabet(const QueryAutomaton& q, const std::vector<std::string>& sigma,
                             const std::vector<int>& base_of) {
    return {lift_alphabet(q.base, sigma, base_of), q.selecting_pairs};
}

// ---------------------------------------------------------------------------
// tables and files

void PredicateTable::add(const std::string& name, QueryAutomaton qa, int arity) {
    if (qa.base.alphabet != sigma)
        throw Error(ErrorKind::Input, "predicate '" + name + "' has a different input alphabet");
    entries[name] = PredEntry{std::move(qa), arity};
}

const PredEntry* PredicateTable::find(const std::string& name) const {
    auto it = entries.find(name);
    return it == entries.end() ? nullptr : &it->second;
}

int PredicateTable::symbol_index(const std::string& s) const {
    for (int i = 0; i < int(sigma.size()); ++i)
        if (sigma[i] == s) return i;
    throw Error(ErrorKind::Input, "unknown input symbol '" + s + "'");
}

Word PredicateTable::encode(const std::vector<std::string>& w) const {
    Word r;
    for (auto& s : w) r.push_back(symbol_index(s));
    return r;
}

PredicateTable builtin_table(const std::vector<std::string>& sigma) {
    PredicateTable t;
    t.sigma = sigma;
    t.add("leq", pred_leq_in(sigma), 2);
    t.add("lt", pred_lt_in(sigma), 2);
    t.add("eq", pred_eq(sigma), 2);
    t.add("succ", pred_succ_in(sigma), 2);
    t.add("first", pred_first(sigma), 1);
    t.add("true", pred_true(sigma), 2);
    for (auto& s : sigma) {
        t.add("lab_" + s, pred_label(sigma, s), 1);
        t.add("bet_" + s, pred_between(sigma, s), 2);
    }
    return t;
}

static std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> r;
    std::string w;
    while (is >> w) r.push_back(w);
    return r;
}

static std::string strip_comment(const std::string& line) {
    auto pos = line.find("//");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

namespace {
struct AutText {
    std::vector<std::string> alphabet, states, initial, final;
    std::vector<std::vector<std::string>> trans, select;
    int arity = 2;
    bool has_arity = false;
};

AutText read_aut(const std::string& text) {
    AutText r;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = strip_comment(line);
        auto colon = line.find(':');
        auto words = split_ws(line);
        if (words.empty()) continue;
        if (colon == std::string::npos)
            throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": expected 'key: values'");
        std::string key = split_ws(line.substr(0, colon)).empty() ? "" : split_ws(line.substr(0, colon))[0];
        auto vals = split_ws(line.substr(colon + 1));
        if (key == "alphabet") r.alphabet = vals;
        else if (key == "states") r.states = vals;
        else if (key == "initial") r.initial = vals;
        else if (key == "final") r.final = vals;
        else if (key == "trans" || key == "select") {
            std::size_t want = key == "trans" ? 3 : 2;
            if (vals.size() != want)
                throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": bad " + key + " line");
            (key == "trans" ? r.trans : r.select).push_back(vals);
        } else if (key == "arity") {
            if (vals.size() != 1) throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": bad arity");
            r.arity = std::stoi(vals[0]);
            r.has_arity = true;
        } else
            throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return r;
}

Nfa build_nfa(const AutText& t, std::map<std::string, int>& sidx) {
    Nfa a(t.alphabet);
    for (auto& s : t.states) {
        if (sidx.count(s)) throw Error(ErrorKind::Input, "duplicate state '" + s + "'");
        sidx[s] = a.add_state(s);
    }
    auto st = [&](const std::string& s) {
        auto it = sidx.find(s);
        if (it == sidx.end()) throw Error(ErrorKind::Input, "undeclared state '" + s + "'");
        return it->second;
    };
    for (auto& s : t.initial) a.initial[st(s)] = 1;
    for (auto& s : t.final) a.final[st(s)] = 1;
    for (auto& tr : t.trans) a.add_transition(st(tr[0]), a.symbol_index(tr[1]), st(tr[2]));
    return a;
}
} // namespace

QueryAutomaton parse_query_automaton(const std::string& text, int* arity) {
    AutText t = read_aut(text);
    std::map<std::string, int> sidx;
    QueryAutomaton q{build_nfa(t, sidx), {}};
    for (auto& s : t.select) {
        if (!sidx.count(s[0]) || !sidx.count(s[1])) throw Error(ErrorKind::Input, "undeclared state in select");
        q.selecting_pairs.push_back({sidx[s[0]], sidx[s[1]]});
    }
    if (arity) *arity = t.arity;
    return q;
}

Nfa parse_nfa(const std::string& text) {
    AutText t = read_aut(text);
    std::map<std::string, int> sidx;
    return build_nfa(t, sidx);
}

std::string print_nfa(const Nfa& a) {
    std::ostringstream os;
    os << "alphabet:";
    for (auto& s : a.alphabet) os << ' ' << s;
    os << "\nstates:";
    for (int p = 0; p < a.num_states(); ++p) os << ' ' << a.state_name(p);
    os << "\ninitial:";
    for (int p = 0; p < a.num_states(); ++p)
        if (a.initial[p]) os << ' ' << a.state_name(p);
    os << "\nfinal:";
    for (int p = 0; p < a.num_states(); ++p)
        if (a.final[p]) os << ' ' << a.state_name(p);
    os << '\n';
    for (int p = 0; p < a.num_states(); ++p)
        for (int s = 0; s < a.num_symbols(); ++s)
            for (int q : a.delta[p][s])
                os << "trans: " << a.state_name(p) << ' ' << a.alphabet[s] << ' ' << a.state_name(q) << '\n';
    return os.str();
}

std::string print_query_automaton(const QueryAutomaton& q, int arity) {
    std::string s = print_nfa(q.base);
    for (auto [p, r] : q.selecting_pairs)
        s += "select: " + q.base.state_name(p) + " " + q.base.state_name(r) + "\n";
    if (arity != 2) s += "arity: " + std::to_string(arity) + "\n";
    return s;
}

void load_predicate_dir(PredicateTable& t, const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Input, "not a directory: " + dir);
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".aut") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        int arity = 2;
        QueryAutomaton q = parse_query_automaton(ss.str(), &arity);
        if (t.sigma.empty()) {
            t = builtin_table(q.base.alphabet);
        }
        try {
            t.add(f.stem().string(), q, arity);
        } catch (const Error& e) {
            throw Error(ErrorKind::Input, f.string() + ": " + e.what());
        }
    }
}

} // namespace ltsynth
