#include "ltsynth/profiles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ltsynth {

// ---------------------------------------------------------------------------
// context

Context::Context(McpInstance c) : c_(std::move(c)) {
    for (auto& q : c_.preds) {
        offset_.push_back(n_);
        n_ += q.base.num_states();
    }
    nl_ = int(c_.labels.size());
    int ns = num_symbols();
    post_.assign(n_, std::vector<Bits>(ns, Bits(n_)));
    pre_.assign(n_, std::vector<Bits>(ns, Bits(n_)));
    init_ = fin_ = Bits(n_);
    for (std::size_t k = 0; k < c_.preds.size(); ++k) {
        const Nfa& a = c_.preds[k].base;
        int off = offset_[k];
        for (int p = 0; p < a.num_states(); ++p) {
            state_names_.push_back("p" + std::to_string(k) + "." + a.state_name(p));
            if (a.initial[p]) init_.set(off + p);
            if (a.final[p]) fin_.set(off + p);
            for (int s = 0; s < ns; ++s)
                for (int q : a.delta[p][s]) post_[off + p][s].set(off + q), pre_[off + q][s].set(off + p);
        }
        Bits sp(std::size_t(n_) * n_), dg(n_);
        for (auto [p, q] : c_.preds[k].selecting_pairs) {
            sp.set(std::size_t(off + p) * n_ + off + q);
            if (p == q) dg.set(off + p);
        }
        sp_.push_back(sp);
        diag_.push_back(dg);
    }

    for (std::size_t k = 0; k < c_.preds.size(); ++k) {
        Bits t(std::size_t(n_) * n_);
        sp_[k].for_each([&](std::size_t idx) { t.set((idx % n_) * n_ + idx / n_); });
        spt_.push_back(t);
    }
    // reach[p]: states reachable from p in at least one step
    std::vector<Bits> reach(n_, Bits(n_));
    for (int p = 0; p < n_; ++p) {
        Bits frontier(n_);
        frontier.set(p);
        while (true) {
            Bits next(n_);
            for (int a = 0; a < ns; ++a) next |= post(frontier, a);
            next.minus(reach[p]);
            if (next.none()) break;
            reach[p] |= next;
            frontier = next;
        }
    }
    for (std::size_t k = 0; k < c_.preds.size(); ++k) {
        Bits f(std::size_t(n_) * n_);
        sp_[k].for_each([&](std::size_t idx) {
            std::size_t q = idx / n_, p2 = idx % n_;
            for (int p = 0; p < n_; ++p)
                if (reach[p].test(p2)) f.set(std::size_t(p) * n_ + q);
        });
        fut_.push_back(f);
    }

    // states of the predicates a label meets, at its own position
    sel_.assign(nl_, Bits(n_));
    auto add_sel = [&](int label, int pred, bool first) {
        int off = offset_[pred];
        for (auto [p, q] : c_.preds[pred].selecting_pairs) sel_[label].set(off + (first ? p : q));
    };
    ex_by_label_.assign(nl_, {});
    un_by_label_.assign(nl_, {});
    un_by_pair_.assign(std::size_t(nl_) * nl_, {});
    for (std::size_t i = 0; i < c_.forall.size(); ++i) {
        auto& u = c_.forall[i];
        un_by_label_[u.label1].push_back(int(i));
        if (u.dir == Dir::Same) continue;
        un_by_pair_[std::size_t(u.label1) * nl_ + u.label2].push_back(int(i));
        add_sel(u.label1, u.pred, true);
        add_sel(u.label2, u.pred, false);
    }
    for (std::size_t i = 0; i < c_.exists.size(); ++i) {
        auto& e = c_.exists[i];
        ex_by_label_[e.label].push_back(int(i));
        if (ex_by_label_[e.label].size() > 32) throw Error(ErrorKind::Input, "too many existential constraints on one label");
        for (auto& t : e.tuples)
            if (t.dir != Dir::Same) add_sel(e.label, t.pred, true), add_sel(t.label, t.pred, false);
    }

    // sets reachable backwards from the final states
    std::vector<int> todo{intern_set(fin_)};
    std::set<int> seen{todo[0]};
    back_by_sigma_.assign(ns, {});
    std::vector<std::set<int>> by_sigma(ns);
    for (std::size_t i = 0; i < todo.size(); ++i) {
        Bits x = sets_[todo[i]];
        for (int a = 0; a < ns; ++a) {
            int y = intern_set(pre(x, a));
            by_sigma[a].insert(y);
            if (seen.insert(y).second) todo.push_back(y);
        }
        if (todo.size() > 200000) throw Error(ErrorKind::Input, "backward set family too large");
    }
    back_ = todo;
    for (int a = 0; a < ns; ++a) back_by_sigma_[a].assign(by_sigma[a].begin(), by_sigma[a].end());
}

int Context::intern_rel(const Bits& r) const {
    auto it = rel_ids_.find(r);
    if (it != rel_ids_.end()) return it->second;
    int id = int(rels_.size());
    rels_.push_back(r);
    rel_ids_.emplace(r, id);
    return id;
}

int Context::intern_set(const Bits& s) const {
    auto it = set_ids_.find(s);
    if (it != set_ids_.end()) return it->second;
    int id = int(sets_.size());
    sets_.push_back(s);
    set_ids_.emplace(s, id);
    return id;
}

Bits Context::post(const Bits& s, int a) const {
    Bits r(n_);
    s.for_each([&](std::size_t p) { r |= post_[p][a]; });
    return r;
}

Bits Context::pre(const Bits& s, int a) const {
    Bits r(n_);
    s.for_each([&](std::size_t p) { r |= pre_[p][a]; });
    return r;
}

std::vector<Bits> Context::run_sets(const Word& u) const {
    int n = int(u.size());
    std::vector<Bits> fwd(n + 1), bwd(n + 1);
    fwd[0] = init_;
    for (int i = 0; i < n; ++i) fwd[i + 1] = post(fwd[i], u[i]);
    bwd[n] = fin_;
    for (int i = n; i-- > 0;) bwd[i] = pre(bwd[i + 1], u[i]);
    std::vector<Bits> s;
    for (int i = 0; i < n; ++i) s.push_back(fwd[i] & bwd[i]);
    return s;
}

Bits Context::run_relation(const Word& u, const std::vector<Bits>& S, int k, int j, int label) const {
    Bits r = empty_rel();
    Bits targets = S[j - 1] & sel_[label];
    if (k < j) {
        S[k - 1].for_each([&](std::size_t p) {
            Bits cur(n_);
            cur.set(p);
            for (int t = k; t < j; ++t) cur = post(cur, u[t - 1]) & S[t];
            (cur & targets).for_each([&](std::size_t q) { r.set(p * n_ + q); });
        });
    } else {
        targets.for_each([&](std::size_t q) {
            Bits cur(n_);
            cur.set(q);
            for (int t = j; t < k; ++t) cur = post(cur, u[t - 1]) & S[t];
            cur.for_each([&](std::size_t p) { r.set(p * n_ + q); });
        });
    }
    return r;
}

std::optional<int> Context::left_successor(const Clause& a, const Bits& s, const Bits& s2, int sigma) const {
    Bits r = empty_rel();
    if (a.kind == CKind::Local) {
        (s & sel_[a.label]).for_each([&](std::size_t p) {
            (post_[p][sigma] & s2).for_each([&](std::size_t p2) { r.set(p2 * n_ + p); });
        });
        return intern_rel(r);
    }
    if (a.kind != CKind::Left) return std::nullopt;
    bool ok = true;
    rels_[a.r].for_each([&](std::size_t idx) {
        std::size_t p = idx / n_, q = idx % n_;
        Bits img = post_[p][sigma] & s2;
        if (img.none()) ok = false;
        img.for_each([&](std::size_t p2) { r.set(p2 * n_ + q); });
    });
    if (!ok) return std::nullopt;
    return intern_rel(r);
}

int Context::local_relation(int label, const Bits& s, const Bits& s2, int sigma) const {
    Bits r = empty_rel();
    Bits t = s2 & sel_[label];
    s.for_each([&](std::size_t p) {
        (post_[p][sigma] & t).for_each([&](std::size_t q) { r.set(p * n_ + q); });
    });
    return intern_rel(r);
}

int Context::max_pred(int r2, const Bits& s, int sigma) const {
    Bits r = empty_rel();
    rels_[r2].for_each([&](std::size_t idx) {
        std::size_t p2 = idx / n_, q = idx % n_;
        (pre_[p2][sigma] & s).for_each([&](std::size_t p) { r.set(p * n_ + q); });
    });
    return intern_rel(r);
}

bool Context::is_successor(const Clause& a, const Clause& b, const Bits& s, const Bits& s2, int sigma) const {
    if (a.label != b.label) return false;
    if (a.kind != CKind::Right) {
        if (b.kind != CKind::Left) return false;
        auto r = left_successor(a, s, s2, sigma);
        return r && *r == b.r;
    }
    if (b.kind == CKind::Local) return a.r == local_relation(a.label, s, s2, sigma);
    if (b.kind != CKind::Right) return false;
    bool ok = true;
    rels_[b.r].for_each([&](std::size_t idx) {
        std::size_t p2 = idx / n_;
        if (!s2.test(p2) || !pre_[p2][sigma].intersects(s)) ok = false;
    });
    return ok && a.r == max_pred(b.r, s, sigma);
}

bool Context::witnesses(const Clause& c, const Bits& s, int pred) const {
    if (c.kind == CKind::Local) return s.intersects(diag_[pred]);
    return rels_[c.r].intersects(sp_[pred]);
}

bool Context::rel_selects(int r, int pred, bool transposed) const {
    return rels_[r].intersects(transposed ? sp_[pred] : spt_[pred]);
}

std::string Context::set_name(const Bits& s) const {
    std::string r = "{";
    bool first = true;
    s.for_each([&](std::size_t p) {
        if (!first) r += ",";
        r += state_names_[p];
        first = false;
    });
    return r + "}";
}

std::string Context::rel_name(const Bits& rel) const {
    std::string r = "{";
    bool first = true;
    rel.for_each([&](std::size_t idx) {
        if (!first) r += ",";
        r += "(" + state_names_[idx / n_] + "," + state_names_[idx % n_] + ")";
        first = false;
    });
    return r + "}";
}

std::string Context::clause_name(const Clause& c) const {
    const std::string& l = c_.labels[c.label];
    if (c.kind == CKind::Local) return l;
    return l + (c.kind == CKind::Right ? " -> " : " <- ") + rel_name(rels_[c.r]);
}

// ---------------------------------------------------------------------------
// abstraction

Word input_word(const Context& ctx, const OGraph& g) {
    Word u;
    const auto& sigma = ctx.mcp().sigma;
    for (auto& s : g.input) {
        auto it = std::find(sigma.begin(), sigma.end(), s);
        if (it == sigma.end()) throw Error(ErrorKind::Input, "letter '" + s + "' not in the input alphabet");
        u.push_back(int(it - sigma.begin()));
    }
    return u;
}

namespace {

std::vector<int> output_labels(const Context& ctx, const OGraph& g) {
    std::vector<int> r;
    for (auto& o : g.output) {
        int l = ctx.mcp().label_index(o);
        if (l < 0) throw Error(ErrorKind::Input, "label '" + o + "' not in the instance");
        r.push_back(l);
    }
    return r;
}

Profile full_profile_of(const Context& ctx, const OGraph& g, const Word& u, const std::vector<Bits>& S,
                        const std::vector<int>& labels, int k) {
    Profile p;
    p.sigma = u[k - 1];
    p.s = ctx.intern_set(S[k - 1]);
    for (std::size_t m = 0; m < labels.size(); ++m) {
        int o = g.origin[m];
        Clause c;
        c.label = labels[m];
        if (o == k) c.kind = CKind::Local;
        else {
            c.kind = o > k ? CKind::Right : CKind::Left;
            c.r = ctx.intern_rel(ctx.run_relation(u, S, k, o, c.label));
        }
        p.clauses.push_back(c);
    }
    return p;
}

bool has_local(const std::vector<Clause>& cs) {
    for (auto& c : cs)
        if (c.kind == CKind::Local) return true;
    return false;
}

bool in_dir(int i, int j, Dir d) { return d == Dir::Up ? j > i : d == Dir::Down ? j < i : i == j; }

bool valid_clauses(const Context& ctx, const std::vector<Clause>& cs, const Bits& s) {
    const auto& m = ctx.mcp();
    int n = int(cs.size());
    for (int i = 0; i < n; ++i) {
        if (!m.alive[cs[i].label]) return false;
        if (cs[i].kind != CKind::Local) continue;
        for (int ei : ctx.exists_by_label()[cs[i].label]) {
            bool ok = false;
            for (auto& t : m.exists[ei].tuples) {
                if (t.dir == Dir::Same) ok = ctx.witnesses(cs[i], s, t.pred);
                else
                    for (int j = 0; j < n && !ok; ++j)
                        ok = in_dir(i, j, t.dir) && cs[j].label == t.label && ctx.witnesses(cs[j], s, t.pred);
                if (ok) break;
            }
            if (!ok) return false;
        }
        for (int ui : ctx.forall_by_label()[cs[i].label]) {
            auto& u = m.forall[ui];
            for (int j = 0; j < n; ++j)
                if (in_dir(i, j, u.dir) && cs[j].label == u.label2 && ctx.witnesses(cs[j], s, u.pred)) return false;
        }
    }
    return true;
}

} // namespace

Profile full_profile(const Context& ctx, const OGraph& g, int k) {
    Word u = input_word(ctx, g);
    return full_profile_of(ctx, g, u, ctx.run_sets(u), output_labels(ctx, g), k);
}

Profile alpha(const Profile& p) {
    Profile r = p;
    r.clauses.clear();
    int n = int(p.clauses.size());
    for (int i = 0; i < n; ++i) {
        bool earlier = false, later = false;
        for (int j = 0; j < i && !earlier; ++j) earlier = p.clauses[j] == p.clauses[i];
        for (int j = i + 1; j < n && !later; ++j) later = p.clauses[j] == p.clauses[i];
        if (!earlier || !later) r.clauses.push_back(p.clauses[i]);
    }
    return r;
}

Sequence seq(const Context& ctx, const OGraph& g) {
    g.validate();
    Word u = input_word(ctx, g);
    auto S = ctx.run_sets(u);
    auto labels = output_labels(ctx, g);
    Sequence s;
    for (int k = 1; k <= int(u.size()); ++k) s.push_back(alpha(full_profile_of(ctx, g, u, S, labels, k)));
    return s;
}

bool is_valid(const Context& ctx, const Profile& p) { return valid_clauses(ctx, p.clauses, ctx.set(p.s)); }

bool is_initial(const Context& ctx, const Profile& p) {
    if (!ctx.set(p.s).subset_of(ctx.initial())) return false;
    for (auto& c : p.clauses)
        if (c.kind == CKind::Left) return false;
    return true;
}

bool is_final(const Context& ctx, const Profile& p) {
    bool ok = true;
    ctx.set(p.s).for_each([&](std::size_t q) {
        Bits one(ctx.num_states());
        one.set(q);
        if (!ctx.post(one, p.sigma).intersects(ctx.final())) ok = false;
    });
    for (auto& c : p.clauses)
        if (c.kind == CKind::Right) ok = false;
    return ok;
}

std::optional<std::vector<std::pair<int, int>>> consistency_edges(const Context& ctx, const Profile& a,
                                                                  const Profile& b) {
    const Bits& s1 = ctx.set(a.s);
    const Bits& s2 = ctx.set(b.s);
    int sigma = a.sigma;
    bool ok = true;
    s1.for_each([&](std::size_t p) {
        Bits one(ctx.num_states());
        one.set(p);
        if (!ctx.post(one, sigma).intersects(s2)) ok = false;
    });
    s2.for_each([&](std::size_t p) {
        Bits one(ctx.num_states());
        one.set(p);
        if (!ctx.pre(one, sigma).intersects(s1)) ok = false;
    });
    if (!ok) return std::nullopt;
    int n = int(a.clauses.size()), m = int(b.clauses.size());
    std::vector<std::vector<char>> succ(n, std::vector<char>(m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) succ[i][j] = ctx.is_successor(a.clauses[i], b.clauses[j], s1, s2, sigma);
    for (int i = 0; i < n; ++i)
        if (std::find(succ[i].begin(), succ[i].end(), 1) == succ[i].end()) return std::nullopt;
    for (int j = 0; j < m; ++j) {
        bool has = false;
        for (int i = 0; i < n; ++i) has = has || succ[i][j];
        if (!has) return std::nullopt;
    }
    auto first_occ = [](const std::vector<Clause>& cs, int i) {
        for (int k = 0; k < i; ++k)
            if (cs[k] == cs[i]) return false;
        return true;
    };
    auto last_occ = [](const std::vector<Clause>& cs, int i) {
        for (int k = i + 1; k < int(cs.size()); ++k)
            if (cs[k] == cs[i]) return false;
        return true;
    };
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        if (a.clauses[i].kind != CKind::Right) continue;
        int lo = -1, hi = -1;
        for (int j = 0; j < m; ++j)
            if (succ[i][j]) {
                if (lo < 0) lo = j;
                hi = j;
            }
        if (first_occ(a.clauses, i)) edges.insert({i, lo});
        if (last_occ(a.clauses, i)) edges.insert({i, hi});
    }
    for (int j = 0; j < m; ++j) {
        if (b.clauses[j].kind != CKind::Left) continue;
        int lo = -1, hi = -1;
        for (int i = 0; i < n; ++i)
            if (succ[i][j]) {
                if (lo < 0) lo = i;
                hi = i;
            }
        if (first_occ(b.clauses, j)) edges.insert({lo, j});
        if (last_occ(b.clauses, j)) edges.insert({hi, j});
    }
    std::vector<int> out(n, 0), in(m, 0);
    for (auto [i, j] : edges) ++out[i], ++in[j];
    for (int x : out)
        if (x > 1) return std::nullopt;
    for (int x : in)
        if (x > 1) return std::nullopt;
    std::vector<std::pair<int, int>> ev(edges.begin(), edges.end());
    for (auto [i1, j1] : ev)
        for (auto [i2, j2] : ev)
            if (i1 < i2 && j1 > j2) return std::nullopt;
    return ev;
}

bool consistent(const Context& ctx, const Profile& a, const Profile& b) {
    return consistency_edges(ctx, a, b).has_value();
}

GsGraph build_gs(const Context& ctx, const Sequence& s) {
    GsGraph g;
    for (auto& p : s) {
        g.next.emplace_back(p.clauses.size(), Vertex{-1, -1});
        g.prev.emplace_back(p.clauses.size(), Vertex{-1, -1});
    }
    for (std::size_t c = 0; c + 1 < s.size(); ++c) {
        auto e = consistency_edges(ctx, s[c], s[c + 1]);
        if (!e) throw Error(ErrorKind::Precondition, "profiles " + std::to_string(c + 1) + " and " +
                                                         std::to_string(c + 2) + " are not consistent");
        for (auto [i, j] : *e) {
            g.next[c][i] = {int(c) + 1, j};
            g.prev[c + 1][j] = {int(c), i};
        }
    }
    return g;
}

std::vector<std::vector<Vertex>> maximal_paths(const Sequence& s, const GsGraph& g) {
    std::vector<std::vector<Vertex>> paths;
    for (std::size_t c = 0; c < s.size(); ++c)
        for (std::size_t r = 0; r < s[c].clauses.size(); ++r) {
            if (g.prev[c][r].col >= 0) continue;
            std::vector<Vertex> p;
            Vertex v{int(c), int(r)};
            while (v.col >= 0) {
                p.push_back(v);
                v = g.next[v.col][v.row];
            }
            paths.push_back(p);
        }
    return paths;
}

std::vector<std::vector<char>> partial_order(const Sequence& s, const std::vector<std::vector<Vertex>>& paths) {
    std::size_t n = paths.size();
    std::map<Vertex, int> owner;
    for (std::size_t i = 0; i < n; ++i)
        for (auto& v : paths[i]) owner[v] = int(i);
    std::vector<std::vector<char>> less(n, std::vector<char>(n, 0));
    for (std::size_t c = 0; c < s.size(); ++c)
        for (std::size_t r = 0; r + 1 < s[c].clauses.size(); ++r) {
            int a = owner.at({int(c), int(r)}), b = owner.at({int(c), int(r) + 1});
            if (a != b) less[a][b] = 1;
        }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (less[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (less[k][j]) less[i][j] = 1;
    return less;
}

namespace {

Vertex local_vertex(const Sequence& s, const std::vector<Vertex>& path) {
    for (auto& v : path)
        if (s[v.col].clauses[v.row].kind == CKind::Local) return v;
    throw Error(ErrorKind::Precondition, "path without a Local clause");
}

Word letters(const Sequence& s) {
    Word u;
    for (auto& p : s) u.push_back(p.sigma);
    return u;
}

} // namespace

bool is_maximal(const Context& ctx, const Sequence& s) {
    Word u = letters(s);
    auto S = ctx.run_sets(u);
    for (std::size_t c = 0; c < s.size(); ++c)
        if (!(ctx.set(s[c].s) == S[c])) return false;
    GsGraph g = build_gs(ctx, s);
    for (auto& path : maximal_paths(s, g)) {
        Vertex loc = local_vertex(s, path);
        for (auto& v : path) {
            const Clause& c = s[v.col].clauses[v.row];
            if (c.kind == CKind::Local) continue;
            Bits want = ctx.run_relation(u, S, v.col + 1, loc.col + 1, c.label);
            if (!(ctx.rel(c.r) == want)) return false;
        }
    }
    return true;
}

bool is_good(const Context& ctx, const Sequence& s) {
    if (s.empty()) return false;
    for (auto& p : s)
        if (!has_local(p.clauses) || !is_valid(ctx, p)) return false;
    for (std::size_t c = 0; c + 1 < s.size(); ++c)
        if (!consistent(ctx, s[c], s[c + 1])) return false;
    if (!is_initial(ctx, s.front()) || !is_final(ctx, s.back())) return false;
    for (auto& path : maximal_paths(s, build_gs(ctx, s))) {
        // shape: Right* Local Left*
        int phase = 0;
        for (auto& v : path) {
            CKind k = s[v.col].clauses[v.row].kind;
            int want = k == CKind::Right ? 0 : k == CKind::Local ? 1 : 2;
            if (want < phase || (want == 1 && phase == 1) || (want == 2 && phase == 0)) return false;
            phase = want == 1 ? 2 : want;
        }
        if (phase != 2) return false;
    }
    return is_maximal(ctx, s);
}

namespace {

OGraph graph_of(const Context& ctx, const Sequence& s, const std::vector<std::vector<Vertex>>& paths,
                const std::vector<int>& order) {
    OGraph g;
    for (auto& p : s) g.input.push_back(ctx.mcp().sigma[p.sigma]);
    for (int i : order) {
        Vertex v = local_vertex(s, paths[i]);
        g.output.push_back(ctx.mcp().labels[s[v.col].clauses[v.row].label]);
        g.origin.push_back(v.col + 1);
    }
    return g;
}

} // namespace

OGraph linearize(const Context& ctx, const Sequence& s) {
    auto paths = maximal_paths(s, build_gs(ctx, s));
    auto less = partial_order(s, paths);
    std::size_t n = paths.size();
    std::vector<Vertex> key;
    for (auto& p : paths) key.push_back(local_vertex(s, p));
    std::vector<char> done(n, 0);
    std::vector<int> order;
    for (std::size_t step = 0; step < n; ++step) {
        int best = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            bool minimal = true;
            for (std::size_t j = 0; j < n && minimal; ++j)
                if (!done[j] && j != i && less[j][i]) minimal = false;
            if (minimal && (best < 0 || key[i] < key[best])) best = int(i);
        }
        if (best < 0) throw Error(ErrorKind::Precondition, "cyclic path order");
        done[best] = 1;
        order.push_back(best);
    }
    return graph_of(ctx, s, paths, order);
}

std::vector<OGraph> all_linearizations(const Context& ctx, const Sequence& s, std::size_t limit) {
    auto paths = maximal_paths(s, build_gs(ctx, s));
    auto less = partial_order(s, paths);
    std::size_t n = paths.size();
    std::vector<OGraph> out;
    std::vector<char> done(n, 0);
    std::vector<int> order;
    std::function<void()> rec = [&]() {
        if (out.size() >= limit) return;
        if (order.size() == n) {
            out.push_back(graph_of(ctx, s, paths, order));
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            bool minimal = true;
            for (std::size_t j = 0; j < n && minimal; ++j)
                if (!done[j] && j != i && less[j][i]) minimal = false;
            if (!minimal) continue;
            done[i] = 1;
            order.push_back(int(i));
            rec();
            order.pop_back();
            done[i] = 0;
        }
    };
    rec();
    return out;
}

// ---------------------------------------------------------------------------
// enriched automaton, as a step function

std::optional<EnrichedState> enriched_start(const Context& ctx, const Profile& p) {
    if (!is_initial(ctx, p) || !is_valid(ctx, p) || !has_local(p.clauses)) return std::nullopt;
    return EnrichedState{p, ctx.initial() - ctx.set(p.s)};
}

std::optional<EnrichedState> enriched_step(const Context& ctx, const EnrichedState& st, const Profile& next) {
    if (!consistent(ctx, st.p, next) || !is_valid(ctx, next) || !has_local(next.clauses)) return std::nullopt;
    const Bits& s = ctx.set(st.p.s);
    const Bits& s2 = ctx.set(next.s);
    if (ctx.post(st.dead, st.p.sigma).intersects(s2)) return std::nullopt;
    return EnrichedState{next, ctx.post(s | st.dead, st.p.sigma) - s2};
}

bool enriched_accepts(const Context& ctx, const EnrichedState& st) {
    return is_final(ctx, st.p) && !ctx.post(st.dead, st.p.sigma).intersects(ctx.final());
}

// ---------------------------------------------------------------------------
// search

std::size_t ProfileSearch::StateHash::operator()(const State& s) const {
    std::size_t h = std::size_t(s.sigma + 7);
    hash_mix(h, std::size_t(s.s));
    hash_mix(h, std::size_t(s.fwd));
    for (auto& c : s.items)
        hash_mix(h, (std::size_t(c.r + 1) << 24) ^ (std::size_t(c.label) << 2) ^ std::size_t(c.kind) ^
                        (std::size_t(c.pend) << 40));
    return h;
}

std::optional<std::vector<int>> collapse_items(const std::vector<ProfileSearch::Item>& items) {
    std::vector<int> keep;
    int n = int(items.size());
    for (int i = 0; i < n; ++i) {
        int before = 0, after = 0;
        for (int j = 0; j < n; ++j)
            if (items[j] == items[i]) (j < i ? before : j > i ? after : before) += j != i;
        if (items[i].pend != 0) {
            if (before + after >= 2) return std::nullopt;
            keep.push_back(i);
        } else if (before == 0 || after == 0) {
            keep.push_back(i);
        }
    }
    return keep;
}

ProfileSearch::ProfileSearch(const Context& ctx, SearchOptions opt) : ctx_(ctx), opt_(std::move(opt)) {}

bool ProfileSearch::label_ok(int l) const {
    if (!ctx_.mcp().alive[l]) return false;
    return opt_.allowed.empty() || opt_.allowed[l];
}

void ProfileSearch::reset() {
    ids_.clear();
    states_.clear();
    parent_.clear();
    how_.clear();
}

int ProfileSearch::intern(const State& st, int parent, const Tokens& how) {
    auto it = ids_.find(st);
    if (it != ids_.end()) return it->second;
    ++stats_.visited;
    if (stats_.visited > opt_.budget) throw BudgetExceeded(stats_.visited);
    int id = int(states_.size());
    states_.push_back(st);
    parent_.push_back(parent);
    how_.push_back(how);
    ids_.emplace(st, id);
    return id;
}

bool ProfileSearch::accepting(const State& st) const {
    if (st.sigma < 0) return false;
    for (auto& c : st.items)
        if (c.pend) return false;
    Bits want = ctx_.set(st.fwd) & ctx_.pre(ctx_.final(), st.sigma);
    return want == ctx_.set(st.s);
}

void ProfileSearch::expand(const State& st, int sigma2, const Bits& s2, int fwd2,
                           std::vector<std::pair<State, Tokens>>& out) {
    const auto& m = ctx_.mcp();
    int nl = int(m.labels.size());
    std::vector<Item> old;
    if (st.sigma >= 0) {
        const Bits& s = ctx_.set(st.s);
        for (auto& it : st.items) {
            auto r = ctx_.left_successor(Clause{it.kind, it.label, it.r}, s, s2, st.sigma);
            if (!r) return;
            old.push_back(Item{CKind::Left, it.label, *r, it.pend});
        }
    }
    // pred(o(a), o(b)) where at least one of a, b is new
    auto holds = [&](const Item& a, const Item& b, int pred) {
        if (a.kind == CKind::Local && b.kind == CKind::Local) return ctx_.diag_selects(s2, pred);
        if (a.kind == CKind::Left) return ctx_.rel_selects(a.r, pred, false);
        return ctx_.rel_selects(b.r, pred, true);
    };
    // a before b in the output
    auto pair_ok = [&](const Item& a, const Item& b) {
        for (int ui : ctx_.forall_by_pair(a.label, b.label)) {
            auto& u = m.forall[ui];
            if (u.dir == Dir::Up && holds(a, b, u.pred)) return false;
        }
        for (int ui : ctx_.forall_by_pair(b.label, a.label)) {
            auto& u = m.forall[ui];
            if (u.dir == Dir::Down && holds(b, a, u.pred)) return false;
        }
        return true;
    };
    std::vector<char> same_ok(nl, 1);
    for (int l = 0; l < nl; ++l)
        for (int ui : ctx_.forall_by_label()[l])
            if (m.forall[ui].dir == Dir::Same && ctx_.diag_selects(s2, m.forall[ui].pred)) same_ok[l] = 0;

    std::vector<Item> seq;
    Tokens tok;
    std::vector<int> count(nl, 0);
    int fresh = 0;
    int sid = ctx_.intern_set(s2);

    auto finish = [&]() {
        std::vector<Item> items = seq;
        int n = int(items.size());
        auto dir_ok = [](Dir d, int i, int j) { return d == Dir::Up ? j > i : j < i; };
        for (int i = 0; i < n; ++i) {
            Item& x = items[i];
            const auto& exs = ctx_.exists_by_label()[x.label];
            std::uint32_t pend = x.kind == CKind::Local ? (exs.size() == 32 ? ~0u : (1u << exs.size()) - 1) : x.pend;
            for (std::size_t e = 0; e < exs.size(); ++e) {
                if (!(pend >> e & 1)) continue;
                bool done = false;
                for (auto& t : m.exists[exs[e]].tuples) {
                    if (t.dir == Dir::Same) {
                        done = x.kind == CKind::Local && ctx_.diag_selects(s2, t.pred);
                    } else {
                        for (int j = 0; j < n && !done; ++j) {
                            const Item& y = seq[j];
                            if (y.label != t.label || !dir_ok(t.dir, i, j)) continue;
                            if (x.kind == CKind::Left && y.kind == CKind::Left) continue;
                            done = holds(seq[i], y, t.pred);
                        }
                    }
                    if (done) break;
                }
                if (done) {
                    pend &= ~(1u << e);
                    continue;
                }
                // could a later position still serve?
                bool later = false;
                Bits r = ctx_.empty_rel();
                if (x.kind == CKind::Local) {
                    int nst = ctx_.num_states();
                    s2.for_each([&](std::size_t p) { r.set(p * nst + p); });
                } else {
                    r = ctx_.rel(x.r);
                }
                for (auto& t : m.exists[exs[e]].tuples)
                    if (t.dir != Dir::Same && label_ok(t.label) && ctx_.may_select_later(r, t.pred)) later = true;
                if (!later) return;
            }
            x.pend = pend;
        }
        auto keep = collapse_items(items);
        if (!keep) return;
        State ns{sigma2, sid, fwd2, {}};
        Tokens how;
        for (int k : *keep) ns.items.push_back(items[k]);
        how = tok;
        how.push_back(-1000000);  // separator, then kept positions
        for (int k : *keep) how.push_back(k);
        out.emplace_back(std::move(ns), std::move(how));
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == old.size() && fresh > 0) finish();
        if (i < old.size()) {
            bool ok = true;
            for (auto& x : seq)
                if (x.kind == CKind::Local && !pair_ok(x, old[i])) ok = false;
            if (ok) {
                seq.push_back(old[i]);
                tok.push_back(int(i));
                rec(i + 1);
                seq.pop_back();
                tok.pop_back();
            }
        }
        if (opt_.max_new > 0 && fresh >= opt_.max_new) return;
        for (int l = 0; l < nl; ++l) {
            if (count[l] >= 2 || !label_ok(l) || !same_ok[l]) continue;
            Item z{CKind::Local, l, -1, 0};
            bool ok = true;
            for (auto& x : seq)
                if (!pair_ok(x, z)) ok = false;
            if (!ok) continue;
            seq.push_back(z);
            tok.push_back(-1 - l);
            ++count[l];
            ++fresh;
            rec(i);
            --fresh;
            --count[l];
            seq.pop_back();
            tok.pop_back();
        }
    };
    rec(0);
}

std::vector<std::pair<ProfileSearch::State, ProfileSearch::Tokens>> ProfileSearch::successors(const State& st,
                                                                                             int sigma2) {
    ++stats_.expanded;
    std::vector<std::pair<State, Tokens>> out;
    if (st.sigma < 0) {
        const Bits& I = ctx_.initial();
        std::set<int> s1s;
        for (int x : ctx_.back_family(sigma2)) s1s.insert(ctx_.intern_set(I & ctx_.set(x)));
        int fwd = ctx_.intern_set(I);
        for (int s1 : s1s) expand(st, sigma2, ctx_.set(s1), fwd, out);
    } else {
        const Bits& fwd = ctx_.set(st.fwd);
        const Bits& s = ctx_.set(st.s);
        Bits fwd2 = ctx_.post(fwd, st.sigma);
        int fwd2_id = ctx_.intern_set(fwd2);
        std::set<int> s2s;
        for (int x : ctx_.back_family(sigma2)) {
            const Bits& X = ctx_.set(x);
            if ((fwd & ctx_.pre(X, st.sigma)) == s) s2s.insert(ctx_.intern_set(fwd2 & X));
        }
        for (int s2 : s2s) expand(st, sigma2, ctx_.set(s2), fwd2_id, out);
    }
    std::vector<std::pair<State, Tokens>> uniq;
    std::unordered_map<State, int, StateHash> seen;
    for (auto& e : out)
        if (seen.emplace(e.first, 0).second) uniq.push_back(std::move(e));
    return uniq;
}

// Replays a path of states into an o-graph. New positions go right after the
// output of the item emitted before them, so positions that were dropped by
// the collapse keep the side of the copy they were equal to.
OGraph ProfileSearch::rebuild(const std::vector<int>& path, const std::vector<Tokens>& hows) const {
    OGraph g;
    std::vector<int> order;      // output ids in output order
    std::vector<int> visible;    // output id per item of the current state
    std::vector<int> label_of, origin_of;
    for (std::size_t col = 0; col < path.size(); ++col) {
        const Tokens& how = hows[col];
        g.input.push_back(ctx_.mcp().sigma[states_[path[col]].sigma]);
        std::size_t sep = std::find(how.begin(), how.end(), -1000000) - how.begin();
        std::vector<int> built;  // output id per pre-collapse position
        int anchor = -1;         // output id emitted last
        std::vector<int> fresh_after;
        for (std::size_t k = 0; k < sep; ++k) {
            int t = how[k];
            if (t >= 0) {
                anchor = visible[t];
                built.push_back(anchor);
                continue;
            }
            int id = int(label_of.size());
            label_of.push_back(-1 - t);
            origin_of.push_back(int(col) + 1);
            auto pos = anchor < 0 ? order.begin() : std::find(order.begin(), order.end(), anchor) + 1;
            order.insert(pos, id);
            anchor = id;
            built.push_back(id);
        }
        visible.clear();
        for (std::size_t k = sep + 1; k < how.size(); ++k) visible.push_back(built[how[k]]);
    }
    for (int id : order) {
        g.output.push_back(ctx_.mcp().labels[label_of[id]]);
        g.origin.push_back(origin_of[id]);
    }
    return g;
}

std::optional<OGraph> ProfileSearch::find_any() {
    reset();
    intern(State{}, -1, {});
    int ns = ctx_.num_symbols();
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (int a = 0; a < ns; ++a) {
            State here = states_[cur];
            for (auto& [nx, how] : successors(here, a)) {
                std::size_t before = states_.size();
                int id = intern(nx, cur, how);
                if (states_.size() == before) continue;
                if (accepting(nx)) {
                    std::vector<int> path;
                    std::vector<Tokens> hows;
                    for (int k = id; k > 0; k = parent_[k]) path.push_back(k), hows.push_back(how_[k]);
                    std::reverse(path.begin(), path.end());
                    std::reverse(hows.begin(), hows.end());
                    return rebuild(path, hows);
                }
                queue.push_back(id);
            }
        }
    }
    return std::nullopt;
}

std::optional<OGraph> ProfileSearch::find_for(const Word& u) {
    std::vector<std::vector<int>> choices;
    for (int a : u) choices.push_back({a});
    return find_for(choices);
}

std::optional<OGraph> ProfileSearch::find_for(const std::vector<std::vector<int>>& u) {
    if (u.empty()) throw Error(ErrorKind::Precondition, "empty input word");
    reset();
    intern(State{}, -1, {});
    std::set<std::pair<int, int>> failed;
    std::vector<int> path;
    std::vector<Tokens> hows;
    std::function<bool(int, int)> dfs = [&](int cur, int col) -> bool {
        State here = states_[cur];
        for (int a : u[col])
            for (auto& [nx, how] : successors(here, a)) {
                int id = intern(nx, cur, how);
                if (failed.count({id, col})) continue;
                path.push_back(id);
                hows.push_back(how);
                if (col + 1 == int(u.size())) {
                    if (accepting(nx)) return true;
                } else if (dfs(id, col + 1)) {
                    return true;
                }
                path.pop_back();
                hows.pop_back();
                failed.insert({id, col});
            }
        return false;
    };
    if (!dfs(0, 0)) return std::nullopt;
    return rebuild(path, hows);
}

Nfa ProfileSearch::domain_nfa() {
    reset();
    Nfa a(ctx_.mcp().sigma);
    intern(State{}, -1, {});
    a.add_state("init", true, false);
    int ns = ctx_.num_symbols();
    for (std::size_t cur = 0; cur < states_.size(); ++cur) {
        for (int sym = 0; sym < ns; ++sym) {
            State here = states_[cur];
            for (auto& [nx, how] : successors(here, sym)) {
                int id = intern(nx, int(cur), how);
                while (a.num_states() <= id) {
                    int k = a.num_states();
                    a.add_state("", false, accepting(states_[k]));
                }
                a.add_transition(int(cur), sym, id);
            }
        }
    }
    return trim(a);
}

// ---------------------------------------------------------------------------
// printing

std::string print_sequence(const Context& ctx, const Sequence& s) {
    std::ostringstream os;
    for (std::size_t c = 0; c < s.size(); ++c) {
        os << (c + 1) << " " << ctx.mcp().sigma[s[c].sigma] << " S=" << ctx.set_name(ctx.set(s[c].s)) << " |";
        for (auto& cl : s[c].clauses) os << " [" << ctx.clause_name(cl) << "]";
        os << '\n';
    }
    return os.str();
}

std::string to_dot(const Context& ctx, const Sequence& s) {
    std::ostringstream os;
    os << "digraph profiles {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
    for (std::size_t c = 0; c < s.size(); ++c) {
        os << "  subgraph cluster_" << c << " {\n    label=\"" << (c + 1) << ": " << ctx.mcp().sigma[s[c].sigma]
           << "\";\n";
        for (std::size_t r = 0; r < s[c].clauses.size(); ++r) {
            const Clause& cl = s[c].clauses[r];
            std::string l = ctx.mcp().labels[cl.label];
            l += cl.kind == CKind::Local ? " *" : cl.kind == CKind::Right ? " ->" : " <-";
            os << "    v" << c << "_" << r << " [label=\"" << l << "\"];\n";
        }
        for (std::size_t r = 0; r + 1 < s[c].clauses.size(); ++r)
            os << "    v" << c << "_" << r << " -> v" << c << "_" << r + 1 << " [style=invis];\n";
        os << "  }\n";
    }
    GsGraph g = build_gs(ctx, s);
    for (std::size_t c = 0; c < s.size(); ++c)
        for (std::size_t r = 0; r < s[c].clauses.size(); ++r) {
            Vertex v = g.next[c][r];
            if (v.col >= 0) os << "  v" << c << "_" << r << " -> v" << v.col << "_" << v.row << ";\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace ltsynth
