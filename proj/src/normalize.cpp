#include "ltsynth/normalize.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace ltsynth {

namespace {

F make(Node n) { return std::make_shared<const Node>(std::move(n)); }

F any_label(const std::vector<std::string>& labels, Term t) {
    std::vector<F> xs;
    for (auto& g : labels) xs.push_back(mk_label(g, t));
    return mk_or(xs);
}

F swap_vars(const F& f) {
    Node n = *f;
    for (auto& t : n.terms) t.var = 1 - t.var;
    if (n.kind == Kind::Quant) n.var = 1 - n.var;
    for (auto& k : n.kids) k = swap_vars(k);
    return make(std::move(n));
}

F replace_node(const F& f, const Node* target, const F& repl) {
    if (f.get() == target) return repl;
    if (f->kids.empty()) return f;
    Node n = *f;
    bool changed = false;
    for (auto& k : n.kids) {
        F r = replace_node(k, target, repl);
        if (r != k) changed = true, k = r;
    }
    return changed ? make(std::move(n)) : f;
}

} // namespace

// ---------------------------------------------------------------------------
// non-erasing transformation

Document make_non_erasing(const Document& d, bool copy_letters) {
    const auto& gamma = d.output_alphabet;
    for (auto& g : gamma)
        if (g == "#" || (!g.empty() && g[0] == '^'))
            throw Error(ErrorKind::AlphabetClash, "output label '" + g + "' is reserved");
    std::vector<std::string> copies;
    if (copy_letters)
        for (auto& s : d.input_alphabet) copies.push_back("^" + s);
    else
        copies.push_back("^");

    std::function<F(const F&)> rel = [&](const F& f) -> F {
        if (f->kind == Kind::Quant) {
            F b = rel(f->kids[0]);
            Term v = tv(f->var);
            F guard;
            if (f->qtype == QType::Out) guard = any_label(gamma, v);
            else if (f->qtype == QType::Any) guard = mk_or(mk_in(v), any_label(gamma, v));
            else return mk_quant(f->q, f->qtype, f->var, b);
            F nb = f->q == QKind::Exists ? mk_and(guard, b) : mk_or(mk_not(guard), b);
            return mk_quant(f->q, f->qtype, f->var, nb);
        }
        if (f->kids.empty()) return f;
        Node n = *f;
        for (auto& k : n.kids) k = rel(k);
        return make(std::move(n));
    };

    Term x = tv(0), y = tv(1);
    auto fa_out2 = [](F b) {
        return mk_quant(QKind::Forall, QType::Out, 0, mk_quant(QKind::Forall, QType::Out, 1, b));
    };
    F sharp_x = mk_label("#", x), sharp_y = mk_label("#", y);
    std::vector<F> parts;
    parts.push_back(rel(d.body));
    parts.push_back(mk_quant(QKind::Exists, QType::Out, 0, mk_and(sharp_x, mk_pred("first", "first", {to(0)}))));
    parts.push_back(fa_out2(mk_implies(mk_and(sharp_x, sharp_y), mk_eq(x, y))));
    parts.push_back(fa_out2(mk_implies(mk_and(any_label(gamma, x), mk_or(sharp_y, any_label(copies, y))),
                                       mk_leq(x, y))));
    parts.push_back(fa_out2(mk_implies(mk_and(sharp_x, any_label(copies, y)), mk_leq(x, y))));
    parts.push_back(mk_quant(QKind::Forall, QType::In, 0,
                             mk_quant(QKind::Exists, QType::Out, 1,
                                      mk_and(any_label(copies, y), mk_eq(to(1), x)))));
    parts.push_back(fa_out2(mk_implies(
        mk_and({any_label(copies, x), any_label(copies, y), mk_leq(x, y), mk_not(mk_eq(x, y))}),
        mk_pred("lt", "lt", {to(0), to(1)}))));
    if (copy_letters)
        for (auto& s : d.input_alphabet)
            parts.push_back(mk_quant(QKind::Forall, QType::Out, 0,
                                     mk_implies(mk_label("^" + s, x), mk_pred("lab_" + s, "lab_" + s, {to(0)}))));

    Document r = d;
    r.body = mk_and(parts);
    r.output_alphabet = gamma;
    r.output_alphabet.push_back("#");
    for (auto& c : copies) r.output_alphabet.push_back(c);
    return r;
}

bool has_surjectivity_conjunct(const F& f) {
    if (f->kind == Kind::And) {
        for (auto& k : f->kids)
            if (has_surjectivity_conjunct(k)) return true;
        return false;
    }
    if (f->kind != Kind::Quant || f->q != QKind::Forall || f->qtype != QType::In) return false;
    const F& b = f->kids[0];
    if (b->kind != Kind::Quant || b->q != QKind::Exists || b->qtype != QType::Out || b->var == f->var) return false;
    const F& e = b->kids[0];
    if (e->kind != Kind::Eq) return false;
    Term in{f->var, 0}, out{b->var, 1};
    return (e->terms[0] == in && e->terms[1] == out) || (e->terms[0] == out && e->terms[1] == in);
}

F to_output_form(const F& f) { return split_and_type(output_form(f)); }

// ---------------------------------------------------------------------------
// Scott normal form

namespace {

void check_output_formula(const F& f) {
    if (f->kind == Kind::Quant && f->qtype != QType::Out)
        throw Error(ErrorKind::PipelineOrder, "normal form needs an output formula");
    if (f->kind == Kind::MemberOf) throw Error(ErrorKind::PipelineOrder, "set variables must be reduced first");
    for (auto& k : f->kids) check_output_formula(k);
}

// moves a quantifier out of an and/or when its variable is not free elsewhere
F pull_once(const F& f) {
    if (f->kind != Kind::And && f->kind != Kind::Or) return f;
    bool conj = f->kind == Kind::And;
    // merge forall over and, exists over or
    QKind mq = conj ? QKind::Forall : QKind::Exists;
    std::vector<F> kids;
    for (int v = 0; v < 2; ++v) {
        std::vector<F> bodies;
        for (auto& k : f->kids)
            if (k->kind == Kind::Quant && k->q == mq && k->var == v) bodies.push_back(k->kids[0]);
        if (bodies.size() < 2) continue;
        std::vector<F> rest;
        for (auto& k : f->kids)
            if (!(k->kind == Kind::Quant && k->q == mq && k->var == v)) rest.push_back(k);
        rest.push_back(mk_quant(mq, QType::Out, v, conj ? mk_and(bodies) : mk_or(bodies)));
        return conj ? mk_and(rest) : mk_or(rest);
    }
    for (std::size_t i = 0; i < f->kids.size(); ++i) {
        const F& k = f->kids[i];
        if (k->kind != Kind::Quant) continue;
        bool ok = true;
        for (std::size_t j = 0; j < f->kids.size(); ++j)
            if (j != i && (free_vars(f->kids[j]) >> k->var & 1)) ok = false;
        if (!ok) continue;
        std::vector<F> rest;
        for (std::size_t j = 0; j < f->kids.size(); ++j)
            if (j != i) rest.push_back(f->kids[j]);
        rest.push_back(k->kids[0]);
        return mk_quant(k->q, k->qtype, k->var, conj ? mk_and(rest) : mk_or(rest));
    }
    return f;
}

F pull(const F& f) {
    if (f->kind == Kind::Quant) return mk_quant(f->q, f->qtype, f->var, pull(f->kids[0]));
    if (f->kind != Kind::And && f->kind != Kind::Or) return f;
    Node n = *f;
    for (auto& k : n.kids) k = pull(k);
    F g = simplify(make(std::move(n)));
    F h = pull_once(g);
    if (h == g) return g;
    return pull(h);
}

// innermost quantifier whose body is quantifier free; e is the nearest enclosing bound variable
const Node* innermost(const F& f, int e, int& enclosing) {
    if (f->kind == Kind::Quant) {
        if (is_quantifier_free(f->kids[0])) {
            enclosing = e;
            return f.get();
        }
        return innermost(f->kids[0], f->var, enclosing);
    }
    for (auto& k : f->kids)
        if (const Node* r = innermost(k, e, enclosing)) return r;
    return nullptr;
}

struct SnfBuilder {
    std::vector<F> all, ex;
    std::vector<std::string> bits;

    std::string fresh() {
        bits.push_back("P" + std::to_string(bits.size() + 1));
        return bits.back();
    }

    void process(F c, bool pulled = false) {
        c = simplify(c);
        if (is_quantifier_free(c)) {
            all.push_back(c);
            return;
        }
        if (c->kind == Kind::And) {
            for (auto& k : c->kids) process(k);
            return;
        }
        if (c->kind == Kind::Or) {
            F p = pull_once(c);
            if (p != c) return process(p);
            return replace(mk_quant(QKind::Forall, QType::Out, 0, c));
        }
        // quantifier
        if (c->var == 1) c = swap_vars(c);
        const F& b = c->kids[0];
        if (c->q == QKind::Exists) {
            if (is_quantifier_free(b)) {
                ex.push_back(swap_vars(b));
                return;
            }
            std::string p = fresh();
            ex.push_back(mk_bit(p, tv(1)));
            all.push_back(mk_or({mk_not(mk_bit(p, tv(0))), mk_not(mk_bit(p, tv(1))), mk_eq(tv(0), tv(1))}));
            process(mk_quant(QKind::Forall, QType::Out, 0, mk_or(mk_not(mk_bit(p, tv(0))), b)));
            return;
        }
        if (is_quantifier_free(b)) {
            all.push_back(b);
            return;
        }
        if (b->kind == Kind::And) {
            for (auto& k : b->kids) process(mk_quant(QKind::Forall, QType::Out, 0, k));
            return;
        }
        if (b->kind == Kind::Quant && b->var == 0) return process(b);  // outer variable unused
        if (b->kind == Kind::Quant) {
            const F& b2 = b->kids[0];
            if (is_quantifier_free(b2)) {
                (b->q == QKind::Forall ? all : ex).push_back(b2);
                return;
            }
            if (b->q == QKind::Forall && b2->kind == Kind::And) {
                for (auto& k : b2->kids)
                    process(mk_quant(QKind::Forall, QType::Out, 0, mk_quant(QKind::Forall, QType::Out, 1, k)));
                return;
            }
        }
        if (!pulled) {
            F p = mk_quant(QKind::Forall, QType::Out, 0, pull(b));
            if (!structurally_equal(p, c)) return process(p, true);
        }
        replace(c);
    }

    // c = forall x. ...: name the innermost quantified subformula by a fresh bit
    void replace(const F& c) {
        int e = 0;
        const Node* xi = innermost(c->kids[0], c->var, e);
        F xf = make(*xi);
        int v = xf->var, w = 1 - v;
        int attach = w;
        if (!(free_vars(xf) >> w & 1)) {
            if (e == v) xf = swap_vars(xf), v = 1 - v;
            attach = e;
        }
        std::string p = fresh();
        F def = mk_quant(QKind::Forall, QType::Out, attach,
                         mk_quant(xf->q, QType::Out, v, mk_or(mk_not(mk_bit(p, tv(attach))), xf->kids[0])));
        process(def);
        process(replace_node(c, xi, mk_bit(p, tv(attach))));
    }
};

} // namespace

SnfFormula scott_normal_form(const F& output_formula, const std::vector<std::string>& base_labels) {
    check_sentence(output_formula);
    check_output_formula(output_formula);
    SnfBuilder b;
    b.process(simplify(nnf(output_formula)));
    SnfFormula s;
    s.all = simplify(mk_and(b.all));
    for (auto& e : b.ex) s.exists_parts.push_back(simplify(e));
    s.bits = b.bits;
    s.base_labels = base_labels;
    return s;
}

F snf_formula(const SnfFormula& s) {
    std::vector<F> parts;
    parts.push_back(mk_quant(QKind::Forall, QType::Out, 0, mk_quant(QKind::Forall, QType::Out, 1, s.all)));
    for (auto& e : s.exists_parts)
        parts.push_back(mk_quant(QKind::Forall, QType::Out, 0, mk_quant(QKind::Exists, QType::Out, 1, e)));
    return mk_and(parts);
}

std::string dump_snf(const SnfFormula& s) {
    std::ostringstream os;
    os << "labels:";
    for (auto& l : s.base_labels) os << ' ' << l;
    os << "\nbits:";
    for (auto& b : s.bits) os << ' ' << b;
    os << "\nforall x forall y: " << print(s.all) << '\n';
    for (auto& e : s.exists_parts) os << "forall x exists y: " << print(e) << '\n';
    return os.str();
}

std::string ext_label(const std::string& base, const std::vector<std::string>& bits, unsigned mask) {
    std::string r = base;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (mask >> i & 1) r += "%" + bits[i];
    return r;
}

std::string label_base(const std::string& ext) { return ext.substr(0, ext.find('%')); }

// ---------------------------------------------------------------------------
// constraint compilation

int McpInstance::label_index(const std::string& l) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == l) return int(i);
    return -1;
}

namespace {

const char* pattern_name(ArgPattern p) {
    switch (p) {
    case ArgPattern::XY: return "xy";
    case ArgPattern::YX: return "yx";
    case ArgPattern::XX: return "xx";
    case ArgPattern::YY: return "yy";
    case ArgPattern::Global: return "g";
    }
    return "?";
}

struct AtomRef {
    std::string key;
    ArgPattern pat;
    bool operator<(const AtomRef& o) const { return std::tie(key, pat) < std::tie(o.key, o.pat); }
    bool operator==(const AtomRef& o) const { return key == o.key && pat == o.pat; }
};

struct ExtLabel {
    std::string base;
    unsigned mask;
};

class Compiler {
public:
    Compiler(const SnfFormula& s, const PredicateTable& t) : snf_(s), table_(t) {}

    McpInstance run();

private:
    const SnfFormula& snf_;
    const PredicateTable& table_;
    McpInstance out_;
    std::vector<ExtLabel> ext_;
    std::map<std::string, int> pred_index_;
    std::map<std::string, std::pair<int, int>> cache_;  // key -> (class, pred)
    int true_pred_ = -1;

    // residual after fixing labels and order; atoms become AtomRef leaves
    F residual(const F& f, int l1, int l2, Dir d) const;
    AtomRef atom_of(const F& f, Dir d) const;
    // 0 never, 1 always, 2 sometimes; pred index for 1 and 2
    std::pair<int, int> classify(const F& res, Dir d);
    int get_true();
};

AtomRef Compiler::atom_of(const F& f, Dir d) const {
    AtomRef a;
    std::vector<int> vars;
    for (auto& t : f->terms) vars.push_back(t.var);
    if (f->kind == Kind::Eq) a.key = "eq";
    else a.key = f->key;
    if (vars.empty()) a.pat = ArgPattern::Global;
    else if (vars.size() == 1) a.pat = vars[0] == 0 ? ArgPattern::XX : ArgPattern::YY;
    else if (vars[0] == 0) a.pat = vars[1] == 1 ? ArgPattern::XY : ArgPattern::XX;
    else a.pat = vars[1] == 0 ? ArgPattern::YX : ArgPattern::YY;
    if (d == Dir::Same && a.pat != ArgPattern::Global) a.pat = ArgPattern::XX;
    return a;
}

F Compiler::residual(const F& f, int l1, int l2, Dir d) const {
    auto lab = [&](Term t) { return t.var == 0 ? l1 : l2; };
    switch (f->kind) {
    case Kind::OutLabel: return mk_bool(ext_[lab(f->terms[0])].base == f->name);
    case Kind::Bit: {
        int bi = int(std::find(snf_.bits.begin(), snf_.bits.end(), f->name) - snf_.bits.begin());
        if (bi == int(snf_.bits.size())) throw Error(ErrorKind::Input, "unknown bit " + f->name);
        return mk_bool(ext_[lab(f->terms[0])].mask >> bi & 1);
    }
    case Kind::LeqOut: {
        int a = f->terms[0].var, b = f->terms[1].var;
        if (a == b || d == Dir::Same) return mk_true();
        return mk_bool((a == 0) == (d == Dir::Up));
    }
    case Kind::Eq: {
        Term a = f->terms[0], b = f->terms[1];
        if (a.depth == 0 && b.depth == 0) return mk_bool(a.var == b.var || d == Dir::Same);
        if (a.depth == 0 || b.depth == 0) return mk_false();
        if (a.var == b.var || d == Dir::Same) return mk_true();
        return f;
    }
    case Kind::Pred:
        for (auto& t : f->terms)
            if (t.depth == 0) return mk_false();
        return f;
    case Kind::In: return mk_false();
    case Kind::Out: return mk_true();
    case Kind::True:
    case Kind::False: return f;
    case Kind::MemberOf:
    case Kind::Quant: throw Error(ErrorKind::PipelineOrder, "normal form expected");
    default: {
        Node n = *f;
        for (auto& k : n.kids) k = residual(k, l1, l2, d);
        return simplify(make(std::move(n)));
    }
    }
}

int Compiler::get_true() {
    if (true_pred_ < 0) {
        true_pred_ = int(out_.preds.size());
        out_.preds.push_back(pred_true(table_.sigma));
        out_.pred_names.push_back("true");
    }
    return true_pred_;
}

std::pair<int, int> Compiler::classify(const F& res, Dir d) {
    if (res->kind == Kind::True) return {1, get_true()};
    if (res->kind == Kind::False) return {0, -1};
    std::vector<AtomRef> atoms;
    std::map<const Node*, int> where;
    std::function<void(const F&)> collect = [&](const F& f) {
        if (f->kind == Kind::Pred || f->kind == Kind::Eq) {
            AtomRef a = atom_of(f, d);
            auto it = std::find(atoms.begin(), atoms.end(), a);
            where[f.get()] = int(it - atoms.begin());
            if (it == atoms.end()) atoms.push_back(a);
            return;
        }
        for (auto& k : f->kids) collect(k);
    };
    collect(res);
    if (atoms.size() > 12) throw Error(ErrorKind::Input, "too many predicate atoms in one constraint");
    std::size_t n = atoms.size();
    std::vector<char> truth(std::size_t{1} << n);
    for (std::size_t m = 0; m < truth.size(); ++m) {
        std::function<bool(const F&)> ev = [&](const F& f) -> bool {
            switch (f->kind) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::Pred:
            case Kind::Eq: return m >> where.at(f.get()) & 1;
            case Kind::Not: return !ev(f->kids[0]);
            case Kind::And:
                for (auto& k : f->kids)
                    if (!ev(k)) return false;
                return true;
            case Kind::Or:
                for (auto& k : f->kids)
                    if (ev(k)) return true;
                return false;
            case Kind::Implies: return !ev(f->kids[0]) || ev(f->kids[1]);
            case Kind::Iff: return ev(f->kids[0]) == ev(f->kids[1]);
            default: throw Error(ErrorKind::PipelineOrder, "unexpected atom in residual");
            }
        };
        truth[m] = ev(res);
    }
    // drop atoms the function ignores
    for (std::size_t i = n; i-- > 0;) {
        bool dep = false;
        for (std::size_t m = 0; m < truth.size() && !dep; ++m)
            if (!(m >> i & 1) && truth[m] != truth[m | (std::size_t{1} << i)]) dep = true;
        if (dep) continue;
        std::vector<char> t2;
        for (std::size_t m = 0; m < truth.size(); ++m)
            if (!(m >> i & 1)) t2.push_back(truth[m]);
        truth = t2;
        atoms.erase(atoms.begin() + long(i));
    }
    if (atoms.empty()) return truth[0] ? std::pair{1, get_true()} : std::pair{0, -1};

    std::string key;
    for (auto& a : atoms) key += "{" + a.key + "}" + pattern_name(a.pat) + " ";
    key += "|";
    for (char c : truth) key += char('0' + c);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<Atom> qatoms;
    for (auto& a : atoms) {
        const PredEntry* e = table_.find(a.key);
        if (!e) throw Error(ErrorKind::UnknownPredicate, "unknown predicate '" + a.key + "'");
        qatoms.push_back({&e->qa, a.pat});
    }
    QueryAutomaton qa;
    bool single = atoms.size() == 1 && truth[0] == 0 && truth[1] == 1;
    if (single && atoms[0].pat == ArgPattern::XY) qa = qatoms[0].qa[0];
    else if (single && atoms[0].pat == ArgPattern::YX) qa = reverse_pairs(qatoms[0].qa[0]);
    else qa = combine_fn(qatoms, truth, false);

    std::pair<int, int> r;
    if (qa.base.num_states() == 0 || qa_never(qa, ArgPattern::XY)) r = {0, -1};
    else if (qa_always(qa, ArgPattern::XY)) r = {1, get_true()};
    else {
        if (!single) qa = add_slack(qa);
        r = {2, int(out_.preds.size())};
        out_.preds.push_back(std::move(qa));
        out_.pred_names.push_back(key);
    }
    cache_[key] = r;
    return r;
}

McpInstance Compiler::run() {
    out_.sigma = table_.sigma;
    unsigned nmask = 1u << snf_.bits.size();
    if (snf_.bits.size() > 12) throw Error(ErrorKind::Input, "too many fresh predicates");
    for (auto& b : snf_.base_labels)
        for (unsigned m = 0; m < nmask; ++m) {
            ext_.push_back({b, m});
            out_.labels.push_back(ext_label(b, snf_.bits, m));
        }
    int L = int(ext_.size());
    out_.alive.assign(L, 1);
    const Dir dirs[2] = {Dir::Up, Dir::Down};

    // universal constraints of the same position
    std::vector<std::pair<int, int>> same_forbid(L, {0, -1});
    F forb = simplify(nnf(mk_not(snf_.all)));
    for (int l = 0; l < L; ++l) {
        same_forbid[l] = classify(residual(forb, l, l, Dir::Same), Dir::Same);
        if (same_forbid[l].first == 1) out_.alive[l] = 0;
    }

    // existential constraints, pruning labels without witnesses until stable
    std::vector<std::vector<ExConstraint>> ex(snf_.exists_parts.size());
    std::map<std::tuple<std::size_t, int, int, int>, std::pair<int, int>> ex_cache;
    auto ex_class = [&](std::size_t i, int l1, int l2, Dir d) {
        auto k = std::make_tuple(i, l1, l2, int(d));
        auto it = ex_cache.find(k);
        if (it != ex_cache.end()) return it->second;
        auto r = classify(residual(snf_.exists_parts[i], l1, l2, d), d);
        ex_cache[k] = r;
        return r;
    };
    std::map<std::tuple<int, int, int>, std::pair<int, int>> un_cache;
    auto un_class = [&](int l1, int l2, Dir d) {
        auto k = std::make_tuple(l1, l2, int(d));
        auto it = un_cache.find(k);
        if (it != un_cache.end()) return it->second;
        auto r = d == Dir::Same ? same_forbid[l1] : classify(residual(forb, l1, l2, d), d);
        un_cache[k] = r;
        return r;
    };
    // a tuple whose exact predicate is forbidden can never supply a witness
    auto killed = [&](int l1, int l2, Dir d, std::pair<int, int> r) {
        auto u = un_class(l1, l2, d);
        return u.first == 1 || (u.first == 2 && r.first == 2 && u.second == r.second);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& v : ex) v.clear();
        for (std::size_t i = 0; i < snf_.exists_parts.size(); ++i)
            for (int l = 0; l < L; ++l) {
                if (!out_.alive[l]) continue;
                auto same = ex_class(i, l, l, Dir::Same);
                if (same.first == 1) continue;
                ExConstraint c{l, {}};
                if (same.first == 2 && !killed(l, l, Dir::Same, same)) c.tuples.push_back({l, Dir::Same, same.second});
                for (int l2 = 0; l2 < L; ++l2) {
                    if (!out_.alive[l2]) continue;
                    for (Dir d : dirs) {
                        auto r = ex_class(i, l, l2, d);
                        if (r.first && !killed(l, l2, d, r)) c.tuples.push_back({l2, d, r.second});
                    }
                }
                if (c.tuples.empty()) {
                    out_.alive[l] = 0;
                    changed = true;
                    continue;
                }
                ex[i].push_back(std::move(c));
            }
    }
    for (auto& v : ex)
        for (auto& c : v) out_.exists.push_back(std::move(c));

    for (int l = 0; l < L; ++l) {
        if (!out_.alive[l]) continue;
        if (same_forbid[l].first == 2) out_.forall.push_back({l, l, Dir::Same, same_forbid[l].second, false});
        for (int l2 = 0; l2 < L; ++l2) {
            if (!out_.alive[l2]) continue;
            for (Dir d : dirs) {
                auto r = un_class(l, l2, d);
                if (r.first) out_.forall.push_back({l, l2, d, r.second, r.first == 1});
            }
        }
    }
    return out_;
}

const char* dir_name(Dir d) { return d == Dir::Up ? "up" : d == Dir::Down ? "down" : "same"; }

} // namespace

McpInstance compile_mcp(const SnfFormula& s, const PredicateTable& table) {
    return Compiler(s, table).run();
}

std::string dump_mcp(const McpInstance& c) {
    std::ostringstream os;
    os << "labels:";
    for (std::size_t i = 0; i < c.labels.size(); ++i)
        if (c.alive[i]) os << ' ' << c.labels[i];
    os << "\npredicates:\n";
    for (std::size_t i = 0; i < c.preds.size(); ++i)
        os << "  p" << i << " " << c.pred_names[i] << " (" << c.preds[i].base.num_states() << " states)\n";
    for (auto& e : c.exists) {
        os << "exists " << c.labels[e.label] << ":";
        for (auto& t : e.tuples) os << " (" << c.labels[t.label] << "," << dir_name(t.dir) << ",p" << t.pred << ")";
        os << '\n';
    }
    for (auto& u : c.forall)
        os << "forbid " << c.labels[u.label1] << " " << c.labels[u.label2] << " " << dir_name(u.dir) << " p"
           << u.pred << (u.always ? " always" : "") << '\n';
    return os.str();
}

std::vector<char> needed_labels(const McpInstance& c, const std::vector<char>& seeds) {
    std::vector<char> need(c.labels.size(), 0);
    std::vector<int> stack;
    for (std::size_t l = 0; l < c.labels.size(); ++l)
        if (seeds[l] && c.alive[l]) {
            need[l] = 1;
            stack.push_back(int(l));
        }
    while (!stack.empty()) {
        int l = stack.back();
        stack.pop_back();
        for (auto& e : c.exists) {
            if (e.label != l) continue;
            for (auto& t : e.tuples)
                if (!need[t.label]) {
                    need[t.label] = 1;
                    stack.push_back(t.label);
                }
        }
    }
    return need;
}

bool satisfies_mcp(const OGraph& g, const McpInstance& c) {
    g.validate();
    if (!is_non_erasing(g)) return false;
    std::vector<int> lab;
    for (auto& o : g.output) {
        int l = c.label_index(o);
        if (l < 0 || !c.alive[l]) return false;
        lab.push_back(l);
    }
    Word u;
    for (auto& s : g.input) {
        auto it = std::find(c.sigma.begin(), c.sigma.end(), s);
        if (it == c.sigma.end()) return false;
        u.push_back(int(it - c.sigma.begin()));
    }
    std::map<int, std::set<PosPair>> sp;
    auto sel = [&](int p, int i, int j) {
        auto it = sp.find(p);
        if (it == sp.end()) it = sp.emplace(p, selected_pairs(c.preds[p], u)).first;
        return it->second.count({i, j}) > 0;
    };
    int n = int(g.output.size());
    auto in_dir = [](int p, int q, Dir d) { return d == Dir::Up ? q > p : d == Dir::Down ? q < p : q == p; };
    for (int p = 0; p < n; ++p) {
        for (auto& e : c.exists) {
            if (e.label != lab[p]) continue;
            bool ok = false;
            for (auto& t : e.tuples)
                for (int q = 0; q < n && !ok; ++q)
                    if (lab[q] == t.label && in_dir(p, q, t.dir) && sel(t.pred, g.origin[p], g.origin[q])) ok = true;
            if (!ok) return false;
        }
        for (auto& f : c.forall) {
            if (f.label1 != lab[p]) continue;
            for (int q = 0; q < n; ++q)
                if (lab[q] == f.label2 && in_dir(p, q, f.dir) && sel(f.pred, g.origin[p], g.origin[q])) return false;
        }
    }
    return true;
}

} // namespace ltsynth
