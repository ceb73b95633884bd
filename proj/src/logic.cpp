#include "ltsynth/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace ltsynth {

// ---------------------------------------------------------------------------
// construction

namespace {
F make(Node n) { return std::make_shared<const Node>(std::move(n)); }

F atom(Kind k, std::string name, std::vector<Term> ts) {
    Node n;
    n.kind = k;
    n.name = std::move(name);
    n.terms = std::move(ts);
    return make(std::move(n));
}

F nary(Kind k, std::vector<F> kids) {
    Node n;
    n.kind = k;
    n.kids = std::move(kids);
    return make(std::move(n));
}
} // namespace

F mk_true() {
    static F t = atom(Kind::True, "", {});
    return t;
}
F mk_false() {
    static F f = atom(Kind::False, "", {});
    return f;
}
F mk_bool(bool b) { return b ? mk_true() : mk_false(); }
F mk_label(const std::string& g, Term t) { return atom(Kind::OutLabel, g, {t}); }
F mk_bit(const std::string& p, Term t) { return atom(Kind::Bit, p, {t}); }
F mk_leq(Term a, Term b) { return atom(Kind::LeqOut, "", {a, b}); }
F mk_pred(const std::string& name, const std::string& key, std::vector<Term> args) {
    Node n;
    n.kind = Kind::Pred;
    n.name = name;
    n.key = key;
    n.terms = std::move(args);
    return make(std::move(n));
}
F mk_in(Term t) { return atom(Kind::In, "", {t}); }
F mk_out(Term t) { return atom(Kind::Out, "", {t}); }
F mk_eq(Term a, Term b) { return atom(Kind::Eq, "", {a, b}); }
F mk_member(const std::string& set, Term t) { return atom(Kind::MemberOf, set, {t}); }
F mk_not(F a) { return nary(Kind::Not, {std::move(a)}); }
F mk_and(F a, F b) { return nary(Kind::And, {std::move(a), std::move(b)}); }
F mk_or(F a, F b) { return nary(Kind::Or, {std::move(a), std::move(b)}); }
F mk_and(const std::vector<F>& xs) {
    if (xs.empty()) return mk_true();
    if (xs.size() == 1) return xs[0];
    return nary(Kind::And, xs);
}
F mk_or(const std::vector<F>& xs) {
    if (xs.empty()) return mk_false();
    if (xs.size() == 1) return xs[0];
    return nary(Kind::Or, xs);
}
F mk_implies(F a, F b) { return nary(Kind::Implies, {std::move(a), std::move(b)}); }
F mk_iff(F a, F b) { return nary(Kind::Iff, {std::move(a), std::move(b)}); }
F mk_quant(QKind q, QType t, int var, F body) {
    Node n;
    n.kind = Kind::Quant;
    n.q = q;
    n.qtype = t;
    n.var = var;
    n.kids = {std::move(body)};
    return make(std::move(n));
}

bool is_atom(const F& f) {
    switch (f->kind) {
    case Kind::Not: case Kind::And: case Kind::Or: case Kind::Implies: case Kind::Iff: case Kind::Quant:
        return false;
    default: return true;
    }
}

bool is_quantifier_free(const F& f) {
    if (f->kind == Kind::Quant) return false;
    for (auto& k : f->kids)
        if (!is_quantifier_free(k)) return false;
    return true;
}

bool structurally_equal(const F& a, const F& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name || a->key != b->key || a->terms != b->terms ||
        a->kids.size() != b->kids.size())
        return false;
    if (a->kind == Kind::Quant && (a->q != b->q || a->qtype != b->qtype || a->var != b->var)) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurally_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

int free_vars(const F& f) {
    if (f->kind == Kind::Quant) return free_vars(f->kids[0]) & ~(1 << f->var);
    int m = 0;
    for (auto& t : f->terms) m |= 1 << t.var;
    for (auto& k : f->kids) m |= free_vars(k);
    return m;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '^' || c == '+' ||
           c == '$' || c == '@' || c == '\'';
}

enum class Tok { Ident, LBrace, RBrace, LParen, RParen, Comma, Dot, Not, And, Or, Impl, Iff, Eq, Neq, LeqOut, Leq, End };

struct Token {
    Tok t;
    std::string text;
    std::size_t pos;
};

std::string strip_directives(const std::string& text, std::vector<std::string>* in, std::vector<std::string>* out) {
    std::istringstream is(text);
    std::string line, body;
    while (std::getline(is, line)) {
        auto c = line.find("//");
        if (c != std::string::npos) line = line.substr(0, c);
        std::size_t s = line.find_first_not_of(" \t");
        std::string trimmed = s == std::string::npos ? "" : line.substr(s);
        if (trimmed.rfind("input:", 0) == 0) {
            if (in) *in = split_symbols(trimmed.substr(6));
            body += '\n';
            continue;
        }
        if (trimmed.rfind("output:", 0) == 0) {
            if (out) *out = split_symbols(trimmed.substr(7));
            body += '\n';
            continue;
        }
        body += line + '\n';
    }
    return body;
}

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto err = [&](const std::string& m) {
        throw Error(ErrorKind::Syntax, "at offset " + std::to_string(i) + ": " + m);
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t st = i;
        if (ident_char(c)) {
            while (i < s.size() && ident_char(s[i])) ++i;
            out.push_back({Tok::Ident, s.substr(st, i - st), st});
            continue;
        }
        auto two = s.substr(i, 2), three = s.substr(i, 3);
        if (three == "<->") out.push_back({Tok::Iff, three, st}), i += 3;
        else if (two == "->") out.push_back({Tok::Impl, two, st}), i += 2;
        else if (two == "!=") out.push_back({Tok::Neq, two, st}), i += 2;
        else if (two == "<=") {
            i += 2;
            if (s.compare(i, 3, "out") == 0 && (i + 3 >= s.size() || !ident_char(s[i + 3])))
                out.push_back({Tok::LeqOut, "<=out", st}), i += 3;
            else
                out.push_back({Tok::Leq, "<=", st});
        } else {
            Tok t;
            switch (c) {
            case '{': t = Tok::LBrace; break;
            case '}': t = Tok::RBrace; break;
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case ',': t = Tok::Comma; break;
            case '.': t = Tok::Dot; break;
            case '!': case '~': t = Tok::Not; break;
            case '&': t = Tok::And; break;
            case '|': t = Tok::Or; break;
            case '=': t = Tok::Eq; break;
            default: err(std::string("unexpected character '") + c + "'");
            }
            out.push_back({t, std::string(1, c), st});
            ++i;
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

const std::set<std::string> kQuant{"forall_out", "exists_out", "forall_in", "exists_in", "forall", "exists"};
const std::set<std::string> kReserved{"forall_out", "exists_out", "forall_in", "exists_in", "forall", "exists",
                                      "exists2", "true", "false", "o", "in", "out"};

class Parser {
public:
    Parser(std::vector<Token> toks, const PredicateTable& table, std::vector<std::string> setvars)
        : toks_(std::move(toks)), table_(table), setvars_(std::move(setvars)) {}

    F run() {
        F f = formula();
        if (peek().t != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    const PredicateTable& table_;
    std::vector<std::string> setvars_;
    std::vector<std::string> vars_;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    Token next() { return toks_[std::min(i_++, toks_.size() - 1)]; }
    [[noreturn]] void fail(const std::string& m) const {
        throw Error(ErrorKind::Syntax, "at offset " + std::to_string(peek().pos) + ": " + m);
    }
    void expect(Tok t, const char* what) {
        if (peek().t != t) fail(std::string("expected ") + what);
        ++i_;
    }

    int var_index(const std::string& name) {
        if (kReserved.count(name) || name.rfind("lab_", 0) == 0) fail("'" + name + "' is not a variable name");
        for (int k = 0; k < int(vars_.size()); ++k)
            if (vars_[k] == name) return k;
        if (vars_.size() == 2)
            throw Error(ErrorKind::VariableLimit, "third variable '" + name + "' (only two are allowed)");
        vars_.push_back(name);
        return int(vars_.size()) - 1;
    }

    F formula() {
        F a = implication();
        while (peek().t == Tok::Iff) {
            next();
            a = mk_iff(a, implication());
        }
        return a;
    }
    F implication() {
        F a = disjunction();
        if (peek().t == Tok::Impl) {
            next();
            return mk_implies(a, implication());
        }
        return a;
    }
    F disjunction() {
        std::vector<F> xs{conjunction()};
        while (peek().t == Tok::Or) next(), xs.push_back(conjunction());
        return mk_or(xs);
    }
    F conjunction() {
        std::vector<F> xs{unary()};
        while (peek().t == Tok::And) next(), xs.push_back(unary());
        return mk_and(xs);
    }
    F unary() {
        if (peek().t == Tok::Not) {
            next();
            return mk_not(unary());
        }
        if (peek().t == Tok::Ident && kQuant.count(peek().text)) return quantifier();
        return primary();
    }
    F quantifier() {
        std::string kw = next().text;
        QKind q = kw.rfind("forall", 0) == 0 ? QKind::Forall : QKind::Exists;
        QType ty = QType::Any;
        if (kw.size() > 6 && kw.substr(kw.size() - 4) == "_out") ty = QType::Out;
        if (kw.size() > 6 && kw.substr(kw.size() - 3) == "_in") ty = QType::In;
        std::vector<int> vs;
        do {
            if (peek().t != Tok::Ident) fail("expected variable");
            vs.push_back(var_index(next().text));
        } while (peek().t == Tok::Comma && (next(), true));
        expect(Tok::Dot, "'.'");
        F body = formula();
        for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = mk_quant(q, ty, *it, body);
        return body;
    }
    Term term() {
        if (peek().t != Tok::Ident) fail("expected term");
        std::string n = next().text;
        if (n == "o" && peek().t == Tok::LParen) {
            next();
            Term t = term();
            expect(Tok::RParen, "')'");
            t.depth++;
            return t;
        }
        return {var_index(n), 0};
    }
    Term paren_term() {
        expect(Tok::LParen, "'('");
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
    }
    F primary() {
        const Token& t = peek();
        if (t.t == Tok::LParen) {
            next();
            F f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.t == Tok::LBrace) return predicate();
        if (t.t != Tok::Ident) fail("expected formula");
        const std::string& n = t.text;
        if (n == "true") return next(), mk_true();
        if (n == "false") return next(), mk_false();
        bool call = peek(1).t == Tok::LParen;
        if (call && n.rfind("lab_", 0) == 0 && n.size() > 4) {
            next();
            return mk_label(n.substr(4), paren_term());
        }
        if (call && n == "in") return next(), mk_in(paren_term());
        if (call && n == "out") return next(), mk_out(paren_term());
        if (call && std::find(setvars_.begin(), setvars_.end(), n) != setvars_.end()) {
            next();
            return mk_member(n, paren_term());
        }
        Term a = term();
        Tok op = peek().t;
        if (op != Tok::LeqOut && op != Tok::Leq && op != Tok::Eq && op != Tok::Neq) fail("expected comparison");
        next();
        Term b = term();
        if (op == Tok::Eq) return mk_eq(a, b);
        if (op == Tok::Neq) return mk_not(mk_eq(a, b));
        return mk_leq(a, b);
    }
    F predicate() {
        expect(Tok::LBrace, "'{'");
        if (peek().t != Tok::Ident) fail("expected predicate name");
        std::string name = next().text;
        expect(Tok::RBrace, "'}'");
        std::string key = name;
        if (!table_.find(key) && key.size() > 5 && key.substr(key.size() - 5) == "_data")
            key = key.substr(0, key.size() - 5);
        const PredEntry* e = table_.find(key);
        if (!e) throw Error(ErrorKind::UnknownPredicate, "unknown predicate '" + name + "'");
        std::vector<Term> args;
        if (peek().t == Tok::LParen) {
            next();
            if (peek().t != Tok::RParen) {
                args.push_back(term());
                while (peek().t == Tok::Comma) next(), args.push_back(term());
            }
            expect(Tok::RParen, "')'");
        }
        if (int(args.size()) != e->arity)
            throw Error(ErrorKind::Arity, "predicate '" + name + "' takes " + std::to_string(e->arity) +
                                              " arguments, got " + std::to_string(args.size()));
        return mk_pred(name, key, args);
    }
};

} // namespace

void read_directives(const std::string& text, std::vector<std::string>& input, std::vector<std::string>& output) {
    strip_directives(text, &input, &output);
}

Document parse(const std::string& text, const PredicateTable& table) {
    Document d;
    std::string body = strip_directives(text, &d.input_alphabet, &d.output_alphabet);
    auto toks = lex(body);
    std::size_t i = 0;
    while (toks[i].t == Tok::Ident && toks[i].text == "exists2") {
        if (toks[i + 1].t != Tok::Ident || toks[i + 2].t != Tok::Dot)
            throw Error(ErrorKind::Syntax, "at offset " + std::to_string(toks[i].pos) + ": expected 'exists2 X.'");
        std::string x = toks[i + 1].text;
        if (std::find(d.setvars.begin(), d.setvars.end(), x) != d.setvars.end())
            throw Error(ErrorKind::Syntax, "set variable '" + x + "' declared twice");
        d.setvars.push_back(x);
        i += 3;
    }
    toks.erase(toks.begin(), toks.begin() + i);
    d.body = Parser(toks, table, d.setvars).run();
    if (d.input_alphabet.empty()) d.input_alphabet = table.sigma;
    if (d.output_alphabet.empty()) d.output_alphabet = labels_used(d.body);
    return d;
}

F parse_formula(const std::string& text, const PredicateTable& table) {
    Document d = parse(text, table);
    if (!d.setvars.empty()) throw Error(ErrorKind::Syntax, "unexpected second-order quantifier");
    return d.body;
}

Document load_document(const std::string& text, const std::string& preds_dir, PredicateTable& table) {
    std::vector<std::string> in, out;
    read_directives(text, in, out);
    if (!preds_dir.empty()) load_predicate_dir(table, preds_dir);
    if (table.sigma.empty()) {
        if (in.empty()) throw Error(ErrorKind::Input, "no input alphabet (use an 'input:' line or --preds)");
        table = builtin_table(in);
    } else if (!in.empty() && in != table.sigma) {
        throw Error(ErrorKind::Input, "input alphabet differs from the predicate directory");
    }
    return parse(text, table);
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string term_str(Term t) {
    std::string v = t.var == 0 ? "x" : "y";
    for (int k = 0; k < t.depth; ++k) v = "o(" + v + ")";
    return v;
}

int prec(const F& f) {
    switch (f->kind) {
    case Kind::Quant: return 0;
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not: return 5;
    default: return 6;
    }
}

// tail: nothing follows f inside the current parenthesis group, so a
// quantifier may extend to the right without brackets
void pr(std::ostream& os, const F& f, bool data, int need, bool tail) {
    bool paren = f->kind == Kind::Quant ? !tail : prec(f) < need;
    if (paren) os << '(', tail = true;
    auto t = [&](int i) { return term_str(f->terms[i]); };
    switch (f->kind) {
    case Kind::True: os << "true"; break;
    case Kind::False: os << "false"; break;
    case Kind::OutLabel: os << "lab_" << f->name << '(' << t(0) << ')'; break;
    case Kind::Bit: os << f->name << '(' << t(0) << ')'; break;
    case Kind::MemberOf: os << f->name << '(' << t(0) << ')'; break;
    case Kind::LeqOut: os << t(0) << (data ? " <= " : " <=out ") << t(1); break;
    case Kind::Eq: os << t(0) << " = " << t(1); break;
    case Kind::In: os << "in(" << t(0) << ')'; break;
    case Kind::Out: os << "out(" << t(0) << ')'; break;
    case Kind::Pred:
        os << '{' << f->name << '}';
        if (!f->terms.empty()) {
            os << '(';
            for (std::size_t i = 0; i < f->terms.size(); ++i) os << (i ? ", " : "") << t(int(i));
            os << ')';
        }
        break;
    case Kind::Not: os << '!'; pr(os, f->kids[0], data, 5, tail); break;
    case Kind::And:
    case Kind::Or:
        for (std::size_t i = 0; i < f->kids.size(); ++i) {
            if (i) os << (f->kind == Kind::And ? " & " : " | ");
            pr(os, f->kids[i], data, prec(f) + 1, tail && i + 1 == f->kids.size());
        }
        break;
    case Kind::Implies:
        pr(os, f->kids[0], data, 3, false);
        os << " -> ";
        pr(os, f->kids[1], data, 2, tail);
        break;
    case Kind::Iff:
        pr(os, f->kids[0], data, 2, false);
        os << " <-> ";
        pr(os, f->kids[1], data, 2, tail);
        break;
    case Kind::Quant: {
        os << (f->q == QKind::Forall ? "forall" : "exists");
        if (f->qtype == QType::In) os << "_in";
        if (f->qtype == QType::Out) os << "_out";
        os << ' ' << (f->var == 0 ? 'x' : 'y') << ". ";
        pr(os, f->kids[0], data, 0, true);
        break;
    }
    }
    if (paren) os << ')';
}

} // namespace

std::string print(const F& f, bool data_syntax) {
    std::ostringstream os;
    pr(os, f, data_syntax, 0, true);
    return os.str();
}

std::string print(const Document& d) {
    std::string s;
    if (!d.input_alphabet.empty()) {
        s += "input:";
        for (auto& a : d.input_alphabet) s += " " + a;
        s += "\n";
    }
    if (!d.output_alphabet.empty()) {
        s += "output:";
        for (auto& a : d.output_alphabet) s += " " + a;
        s += "\n";
    }
    for (auto& x : d.setvars) s += "exists2 " + x + ". ";
    return s + print(d.body) + "\n";
}

std::vector<std::string> labels_used(const F& f) {
    std::set<std::string> s;
    std::function<void(const F&)> go = [&](const F& g) {
        if (g->kind == Kind::OutLabel) s.insert(g->name);
        for (auto& k : g->kids) go(k);
    };
    go(f);
    return {s.begin(), s.end()};
}

void check_sentence(const F& f) {
    int fv = free_vars(f);
    if (fv) throw Error(ErrorKind::NotASentence, std::string("free variable ") + ((fv & 1) ? "x" : "y"));
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

std::string strip_bits(const std::string& label) { return label.substr(0, label.find('%')); }

bool has_bit(const std::string& label, const std::string& bit) {
    std::size_t p = label.find('%');
    while (p != std::string::npos) {
        std::size_t q = label.find('%', p + 1);
        if (label.substr(p + 1, q == std::string::npos ? std::string::npos : q - p - 1) == bit) return true;
        p = q;
    }
    return false;
}

struct Pos {
    bool out = false;
    int idx = 0;  // 1-based
};

// selected-pair matrices per predicate for one fixed word
class PairCache {
public:
    PairCache(const PredicateTable& t, Word w) : table_(t), w_(std::move(w)) {}
    bool test(const std::string& key, int i, int j) {
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const PredEntry* e = table_.find(key);
            if (!e) throw Error(ErrorKind::UnknownPredicate, "unknown predicate '" + key + "'");
            int n = int(w_.size());
            std::vector<char> m(std::size_t(n) * n, 0);
            for (auto [a, b] : selected_pairs(e->qa, w_)) m[(a - 1) * n + (b - 1)] = 1;
            it = cache_.emplace(key, std::move(m)).first;
        }
        int n = int(w_.size());
        return it->second[(i - 1) * n + (j - 1)];
    }

private:
    const PredicateTable& table_;
    Word w_;
    std::map<std::string, std::vector<char>> cache_;
};

struct Evaluator {
    const OGraph& g;
    PairCache pairs;
    const std::map<std::string, std::uint64_t>* sets = nullptr;
    Pos env[2];
    bool bound[2] = {false, false};

    Evaluator(const OGraph& graph, const PredicateTable& t) : g(graph), pairs(t, t.encode(graph.input)) {}

    Pos value(Term t) const {
        if (!bound[t.var]) throw Error(ErrorKind::NotASentence, "free variable");
        Pos p = env[t.var];
        if (t.depth > 0 && p.out) return {false, g.origin[p.idx - 1]};
        return p;
    }

    bool eval(const F& f) {
        switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::OutLabel: {
            Pos p = value(f->terms[0]);
            return p.out && strip_bits(g.output[p.idx - 1]) == f->name;
        }
        case Kind::Bit: {
            Pos p = value(f->terms[0]);
            return p.out && has_bit(g.output[p.idx - 1], f->name);
        }
        case Kind::LeqOut: {
            Pos a = value(f->terms[0]), b = value(f->terms[1]);
            return a.out && b.out && a.idx <= b.idx;
        }
        case Kind::Pred: {
            std::vector<int> args;
            for (auto& t : f->terms) {
                Pos p = value(t);
                if (p.out) return false;
                args.push_back(p.idx);
            }
            if (args.empty()) return pairs.test(f->key, 1, 1);
            if (args.size() == 1) return pairs.test(f->key, args[0], args[0]);
            return pairs.test(f->key, args[0], args[1]);
        }
        case Kind::In: return !value(f->terms[0]).out;
        case Kind::Out: return value(f->terms[0]).out;
        case Kind::Eq: {
            Pos a = value(f->terms[0]), b = value(f->terms[1]);
            return a.out == b.out && a.idx == b.idx;
        }
        case Kind::MemberOf: {
            if (!sets || !sets->count(f->name))
                throw Error(ErrorKind::NotASentence, "unbound set variable '" + f->name + "'");
            Pos p = value(f->terms[0]);
            int bit = p.out ? int(g.input.size()) + p.idx - 1 : p.idx - 1;
            return (sets->at(f->name) >> bit) & 1;
        }
        case Kind::Not: return !eval(f->kids[0]);
        case Kind::And:
            for (auto& k : f->kids)
                if (!eval(k)) return false;
            return true;
        case Kind::Or:
            for (auto& k : f->kids)
                if (eval(k)) return true;
            return false;
        case Kind::Implies: return !eval(f->kids[0]) || eval(f->kids[1]);
        case Kind::Iff: return eval(f->kids[0]) == eval(f->kids[1]);
        case Kind::Quant: {
            Pos saved = env[f->var];
            bool saved_b = bound[f->var];
            bool want = f->q == QKind::Exists;
            bool result = !want;
            bound[f->var] = true;
            auto range = [&](bool out, int n) {
                for (int i = 1; i <= n && result != want; ++i) {
                    env[f->var] = {out, i};
                    if (eval(f->kids[0]) == want) result = want;
                }
            };
            if (f->qtype != QType::Out) range(false, int(g.input.size()));
            if (f->qtype != QType::In) range(true, int(g.output.size()));
            env[f->var] = saved;
            bound[f->var] = saved_b;
            return result;
        }
        }
        return false;
    }
};

} // namespace

bool evaluate(const F& f, const OGraph& g, const PredicateTable& table) {
    check_sentence(f);
    g.validate();
    Evaluator ev(g, table);
    return ev.eval(f);
}

bool evaluate(const Document& d, const OGraph& g, const PredicateTable& table) {
    if (d.setvars.empty()) return evaluate(d.body, g, table);
    check_sentence(d.body);
    g.validate();
    int npos = int(g.input.size() + g.output.size());
    if (npos * int(d.setvars.size()) > 24) throw Error(ErrorKind::Precondition, "o-graph too large for set variables");
    Evaluator ev(g, table);
    std::map<std::string, std::uint64_t> sets;
    ev.sets = &sets;
    std::uint64_t per = std::uint64_t{1} << npos;
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < d.setvars.size(); ++k) total *= per;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (auto& x : d.setvars) sets[x] = c % per, c /= per;
        if (ev.eval(d.body)) return true;
    }
    return false;
}

namespace {

void check_data_formula(const F& f) {
    if (f->kind == Kind::In || f->kind == Kind::Out || f->kind == Kind::MemberOf || f->kind == Kind::Bit)
        throw Error(ErrorKind::NotDataFormula, "atom not allowed in a data formula");
    if (f->kind == Kind::Quant && f->qtype != QType::Any)
        throw Error(ErrorKind::NotDataFormula, "typed quantifier in a data formula");
    for (auto& t : f->terms)
        if (t.depth > 0) throw Error(ErrorKind::NotDataFormula, "origin term in a data formula");
    for (auto& k : f->kids) check_data_formula(k);
}

struct DataEvaluator {
    const TypedDataWord& w;
    PairCache pairs;
    int env[2] = {0, 0};

    static Word type_word(const TypedDataWord& w, const PredicateTable& t) {
        std::vector<std::string> types(w.data_size());
        for (auto& l : w.letters) types[l.datum - 1] = l.sigma;
        return t.encode(types);
    }
    DataEvaluator(const TypedDataWord& word, const PredicateTable& t) : w(word), pairs(t, type_word(word, t)) {}

    bool eval(const F& f) {
        auto pos = [&](int i) { return env[f->terms[i].var]; };
        switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::OutLabel: return strip_bits(w.letters[pos(0) - 1].gamma) == f->name;
        case Kind::LeqOut: return pos(0) <= pos(1);
        case Kind::Eq: return pos(0) == pos(1);
        case Kind::Pred: {
            std::vector<int> d;
            for (std::size_t i = 0; i < f->terms.size(); ++i) d.push_back(w.letters[pos(int(i)) - 1].datum);
            if (d.empty()) return pairs.test(f->key, 1, 1);
            if (d.size() == 1) return pairs.test(f->key, d[0], d[0]);
            return pairs.test(f->key, d[0], d[1]);
        }
        case Kind::Not: return !eval(f->kids[0]);
        case Kind::And:
            for (auto& k : f->kids)
                if (!eval(k)) return false;
            return true;
        case Kind::Or:
            for (auto& k : f->kids)
                if (eval(k)) return true;
            return false;
        case Kind::Implies: return !eval(f->kids[0]) || eval(f->kids[1]);
        case Kind::Iff: return eval(f->kids[0]) == eval(f->kids[1]);
        case Kind::Quant: {
            int saved = env[f->var];
            bool want = f->q == QKind::Exists;
            bool result = !want;
            for (int i = 1; i <= int(w.letters.size()) && result != want; ++i) {
                env[f->var] = i;
                if (eval(f->kids[0]) == want) result = want;
            }
            env[f->var] = saved;
            return result;
        }
        default: return false;
        }
    }
};

} // namespace

bool evaluate_ld(const F& f, const TypedDataWord& w, const PredicateTable& table) {
    check_data_formula(f);
    check_sentence(f);
    if (w.letters.empty()) throw Error(ErrorKind::Precondition, "data word of size 0");
    w.validate();
    DataEvaluator ev(w, table);
    return ev.eval(f);
}

// ---------------------------------------------------------------------------
// rewriting

F nnf(const F& f) {
    std::function<F(const F&, bool)> go = [&](const F& g, bool neg) -> F {
        switch (g->kind) {
        case Kind::True: return mk_bool(!neg);
        case Kind::False: return mk_bool(neg);
        case Kind::Not: return go(g->kids[0], !neg);
        case Kind::And:
        case Kind::Or: {
            std::vector<F> ks;
            for (auto& k : g->kids) ks.push_back(go(k, neg));
            bool conj = (g->kind == Kind::And) != neg;
            return conj ? mk_and(ks) : mk_or(ks);
        }
        case Kind::Implies: {
            F a = go(g->kids[0], true), b = go(g->kids[1], false);
            return neg ? mk_and(go(g->kids[0], false), go(g->kids[1], true)) : mk_or(a, b);
        }
        case Kind::Iff: {
            F a = go(g->kids[0], false), b = go(g->kids[1], false);
            F na = go(g->kids[0], true), nb = go(g->kids[1], true);
            if (!neg) return mk_or(mk_and(a, b), mk_and(na, nb));
            return mk_or(mk_and(a, nb), mk_and(na, b));
        }
        case Kind::Quant: {
            QKind q = neg ? (g->q == QKind::Exists ? QKind::Forall : QKind::Exists) : g->q;
            return mk_quant(q, g->qtype, g->var, go(g->kids[0], neg));
        }
        default: return neg ? mk_not(g) : g;
        }
    };
    return go(f, false);
}

F simplify(const F& f) {
    switch (f->kind) {
    case Kind::Not: {
        F a = simplify(f->kids[0]);
        if (a->kind == Kind::True) return mk_false();
        if (a->kind == Kind::False) return mk_true();
        if (a->kind == Kind::Not) return a->kids[0];
        return mk_not(a);
    }
    case Kind::And:
    case Kind::Or: {
        bool conj = f->kind == Kind::And;
        std::vector<F> ks;
        std::function<void(const F&)> add = [&](const F& k) {
            if (k->kind == f->kind) {
                for (auto& c : k->kids) add(c);
                return;
            }
            for (auto& e : ks)
                if (structurally_equal(e, k)) return;
            ks.push_back(k);
        };
        for (auto& k : f->kids) {
            F s = simplify(k);
            if (s->kind == (conj ? Kind::False : Kind::True)) return s;
            if (s->kind == (conj ? Kind::True : Kind::False)) continue;
            add(s);
        }
        return conj ? mk_and(ks) : mk_or(ks);
    }
    case Kind::Implies: {
        F a = simplify(f->kids[0]), b = simplify(f->kids[1]);
        if (a->kind == Kind::False || b->kind == Kind::True) return mk_true();
        if (a->kind == Kind::True) return b;
        if (b->kind == Kind::False) return simplify(mk_not(a));
        return mk_implies(a, b);
    }
    case Kind::Iff: {
        F a = simplify(f->kids[0]), b = simplify(f->kids[1]);
        if (a->kind == Kind::True) return b;
        if (b->kind == Kind::True) return a;
        if (a->kind == Kind::False) return simplify(mk_not(b));
        if (b->kind == Kind::False) return simplify(mk_not(a));
        if (structurally_equal(a, b)) return mk_true();
        return mk_iff(a, b);
    }
    case Kind::Quant: {
        F b = simplify(f->kids[0]);
        bool ex = f->q == QKind::Exists;
        // the input domain is never empty, the output domain may be
        if (b->kind == (ex ? Kind::False : Kind::True)) return b;
        if (f->qtype != QType::Out && (b->kind == Kind::True || b->kind == Kind::False)) return b;
        if (f->qtype != QType::Out && !(free_vars(b) & (1 << f->var))) return b;
        return mk_quant(f->q, f->qtype, f->var, b);
    }
    default: return f;
    }
}

F negate(const F& f) { return simplify(nnf(mk_not(f))); }

F negate(const Document& d) {
    if (!d.setvars.empty())
        throw Error(ErrorKind::NotClosedUnderNegation, "formulas with set quantifiers are not closed under negation");
    return negate(d.body);
}

namespace {

// maps each term through fn; kids rebuilt
F map_terms(const F& f, const std::function<Term(Term)>& fn, int shadow_mask = 0) {
    if (f->kind == Kind::Quant) {
        F b = map_terms(f->kids[0], fn, shadow_mask | (1 << f->var));
        return mk_quant(f->q, f->qtype, f->var, b);
    }
    Node n = *f;
    for (auto& t : n.terms)
        if (!(shadow_mask & (1 << t.var))) t = fn(t);
    for (auto& k : n.kids) k = map_terms(k, fn, shadow_mask);
    return make(std::move(n));
}

// substitutes v := o(v) for free occurrences
F subst_origin(const F& f, int v) {
    std::function<F(const F&)> go = [&](const F& g) -> F {
        if (g->kind == Kind::Quant) {
            if (g->var == v) return g;
            return mk_quant(g->q, g->qtype, g->var, go(g->kids[0]));
        }
        Node n = *g;
        for (auto& t : n.terms)
            if (t.var == v) t.depth = std::max(1, t.depth + 1);
        for (auto& k : n.kids) k = go(k);
        return make(std::move(n));
    };
    return go(f);
}

enum class Ty { Unknown, In, Out };

F type_atoms(const F& f, Ty env[2]) {
    auto ty = [&](Term t) { return t.depth > 0 ? Ty::In : env[t.var]; };
    auto norm = [&](Term t) {
        if (env[t.var] == Ty::In) t.depth = 0;
        else if (env[t.var] == Ty::Out && t.depth > 1) t.depth = 1;
        return t;
    };
    auto rebuild = [&](const F& g) {
        Node n = *g;
        for (auto& t : n.terms) t = norm(t);
        return make(std::move(n));
    };
    auto known = [&](Term t) { return ty(t) != Ty::Unknown; };
    switch (f->kind) {
    case Kind::OutLabel:
    case Kind::Bit:
        if (known(f->terms[0]) && ty(f->terms[0]) != Ty::Out) return mk_false();
        return rebuild(f);
    case Kind::LeqOut:
        for (auto t : f->terms)
            if (known(t) && ty(t) != Ty::Out) return mk_false();
        return rebuild(f);
    case Kind::Pred:
        for (auto t : f->terms)
            if (known(t) && ty(t) != Ty::In) return mk_false();
        return rebuild(f);
    case Kind::In:
    case Kind::Out:
        if (!known(f->terms[0])) return f;
        return mk_bool((ty(f->terms[0]) == Ty::In) == (f->kind == Kind::In));
    case Kind::Eq:
        if (known(f->terms[0]) && known(f->terms[1]) && ty(f->terms[0]) != ty(f->terms[1])) return mk_false();
        return rebuild(f);
    case Kind::MemberOf: return rebuild(f);
    case Kind::Quant: {
        auto sub = [&](QType qt) {
            Ty saved = env[f->var];
            env[f->var] = qt == QType::In ? Ty::In : Ty::Out;
            F b = type_atoms(f->kids[0], env);
            env[f->var] = saved;
            return mk_quant(f->q, qt, f->var, b);
        };
        if (f->qtype != QType::Any) return sub(f->qtype);
        F a = sub(QType::In), b = sub(QType::Out);
        return f->q == QKind::Exists ? mk_or(a, b) : mk_and(a, b);
    }
    default: {
        if (f->kids.empty()) return f;
        Node n = *f;
        for (auto& k : n.kids) k = type_atoms(k, env);
        return make(std::move(n));
    }
    }
}

} // namespace

F split_and_type(const F& f) {
    Ty env[2] = {Ty::Unknown, Ty::Unknown};
    return simplify(type_atoms(f, env));
}

F output_form(const F& f) {
    std::function<F(const F&)> go = [&](const F& g) -> F {
        if (g->kind == Kind::Quant) {
            F b = go(g->kids[0]);
            switch (g->qtype) {
            case QType::Out: return mk_quant(g->q, QType::Out, g->var, b);
            case QType::In: return mk_quant(g->q, QType::Out, g->var, subst_origin(b, g->var));
            case QType::Any: {
                F a = mk_quant(g->q, QType::Out, g->var, b);
                F c = mk_quant(g->q, QType::Out, g->var, subst_origin(b, g->var));
                return g->q == QKind::Exists ? mk_or(a, c) : mk_and(a, c);
            }
            }
        }
        if (g->kids.empty()) return g;
        Node n = *g;
        for (auto& k : n.kids) k = go(k);
        return make(std::move(n));
    };
    return go(f);
}

F lt_to_ld(const F& f) {
    F typed = split_and_type(output_form(f));
    static const std::set<std::string> ordered{"leq", "lt", "eq", "succ"};
    std::function<F(const F&)> go = [&](const F& g) -> F {
        switch (g->kind) {
        case Kind::Quant: return mk_quant(g->q, QType::Any, g->var, go(g->kids[0]));
        case Kind::Eq:
            if (g->terms[0].depth > 0 && g->terms[1].depth > 0)
                return mk_pred("eq_data", "eq", {tv(g->terms[0].var), tv(g->terms[1].var)});
            return g;
        case Kind::Pred: {
            std::vector<Term> args;
            for (auto t : g->terms) args.push_back(tv(t.var));
            std::string name = ordered.count(g->key) ? g->key + "_data" : g->key;
            return mk_pred(name, g->key, args);
        }
        default: {
            if (g->kids.empty()) return g;
            Node n = *g;
            for (auto& k : n.kids) k = go(k);
            return make(std::move(n));
        }
        }
    };
    return simplify(go(typed));
}

F ld_to_lt(const F& f) {
    check_data_formula(f);
    std::function<F(const F&)> go = [&](const F& g) -> F {
        switch (g->kind) {
        case Kind::Quant: return mk_quant(g->q, QType::Out, g->var, go(g->kids[0]));
        case Kind::Pred: {
            std::vector<Term> args;
            for (auto t : g->terms) args.push_back(to(t.var));
            return mk_pred(g->key, g->key, args);
        }
        default: {
            if (g->kids.empty()) return g;
            Node n = *g;
            for (auto& k : n.kids) k = go(k);
            return make(std::move(n));
        }
        }
    };
    return go(f);
}

// ---------------------------------------------------------------------------
// set variables as extra letter bits

EltReduction elt_reduce(const Document& d, const PredicateTable& table) {
    EltReduction r;
    r.doc = d;
    r.doc.setvars.clear();
    std::size_t k = d.setvars.size();
    if (k == 0) {
        r.table = table;
        for (auto& s : table.sigma) r.input_base[s] = s;
        for (auto& g : d.output_alphabet) r.output_base[g] = g;
        return r;
    }
    auto suffix = [&](unsigned mask) {
        std::string s;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) s += "+" + d.setvars[i];
        return s;
    };
    std::vector<std::string> sigma2, gamma2;
    std::vector<int> base_of;
    for (int a = 0; a < int(table.sigma.size()); ++a)
        for (unsigned m = 0; m < (1u << k); ++m) {
            sigma2.push_back(table.sigma[a] + suffix(m));
            base_of.push_back(a);
            r.input_base[sigma2.back()] = table.sigma[a];
        }
    for (auto& g : d.output_alphabet)
        for (unsigned m = 0; m < (1u << k); ++m) {
            gamma2.push_back(g + suffix(m));
            r.output_base[gamma2.back()] = g;
        }
    r.table = builtin_table(sigma2);
    for (auto& [name, e] : table.entries) r.table.add(name, lift_alphabet(e.qa, sigma2, base_of), e.arity);
    r.doc.input_alphabet = sigma2;
    r.doc.output_alphabet = gamma2;

    std::function<F(const F&)> go = [&](const F& g) -> F {
        switch (g->kind) {
        case Kind::OutLabel: {
            std::vector<F> xs;
            for (unsigned m = 0; m < (1u << k); ++m) xs.push_back(mk_label(g->name + suffix(m), g->terms[0]));
            return mk_or(xs);
        }
        case Kind::MemberOf: {
            std::size_t idx = std::find(d.setvars.begin(), d.setvars.end(), g->name) - d.setvars.begin();
            std::vector<F> xs;
            for (unsigned m = 0; m < (1u << k); ++m) {
                if (!(m & (1u << idx))) continue;
                for (auto& gl : d.output_alphabet) xs.push_back(mk_label(gl + suffix(m), g->terms[0]));
                for (auto& s : table.sigma) {
                    std::string key = "lab_" + s + suffix(m);
                    xs.push_back(mk_pred(key, key, {g->terms[0]}));
                }
            }
            return mk_or(xs);
        }
        default: {
            if (g->kids.empty()) return g;
            Node n = *g;
            for (auto& c : n.kids) c = go(c);
            return make(std::move(n));
        }
        }
    };
    r.doc.body = go(d.body);
    return r;
}

OGraph project_graph(const OGraph& g, const std::map<std::string, std::string>& in_base,
                     const std::map<std::string, std::string>& out_base) {
    OGraph r = g;
    for (auto& s : r.input) {
        auto it = in_base.find(s);
        if (it != in_base.end()) s = it->second;
    }
    for (auto& s : r.output) {
        auto it = out_base.find(s);
        if (it != out_base.end()) s = it->second;
    }
    return r;
}

} // namespace ltsynth
