#include "ltsynth/oracle.hpp"

#include <map>

namespace ltsynth {

void enumerate_outputs(const std::vector<std::string>& u, const std::vector<std::string>& gamma, int max_output,
                       const std::function<bool(const OGraph&)>& visit) {
    int n = int(u.size());
    int k = int(gamma.size());
    for (int m = 0; m <= max_output; ++m) {
        std::vector<int> v(m, 0);
        // odometer over labels, then origins
        while (true) {
            std::vector<int> oo(m, 1);
            while (true) {
                OGraph g{u, {}, oo};
                for (int x : v) g.output.push_back(gamma[x]);
                if (!visit(g)) return;
                int i = m - 1;
                while (i >= 0 && oo[i] == n) oo[i--] = 1;
                if (i < 0) break;
                ++oo[i];
            }
            int i = m - 1;
            while (i >= 0 && v[i] == k - 1) v[i--] = 0;
            if (i < 0 || k == 0) break;
            ++v[i];
        }
    }
}

void enumerate_ographs(const EnumConfig& cfg, const std::function<bool(const OGraph&)>& visit) {
    int s = int(cfg.input_alphabet.size());
    if (s == 0) return;
    bool stop = false;
    for (int n = std::max(1, cfg.min_input); n <= cfg.max_input && !stop; ++n) {
        std::vector<int> code(n, 0);
        while (!stop) {
            std::vector<std::string> u;
            for (int c : code) u.push_back(cfg.input_alphabet[c]);
            enumerate_outputs(u, cfg.output_alphabet, cfg.max_output, [&](const OGraph& g) {
                if (cfg.non_erasing_only && !is_non_erasing(g)) return true;
                if (!visit(g)) stop = true;
                return !stop;
            });
            int i = n - 1;
            while (i >= 0 && code[i] == s - 1) code[i--] = 0;
            if (i < 0) break;
            ++code[i];
        }
    }
}

std::vector<OGraph> enumerate_ographs(const EnumConfig& cfg) {
    std::vector<OGraph> r;
    enumerate_ographs(cfg, [&](const OGraph& g) {
        r.push_back(g);
        return true;
    });
    return r;
}

// every run of the automaton on u, checked one by one
std::set<PosPair> oracle_pairs(const QueryAutomaton& q, const Word& u) {
    std::set<PosPair> out;
    const Nfa& a = q.base;
    int n = int(u.size());
    std::vector<int> run;
    std::function<void(int)> walk = [&](int pos) {
        if (pos == n) {
            if (!a.final[run.back()]) return;
            for (auto [p, r] : q.selecting_pairs)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (run[i] == p && run[j] == r) out.insert({i + 1, j + 1});
            return;
        }
        for (int t : a.delta[run.back()][u[pos]]) {
            run.push_back(t);
            walk(pos + 1);
            run.pop_back();
        }
    };
    for (int s = 0; s < a.num_states(); ++s)
        if (a.initial[s]) {
            run = {s};
            walk(0);
        }
    return out;
}

namespace {

// a position: 'i' or 'o' with a 1-based index
using Place = std::pair<char, int>;

struct Naive {
    const OGraph& g;
    const PredicateTable& table;
    std::map<std::string, std::set<PosPair>> memo;
    std::map<std::string, std::set<Place>> sets;

    const std::set<PosPair>& pairs_of(const std::string& key) {
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const PredEntry* e = table.find(key);
        if (!e) throw Error(ErrorKind::UnknownPredicate, key);
        Word w;
        for (auto& s : g.input) w.push_back(table.symbol_index(s));
        return memo[key] = oracle_pairs(e->qa, w);
    }

    Place place(const Term& t, const std::map<int, Place>& asg) {
        Place p = asg.at(t.var);
        for (int k = 0; k < t.depth; ++k)
            if (p.first == 'o') p = {'i', g.origin[p.second - 1]};
        return p;
    }

    bool holds(const F& f, std::map<int, Place> asg) {
        auto P = [&](int i) { return place(f->terms[i], asg); };
        switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::OutLabel: {
            Place p = P(0);
            if (p.first != 'o') return false;
            const std::string& l = g.output[p.second - 1];
            return l.substr(0, l.find('%')) == f->name;
        }
        case Kind::Bit: {
            Place p = P(0);
            if (p.first != 'o') return false;
            std::string l = g.output[p.second - 1] + "%";
            return l.find("%" + f->name + "%") != std::string::npos;
        }
        case Kind::LeqOut: return P(0).first == 'o' && P(1).first == 'o' && P(0).second <= P(1).second;
        case Kind::Eq: return P(0) == P(1);
        case Kind::In: return P(0).first == 'i';
        case Kind::Out: return P(0).first == 'o';
        case Kind::MemberOf: return sets.at(f->name).count(P(0)) > 0;
        case Kind::Pred: {
            std::vector<int> idx;
            for (std::size_t i = 0; i < f->terms.size(); ++i) {
                Place p = P(int(i));
                if (p.first != 'i') return false;
                idx.push_back(p.second);
            }
            const auto& sp = pairs_of(f->key);
            if (idx.empty()) return sp.count({1, 1}) > 0;
            if (idx.size() == 1) return sp.count({idx[0], idx[0]}) > 0;
            return sp.count({idx[0], idx[1]}) > 0;
        }
        case Kind::Not: return !holds(f->kids[0], asg);
        case Kind::And: {
            bool r = true;
            for (auto& k : f->kids) r = holds(k, asg) && r;
            return r;
        }
        case Kind::Or: {
            bool r = false;
            for (auto& k : f->kids) r = holds(k, asg) || r;
            return r;
        }
        case Kind::Implies: return !holds(f->kids[0], asg) || holds(f->kids[1], asg);
        case Kind::Iff: return holds(f->kids[0], asg) == holds(f->kids[1], asg);
        case Kind::Quant: {
            std::vector<Place> dom;
            if (f->qtype != QType::Out)
                for (int i = 1; i <= int(g.input.size()); ++i) dom.push_back({'i', i});
            if (f->qtype != QType::In)
                for (int i = 1; i <= int(g.output.size()); ++i) dom.push_back({'o', i});
            int count = 0;
            for (auto& p : dom) {
                asg[f->var] = p;
                count += holds(f->kids[0], asg) ? 1 : 0;
            }
            return f->q == QKind::Exists ? count > 0 : count == int(dom.size());
        }
        }
        return false;
    }
};

} // namespace

bool oracle_holds(const F& f, const OGraph& g, const PredicateTable& table) {
    Naive nv{g, table, {}, {}};
    return nv.holds(f, {});
}

bool oracle_holds(const Document& d, const OGraph& g, const PredicateTable& table) {
    Naive nv{g, table, {}, {}};
    std::vector<Place> all;
    for (int i = 1; i <= int(g.input.size()); ++i) all.push_back({'i', i});
    for (int i = 1; i <= int(g.output.size()); ++i) all.push_back({'o', i});
    std::function<bool(std::size_t)> pick = [&](std::size_t k) {
        if (k == d.setvars.size()) return nv.holds(d.body, {});
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << all.size()); ++m) {
            std::set<Place> s;
            for (std::size_t i = 0; i < all.size(); ++i)
                if ((m >> i) & 1) s.insert(all[i]);
            nv.sets[d.setvars[k]] = s;
            if (pick(k + 1)) return true;
        }
        return false;
    };
    return pick(0);
}

std::optional<OGraph> brute_sat(const Document& d, const PredicateTable& table, const EnumConfig& cfg) {
    std::optional<OGraph> found;
    enumerate_ographs(cfg, [&](const OGraph& g) {
        if (oracle_holds(d, g, table)) found = g;
        return !found;
    });
    return found;
}

std::vector<OGraph> brute_models(const Document& d, const PredicateTable& table, const std::vector<std::string>& u,
                                 int max_output) {
    std::vector<OGraph> r;
    enumerate_outputs(u, d.output_alphabet, max_output, [&](const OGraph& g) {
        if (oracle_holds(d, g, table)) r.push_back(g);
        return true;
    });
    return r;
}

std::set<std::vector<std::string>> brute_domain(const Document& d, const PredicateTable& table, int max_input,
                                                int max_output) {
    std::set<std::vector<std::string>> dom;
    EnumConfig cfg{d.input_alphabet, {}, 1, max_input, 0, false};
    enumerate_ographs(cfg, [&](const OGraph& g0) {
        bool hit = false;
        enumerate_outputs(g0.input, d.output_alphabet, max_output, [&](const OGraph& g) {
            hit = oracle_holds(d, g, table);
            return !hit;
        });
        if (hit) dom.insert(g0.input);
        return true;
    });
    return dom;
}

void enumerate_data_words(const std::vector<std::string>& gamma, const std::vector<std::string>& sigma, int max_len,
                          const std::function<bool(const TypedDataWord&)>& visit) {
    // restricted growth strings give the data values; types chosen per datum
    bool stop = false;
    for (int len = 1; len <= max_len && !stop; ++len) {
        std::vector<int> d(len, 1);
        std::function<void(int, int)> data = [&](int i, int mx) {
            if (stop) return;
            if (i == len) {
                // data = first-occurrence order; every permutation of the values is reached by relabeling
                std::vector<int> perm(mx);
                for (int k = 0; k < mx; ++k) perm[k] = k + 1;
                do {
                    std::vector<int> types(mx, 0);
                    while (!stop) {
                        std::vector<int> ls(len, 0);
                        while (!stop) {
                            TypedDataWord w;
                            for (int k = 0; k < len; ++k)
                                w.letters.push_back({gamma[ls[k]], perm[d[k] - 1], sigma[types[perm[d[k] - 1] - 1]]});
                            if (!visit(w)) stop = true;
                            int k = len - 1;
                            while (k >= 0 && ls[k] == int(gamma.size()) - 1) ls[k--] = 0;
                            if (k < 0) break;
                            ++ls[k];
                        }
                        int k = mx - 1;
                        while (k >= 0 && types[k] == int(sigma.size()) - 1) types[k--] = 0;
                        if (k < 0) break;
                        ++types[k];
                    }
                } while (!stop && std::next_permutation(perm.begin(), perm.end()));
                return;
            }
            for (int v = 1; v <= mx + 1; ++v) {
                d[i] = v;
                data(i + 1, std::max(mx, v));
            }
        };
        data(0, 0);
    }
}

namespace {

struct NaiveData {
    const TypedDataWord& w;
    const PredicateTable& table;
    std::map<std::string, std::set<PosPair>> memo;

    bool holds(const F& f, std::map<int, int> asg) {
        switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::OutLabel: {
            const std::string& l = w.letters[asg.at(f->terms[0].var) - 1].gamma;
            return l.substr(0, l.find('%')) == f->name;
        }
        case Kind::LeqOut: return asg.at(f->terms[0].var) <= asg.at(f->terms[1].var);
        case Kind::Eq: return asg.at(f->terms[0].var) == asg.at(f->terms[1].var);
        case Kind::Pred: {
            auto it = memo.find(f->key);
            if (it == memo.end()) {
                std::vector<std::string> types(w.data_size());
                for (auto& l : w.letters) types[l.datum - 1] = l.sigma;
                it = memo.emplace(f->key, oracle_pairs(table.find(f->key)->qa, table.encode(types))).first;
            }
            std::vector<int> dv;
            for (auto& t : f->terms) dv.push_back(w.letters[asg.at(t.var) - 1].datum);
            if (dv.empty()) return it->second.count({1, 1}) > 0;
            if (dv.size() == 1) return it->second.count({dv[0], dv[0]}) > 0;
            return it->second.count({dv[0], dv[1]}) > 0;
        }
        case Kind::Not: return !holds(f->kids[0], asg);
        case Kind::And:
            for (auto& k : f->kids)
                if (!holds(k, asg)) return false;
            return true;
        case Kind::Or:
            for (auto& k : f->kids)
                if (holds(k, asg)) return true;
            return false;
        case Kind::Implies: return !holds(f->kids[0], asg) || holds(f->kids[1], asg);
        case Kind::Iff: return holds(f->kids[0], asg) == holds(f->kids[1], asg);
        case Kind::Quant: {
            bool ex = f->q == QKind::Exists;
            for (int i = 1; i <= int(w.letters.size()); ++i) {
                asg[f->var] = i;
                if (holds(f->kids[0], asg) == ex) return ex;
            }
            return !ex;
        }
        default: throw Error(ErrorKind::NotDataFormula, "atom not allowed in a data formula");
        }
    }
};

} // namespace

bool oracle_holds_ld(const F& f, const TypedDataWord& w, const PredicateTable& table) {
    NaiveData nd{w, table, {}};
    return nd.holds(f, {});
}

std::optional<TypedDataWord> brute_sat_ld(const F& f, const PredicateTable& table,
                                          const std::vector<std::string>& gamma, int max_len) {
    std::optional<TypedDataWord> found;
    enumerate_data_words(gamma, table.sigma, max_len, [&](const TypedDataWord& w) {
        if (oracle_holds_ld(f, w, table)) found = w;
        return !found;
    });
    return found;
}

} // namespace ltsynth
