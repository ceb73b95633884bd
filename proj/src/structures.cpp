#include "ltsynth/structures.hpp"

#include <map>
#include <set>
#include <sstream>

namespace ltsynth {

void OGraph::validate() const {
    if (input.empty()) throw Error(ErrorKind::Input, "o-graph with empty input word");
    if (origin.size() != output.size()) throw Error(ErrorKind::Input, "origin and output lengths differ");
    for (int o : origin)
        if (o < 1 || o > int(input.size())) throw Error(ErrorKind::Input, "origin out of range");
}

void TypedDataWord::validate() const {
    std::map<int, std::string> type;
    for (auto& l : letters) {
        if (l.datum < 1) throw Error(ErrorKind::Input, "datum must be positive");
        auto [it, fresh] = type.emplace(l.datum, l.sigma);
        if (!fresh && it->second != l.sigma)
            throw Error(ErrorKind::Input, "datum " + std::to_string(l.datum) + " has two types");
    }
    int m = data_size();
    if (int(type.size()) != m) throw Error(ErrorKind::Input, "data values are not 1..m");
}

int TypedDataWord::data_size() const {
    int m = 0;
    for (auto& l : letters) m = std::max(m, l.datum);
    return m;
}

bool is_non_erasing(const OGraph& g) {
    std::set<int> used(g.origin.begin(), g.origin.end());
    return !g.input.empty() && used.size() == g.input.size();
}

TypedDataWord t2d(const OGraph& g) {
    g.validate();
    if (!is_non_erasing(g)) throw Error(ErrorKind::Precondition, "t2d needs a non-erasing o-graph");
    TypedDataWord w;
    for (std::size_t i = 0; i < g.output.size(); ++i)
        w.letters.push_back({g.output[i], g.origin[i], g.input[g.origin[i] - 1]});
    return w;
}

OGraph t2d_inv(const TypedDataWord& w) {
    w.validate();
    if (w.letters.empty()) throw Error(ErrorKind::Precondition, "data word of size 0");
    OGraph g;
    g.input.resize(w.data_size());
    for (auto& l : w.letters) {
        g.output.push_back(l.gamma);
        g.origin.push_back(l.datum);
        g.input[l.datum - 1] = l.sigma;
    }
    return g;
}

std::vector<std::string> split_symbols(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> r;
    std::string w;
    while (is >> w) r.push_back(w);
    return r;
}

OGraph parse_ograph(const std::string& text) {
    OGraph g;
    bool seen_in = false;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto c = line.find("//");
        if (c != std::string::npos) line.resize(c);
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            if (split_symbols(line).empty()) continue;
            throw Error(ErrorKind::Syntax, "o-graph line without key: " + line);
        }
        auto key = split_symbols(line.substr(0, colon));
        auto vals = split_symbols(line.substr(colon + 1));
        std::string k = key.empty() ? "" : key[0];
        if (k == "in") g.input = vals, seen_in = true;
        else if (k == "out") g.output = vals;
        else if (k == "orig") {
            g.origin.clear();
            for (auto& v : vals) {
                try {
                    g.origin.push_back(std::stoi(v));
                } catch (...) {
                    throw Error(ErrorKind::Syntax, "bad origin '" + v + "'");
                }
            }
        } else
            throw Error(ErrorKind::Syntax, "unknown o-graph key '" + k + "'");
    }
    if (!seen_in) throw Error(ErrorKind::Syntax, "o-graph without 'in:' line");
    g.validate();
    return g;
}

std::string print_ograph(const OGraph& g) {
    std::ostringstream os;
    os << "in:";
    for (auto& s : g.input) os << ' ' << s;
    os << "\nout:";
    for (auto& s : g.output) os << ' ' << s;
    os << "\norig:";
    for (int o : g.origin) os << ' ' << o;
    os << '\n';
    return os.str();
}

TypedDataWord parse_data_word(const std::string& text) {
    TypedDataWord w;
    for (auto& tok : split_symbols(text)) {
        auto a = tok.find(':'), b = tok.rfind(':');
        if (a == std::string::npos || a == b) throw Error(ErrorKind::Syntax, "bad data letter '" + tok + "'");
        DataLetter l;
        l.gamma = tok.substr(0, a);
        l.sigma = tok.substr(b + 1);
        try {
            l.datum = std::stoi(tok.substr(a + 1, b - a - 1));
        } catch (...) {
            throw Error(ErrorKind::Syntax, "bad datum in '" + tok + "'");
        }
        w.letters.push_back(l);
    }
    w.validate();
    return w;
}

std::string print_data_word(const TypedDataWord& w) {
    std::string s;
    for (auto& l : w.letters) {
        if (!s.empty()) s += ' ';
        s += l.gamma + ":" + std::to_string(l.datum) + ":" + l.sigma;
    }
    return s;
}

} // namespace ltsynth
