#pragma once

#include <string>
#include <vector>

#include "ltsynth/errors.hpp"

namespace ltsynth {

// Origin graph: input word, output word, origin of each output position (1-based).
struct OGraph {
    std::vector<std::string> input;
    std::vector<std::string> output;
    std::vector<int> origin;

    void validate() const;  // throws Input on empty input or bad origins
    bool operator==(const OGraph&) const = default;
    auto operator<=>(const OGraph&) const = default;
};

struct DataLetter {
    std::string gamma;
    int datum = 0;
    std::string sigma;
    bool operator==(const DataLetter&) const = default;
};

struct TypedDataWord {
    std::vector<DataLetter> letters;

    void validate() const;  // data = {1..m}, one type per datum
    int data_size() const;
    bool operator==(const TypedDataWord&) const = default;
};

bool is_non_erasing(const OGraph& g);
TypedDataWord t2d(const OGraph& g);
OGraph t2d_inv(const TypedDataWord& w);

// `in: ...`, `out: ...`, `orig: ...`
OGraph parse_ograph(const std::string& text);
std::string print_ograph(const OGraph& g);
// whitespace separated `gamma:datum:sigma`
TypedDataWord parse_data_word(const std::string& text);
std::string print_data_word(const TypedDataWord& w);

std::vector<std::string> split_symbols(const std::string& s);

} // namespace ltsynth
