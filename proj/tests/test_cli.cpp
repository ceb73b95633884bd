#include "doctest.h"

#include <cstdio>
#include <sys/wait.h>

#include "support.hpp"

using namespace testsupport;

namespace {

struct Run {
    std::string out;
    int code = -1;
};

Run run(const std::string& args) {
    std::string cmd = "cd '" + root() + "' && '" + LTSYNTH_CLI + "' " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

} // namespace

TEST_CASE("golden outputs and exit codes") {
    std::istringstream cases(slurp(root() + "/tests/golden/cases.txt"));
    std::string line;
    int count = 0;
    while (std::getline(cases, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string name;
        int code = 0;
        is >> name >> code;
        std::string args;
        std::getline(is, args);
        Run r = run(args);
        std::string expect = slurp(root() + "/tests/golden/" + name + ".out");
        // golden files end with one newline, also for empty output
        if (r.out.empty() || r.out.back() != '\n') r.out += '\n';
        CHECK_MESSAGE(r.code == code, name);
        CHECK_MESSAGE(r.out == expect, name);
        ++count;
    }
    CHECK(count >= 20);
}

TEST_CASE("domain automaton file") {
    std::string path = "/tmp/ltsynth_cli_domain.aut";
    Run r = run("domain corpus/abab.lt --preds preds --nfa " + path);
    CHECK(r.code == 0);
    ltsynth::Nfa a = ltsynth::parse_nfa(slurp(path));
    CHECK(ltsynth::run_accepts(a, word("abab")));
    CHECK_FALSE(ltsynth::run_accepts(a, word("abba")));
    std::remove(path.c_str());
}
