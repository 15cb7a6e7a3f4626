// Runs the full acceptance suite against the shipped corpus and prints one
// pass/fail line per criterion.
#include <cstdio>
#include <cstdlib>

#include <sys/resource.h>

#include "paplang/acceptance.hpp"

namespace {
// deep fuel-exhaustion runs nest one evaluator frame per unfolding; give the
// interpreter room to recurse
void raiseStackLimit() {
    rlimit rl{};
    if (getrlimit(RLIMIT_STACK, &rl) == 0 && rl.rlim_cur != rl.rlim_max) {
        rl.rlim_cur = rl.rlim_max;
        setrlimit(RLIMIT_STACK, &rl);
    }
}
} // namespace

int main(int argc, char** argv) {
    raiseStackLimit();
    std::string dir = argc > 1 ? argv[1] : paplang::defaultCorpusDir();
    std::uint64_t seed = 42;
    if (const char* s = std::getenv("PAPLANG_SEED")) seed = std::strtoull(s, nullptr, 10);

    int failures = 0;
    try {
        for (const auto& r : paplang::runAcceptance(dir, seed)) {
            std::printf("%-28s %s  (%s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.detail.c_str());
            if (!r.pass) ++failures;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", ex.what());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
