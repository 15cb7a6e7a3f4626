#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paplang/syntax.hpp"

namespace paplang {

// One entry of corpus/manifest.json.
struct CorpusEntry {
    std::string file;
    std::string tyText;
    std::vector<std::string> tags;
    double lo = 0.0, hi = 1.0; // per-coordinate sampling box
    int unrollBudget = 4;
    bool oracle = false;
    std::vector<double> adFailurePoints;
    Program prog;

    bool hasTag(const std::string& t) const;
    bool probabilistic() const { return prog.prob != nullptr; }
};

// PAPLANG_CORPUS overrides the compiled-in location.
std::string defaultCorpusDir();
std::vector<CorpusEntry> loadCorpus(const std::string& dir);

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The eleven acceptance checks, in order. Every randomized check draws from a
// single generator seeded with `seed`.
std::vector<CriterionResult> runAcceptance(const std::string& corpusDir, std::uint64_t seed);

} // namespace paplang
