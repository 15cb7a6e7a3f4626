#pragma once

#include <optional>
#include <vector>

#include "paplang/syntax.hpp"
#include "paplang/value.hpp"

namespace paplang {

// A trace is a finite list of sampled reals.
using Trace = std::vector<double>;

struct ElaborationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value type computed by a closed probabilistic program (unit is encoded as R).
TyPtr probValueTy(const ProbPtr& p);

// Elaborates p to a core term of type Trace_k -> (Maybe tau x (R x Trace_k)),
// where Trace_k = R x Slots_k is a length-tagged trace of capacity k, Slots
// are nested pairs of reals, and Maybe tau = R x tau with a positive flag for
// Just. The capacity is fixed per query.
TermPtr elaborate(const ProbPtr& p, int capacity);

// The density term: a closed first-order function from a nested pair of k
// reals (the trace entries) to R, per the leftover-randomness-is-zero rule.
TermPtr densityTerm(const ProbPtr& p, int k);

struct DensityResult {
    std::optional<double> density; // nullopt on bottom
    Outcome outcome;               // raw evaluation outcome
};

// Runs the elaborated program on tr: 0.0 on leftover randomness, otherwise
// the accumulated weight. A negative score weight surfaces as a DomainError
// bottom with detail "negative score weight".
DensityResult traceDensity(const ProbPtr& p, const Trace& tr, long fuel = 1024);

// Gradient of the density in the k trace coordinates, via the AD macro.
std::optional<std::vector<double>> densityGradient(const ProbPtr& p, const Trace& tr,
                                                   long fuel = 1024);

} // namespace paplang
