#pragma once

#include "courtlift/metrics.hpp"
#include "courtlift/predictors.hpp"
#include "courtlift/sample.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace courtlift {

enum class Method { Height, Diameter };

std::string to_string(Method m);

struct EvaluationOptions
{
    PredictorSpec predictor;
    Method method = Method::Height;
    std::size_t repeats = 8;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double ball_diameter_m = kBasketballDiameter;
};

struct EvaluationResult
{
    AggregateReport aggregate;
    std::vector<EvalReport> repeats;
};

/// Predictor seed of repeat r, mixing the run seed with the spec's own seed.
std::uint64_t repeat_seed(std::uint64_t run_seed, std::uint64_t spec_seed, std::size_t repeat);

/*!
 * k seeded repeats of predict -> reconstruct -> evaluate. Samples are
 * processed in parallel; per-sample RNG streams and index-ordered reduction
 * make the result independent of `threads`.
 */
EvaluationResult run_evaluation(std::span<const BallSample> samples, const EvaluationOptions& options);

/// --threads value, else COURTLIFT_THREADS, else hardware concurrency.
unsigned resolve_threads(int requested);

/// Entry point of the command-line tool. Exit codes: 0 ok, 1 runtime/geometry failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace courtlift
