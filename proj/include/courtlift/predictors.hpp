#pragma once

#include "courtlift/random.hpp"
#include "courtlift/reconstruct.hpp"
#include "courtlift/sample.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace courtlift {

enum class PredictorKind { Oracle, Gaussian, HeavyTailed };

std::string to_string(PredictorKind kind);
PredictorKind predictor_kind_from_string(const std::string& name);

/*!
 * Stand-in for a learned pixel-height (or diameter) regressor.
 *
 * Noise is additive in px for heights and multiplicative (relative) for
 * diameters; `sigma` and `target_mae` use the matching unit. When
 * `target_mae` is set it overrides `sigma`: the noise scale is chosen so the
 * expected absolute error equals the target.
 */
struct PredictorSpec
{
    PredictorKind kind = PredictorKind::Oracle;
    double sigma = 0.0;
    double nu = 3.0;  // Student-t degrees of freedom, heavy-tailed kind only
    std::optional<double> target_mae;
    std::uint64_t seed = 0;

    bool operator==(const PredictorSpec&) const = default;
};

/// Throws InvalidPredictorSpec on a violated invariant.
void validate(const PredictorSpec& spec);

/// Noise scale actually applied (sigma, or the value reproducing target_mae).
double noise_scale(const PredictorSpec& spec);

/// E|T| for a Student-t variable with nu > 1 degrees of freedom.
double student_t_mean_abs(double nu);

/// Unit-scale noise draw for sample `index`; deterministic in (spec.seed, tag, index).
double noise_draw(const PredictorSpec& spec, StreamTag tag, std::uint64_t index);

HeightPrediction predict_height(const PredictorSpec& spec, const BallSample& sample, std::uint64_t index);

double predict_diameter(const PredictorSpec& spec, const BallSample& sample, std::uint64_t index);

void to_json(nlohmann::json& j, const PredictorSpec& spec);
void from_json(const nlohmann::json& j, PredictorSpec& spec);

}  // namespace courtlift
