#include "courtlift/predictors.hpp"

#include "courtlift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace courtlift {

namespace {

// Multiplicative diameter noise is floored at this fraction of the true
// diameter so an extreme draw yields a far (outlier) ball, not a negative size.
constexpr double kMinDiameterFraction = 0.01;

}  // namespace

std::string to_string(PredictorKind kind)
{
    switch (kind)
    {
        case PredictorKind::Oracle: return "oracle";
        case PredictorKind::Gaussian: return "gaussian";
        case PredictorKind::HeavyTailed: return "heavy_tailed";
    }
    return "unknown";
}

PredictorKind predictor_kind_from_string(const std::string& name)
{
    if (name == "oracle")
        return PredictorKind::Oracle;
    if (name == "gaussian")
        return PredictorKind::Gaussian;
    if (name == "heavy_tailed")
        return PredictorKind::HeavyTailed;
    throw Error(ErrorCode::InvalidPredictorSpec, "unknown predictor kind '" + name + "'");
}

void validate(const PredictorSpec& spec)
{
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma))
        throw Error(ErrorCode::InvalidPredictorSpec, "sigma must be >= 0");
    if (!(spec.nu > 1.0))
        throw Error(ErrorCode::InvalidPredictorSpec, "nu must be > 1");
    if (spec.target_mae && !(*spec.target_mae > 0.0))
        throw Error(ErrorCode::InvalidPredictorSpec, "target_mae must be > 0");
}

double student_t_mean_abs(double nu)
{
    // 2 sqrt(nu) Gamma((nu+1)/2) / (sqrt(pi) (nu-1) Gamma(nu/2))
    const double log_ratio = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu);
    return 2.0 * std::sqrt(nu) * std::exp(log_ratio) / (std::sqrt(std::numbers::pi) * (nu - 1.0));
}

double noise_scale(const PredictorSpec& spec)
{
    switch (spec.kind)
    {
        case PredictorKind::Oracle: return 0.0;
        case PredictorKind::Gaussian:
            return spec.target_mae ? *spec.target_mae / std::sqrt(2.0 / std::numbers::pi) : spec.sigma;
        case PredictorKind::HeavyTailed:
            return spec.target_mae ? *spec.target_mae / student_t_mean_abs(spec.nu) : spec.sigma;
    }
    return 0.0;
}

double noise_draw(const PredictorSpec& spec, StreamTag tag, std::uint64_t index)
{
    if (spec.kind == PredictorKind::Oracle)
        return 0.0;
    RandomStream rng(spec.seed, tag, index);
    return spec.kind == PredictorKind::Gaussian ? rng.normal() : rng.student_t(spec.nu);
}

HeightPrediction predict_height(const PredictorSpec& spec, const BallSample& sample, std::uint64_t index)
{
    if (!std::isfinite(sample.h_true))
        throw Error(ErrorCode::MissingGroundTruth, "sample " + std::to_string(sample.sample_id) + " has no h_true");
    if (spec.kind == PredictorKind::Oracle)
        return {sample.h_true};
    return {sample.h_true + noise_scale(spec) * noise_draw(spec, StreamTag::HeightNoise, index)};
}

double predict_diameter(const PredictorSpec& spec, const BallSample& sample, std::uint64_t index)
{
    if (!std::isfinite(sample.diameter_px_true))
        throw Error(ErrorCode::MissingGroundTruth,
                    "sample " + std::to_string(sample.sample_id) + " has no diameter annotation");
    if (spec.kind == PredictorKind::Oracle)
        return sample.diameter_px_true;
    const double relative = noise_scale(spec) * noise_draw(spec, StreamTag::DiameterNoise, index);
    return sample.diameter_px_true * std::max(1.0 + relative, kMinDiameterFraction);
}

void to_json(nlohmann::json& j, const PredictorSpec& spec)
{
    j = nlohmann::json{{"kind", to_string(spec.kind)}, {"sigma", spec.sigma}, {"nu", spec.nu}, {"seed", spec.seed}};
    j["target_mae"] = spec.target_mae ? nlohmann::json(*spec.target_mae) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, PredictorSpec& spec)
{
    try
    {
        spec = PredictorSpec{};
        spec.kind = predictor_kind_from_string(j.at("kind").get<std::string>());
        spec.sigma = j.value("sigma", 0.0);
        spec.nu = j.value("nu", 3.0);
        spec.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("target_mae") && !j["target_mae"].is_null())
            spec.target_mae = j["target_mae"].get<double>();
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::InvalidPredictorSpec, e.what());
    }
    validate(spec);
}

}  // namespace courtlift
