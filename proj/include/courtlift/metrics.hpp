#pragma once

#include "courtlift/reconstruct.hpp"
#include "courtlift/sample.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace courtlift {

struct SampleError
{
    double h_err_px = 0.0;  // NaN when the method predicts no pixel height
    double proj_err_m = 0.0;
    double err3d_m = 0.0;
};

/// MAE is absent for methods without a pixel-height output (the diameter baseline).
struct EvalReport
{
    std::optional<double> mae_px;
    double mape_m = 0.0;
    double mdnape_m = 0.0;
    double ma3de_m = 0.0;
    double mdna3de_m = 0.0;
    std::size_t n_samples = 0;
    /// Samples whose reconstruction failed; they are excluded from the metrics above.
    std::size_t n_failed = 0;
    std::vector<SampleError> per_sample_errors;
};

struct MetricStat
{
    double mean = 0.0;
    double stddev = 0.0;
};

struct AggregateReport
{
    std::optional<MetricStat> mae_px;
    MetricStat mape_m;
    MetricStat mdnape_m;
    MetricStat ma3de_m;
    MetricStat mdna3de_m;
    std::size_t n_samples = 0;
    /// Failed reconstructions summed over all repeats.
    std::size_t n_failed = 0;
    std::size_t k = 0;
};

/// Order-independent sum: sorts, then sums pairwise.
double stable_sum(std::vector<double> values);
double mean_of(std::span<const double> values);
/// Even-length input yields the midpoint of the central pair.
double median_of(std::span<const double> values);

/// Metrics from already computed per-sample errors.
EvalReport summarize(std::vector<SampleError> errors);

EvalReport evaluate(std::span<const BallSample> samples, std::span<const Reconstruction> reconstructions,
                    std::span<const HeightPrediction> predictions);

/// Variant for methods that do not predict a pixel height.
EvalReport evaluate(std::span<const BallSample> samples, std::span<const Reconstruction> reconstructions);

/// Mean and sample standard deviation (k - 1 denominator) of each metric.
AggregateReport aggregate_repeats(std::span<const EvalReport> reports);

/*!
 * Counts per bin [e_i, e_{i+1}); the last entry is the overflow bin
 * [e_last, inf). Values below the first edge land in the first bin.
 */
std::vector<std::size_t> height_histogram(std::span<const double> heights, std::span<const double> bin_edges_m);
std::vector<std::size_t> height_histogram(std::span<const BallSample> samples, std::span<const double> bin_edges_m);

nlohmann::json to_json(const EvalReport& report, bool include_per_sample = false);
nlohmann::json to_json(const AggregateReport& report);
/// One row per metric: "metric,mean,std".
std::string to_csv(const AggregateReport& report);

}  // namespace courtlift
