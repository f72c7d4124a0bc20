#include "courtlift/metrics.hpp"

#include "courtlift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace courtlift {

namespace {

double pairwise(std::span<const double> v)
{
    if (v.size() <= 8)
    {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

MetricStat stat_of(const std::vector<double>& values)
{
    MetricStat out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi)
        return {*lo, 0.0};  // summation rounding must not invent spread
    out.mean = mean_of(values);
    if (values.size() > 1)
    {
        std::vector<double> sq;
        sq.reserve(values.size());
        for (double v : values)
            sq.push_back((v - out.mean) * (v - out.mean));
        out.stddev = std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(values.size() - 1));
    }
    return out;
}

void check_lengths(std::size_t samples, std::size_t recons)
{
    if (samples == 0)
        throw Error(ErrorCode::EmptyInput, "no samples to evaluate");
    if (samples != recons)
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(samples) + " samples vs " + std::to_string(recons) + " reconstructions");
}

SampleError geometric_error(const BallSample& s, const Reconstruction& r)
{
    SampleError e;
    e.h_err_px = std::numeric_limits<double>::quiet_NaN();
    e.proj_err_m = (r.ground_projection.head<2>() - s.ball_3d.head<2>()).norm();
    e.err3d_m = (r.ball_3d - s.ball_3d).norm();
    return e;
}

nlohmann::json stat_json(const MetricStat& s)
{
    return {{"mean", s.mean}, {"std", s.stddev}};
}

}  // namespace

double stable_sum(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    return pairwise(values);
}

double mean_of(std::span<const double> values)
{
    if (values.empty())
        throw Error(ErrorCode::EmptyInput, "mean of empty set");
    return stable_sum({values.begin(), values.end()}) / static_cast<double>(values.size());
}

double median_of(std::span<const double> values)
{
    if (values.empty())
        throw Error(ErrorCode::EmptyInput, "median of empty set");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EvalReport summarize(std::vector<SampleError> errors)
{
    if (errors.empty())
        throw Error(ErrorCode::EmptyInput, "no per-sample errors");

    std::vector<double> h, proj, e3d;
    proj.reserve(errors.size());
    e3d.reserve(errors.size());
    for (const auto& e : errors)
    {
        if (!std::isnan(e.h_err_px))
            h.push_back(std::abs(e.h_err_px));
        proj.push_back(e.proj_err_m);
        e3d.push_back(e.err3d_m);
    }

    EvalReport out;
    if (!h.empty())
        out.mae_px = mean_of(h);
    out.mape_m = mean_of(proj);
    out.mdnape_m = median_of(proj);
    out.ma3de_m = mean_of(e3d);
    out.mdna3de_m = median_of(e3d);
    out.n_samples = errors.size();
    out.per_sample_errors = std::move(errors);
    return out;
}

EvalReport evaluate(std::span<const BallSample> samples, std::span<const Reconstruction> reconstructions,
                    std::span<const HeightPrediction> predictions)
{
    check_lengths(samples.size(), reconstructions.size());
    if (predictions.size() != samples.size())
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(samples.size()) + " samples vs " + std::to_string(predictions.size()) +
                        " predictions");
    std::vector<SampleError> errors;
    errors.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        if (!std::isfinite(samples[i].h_true))
            throw Error(ErrorCode::MissingGroundTruth, "sample " + std::to_string(samples[i].sample_id));
        SampleError e = geometric_error(samples[i], reconstructions[i]);
        e.h_err_px = predictions[i].h - samples[i].h_true;
        errors.push_back(e);
    }
    return summarize(std::move(errors));
}

EvalReport evaluate(std::span<const BallSample> samples, std::span<const Reconstruction> reconstructions)
{
    check_lengths(samples.size(), reconstructions.size());
    std::vector<SampleError> errors;
    errors.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        errors.push_back(geometric_error(samples[i], reconstructions[i]));
    return summarize(std::move(errors));
}

AggregateReport aggregate_repeats(std::span<const EvalReport> reports)
{
    if (reports.empty())
        throw Error(ErrorCode::EmptyInput, "no reports to aggregate");

    AggregateReport out;
    std::vector<double> mae, mape, mdnape, ma3de, mdna3de;
    for (const auto& r : reports)
    {
        if (r.n_samples + r.n_failed != reports.front().n_samples + reports.front().n_failed)
            throw Error(ErrorCode::LengthMismatch, "repeats evaluated on different sample sets");
        out.n_failed += r.n_failed;
        if (r.mae_px)
            mae.push_back(*r.mae_px);
        mape.push_back(r.mape_m);
        mdnape.push_back(r.mdnape_m);
        ma3de.push_back(r.ma3de_m);
        mdna3de.push_back(r.mdna3de_m);
    }
    if (!mae.empty() && mae.size() != reports.size())
        throw Error(ErrorCode::LengthMismatch, "MAE present in only some repeats");

    if (!mae.empty())
        out.mae_px = stat_of(mae);
    out.mape_m = stat_of(mape);
    out.mdnape_m = stat_of(mdnape);
    out.ma3de_m = stat_of(ma3de);
    out.mdna3de_m = stat_of(mdna3de);
    out.n_samples = reports.front().n_samples;
    out.k = reports.size();
    return out;
}

std::vector<std::size_t> height_histogram(std::span<const double> heights, std::span<const double> bin_edges_m)
{
    if (bin_edges_m.empty())
        throw Error(ErrorCode::BadBins, "no bin edges");
    for (std::size_t i = 1; i < bin_edges_m.size(); ++i)
        if (!(bin_edges_m[i] > bin_edges_m[i - 1]))
            throw Error(ErrorCode::BadBins, "bin edges must be strictly increasing");

    std::vector<std::size_t> counts(bin_edges_m.size(), 0);
    for (double z : heights)
    {
        const auto it = std::upper_bound(bin_edges_m.begin(), bin_edges_m.end(), z);
        const std::size_t bin = it == bin_edges_m.begin() ? 0 : static_cast<std::size_t>(it - bin_edges_m.begin()) - 1;
        ++counts[bin];
    }
    return counts;
}

std::vector<std::size_t> height_histogram(std::span<const BallSample> samples, std::span<const double> bin_edges_m)
{
    std::vector<double> z;
    z.reserve(samples.size());
    for (const auto& s : samples)
        z.push_back(s.ball_3d.z());
    return height_histogram(z, bin_edges_m);
}

nlohmann::json to_json(const EvalReport& report, bool include_per_sample)
{
    nlohmann::json j;
    j["mae_px"] = report.mae_px ? nlohmann::json(*report.mae_px) : nlohmann::json(nullptr);
    j["mape_m"] = report.mape_m;
    j["mdnape_m"] = report.mdnape_m;
    j["ma3de_m"] = report.ma3de_m;
    j["mdna3de_m"] = report.mdna3de_m;
    j["n_samples"] = report.n_samples;
    j["n_failed"] = report.n_failed;
    if (include_per_sample)
    {
        auto& rows = j["per_sample_errors"] = nlohmann::json::array();
        for (const auto& e : report.per_sample_errors)
            rows.push_back({std::isnan(e.h_err_px) ? nlohmann::json(nullptr) : nlohmann::json(e.h_err_px),
                            e.proj_err_m, e.err3d_m});
    }
    return j;
}

nlohmann::json to_json(const AggregateReport& report)
{
    nlohmann::json j;
    j["mae_px"] = report.mae_px ? stat_json(*report.mae_px) : nlohmann::json(nullptr);
    j["mape_m"] = stat_json(report.mape_m);
    j["mdnape_m"] = stat_json(report.mdnape_m);
    j["ma3de_m"] = stat_json(report.ma3de_m);
    j["mdna3de_m"] = stat_json(report.mdna3de_m);
    j["n_samples"] = report.n_samples;
    j["n_failed"] = report.n_failed;
    j["k"] = report.k;
    return j;
}

std::string to_csv(const AggregateReport& report)
{
    std::string out = "metric,mean,std\n";
    const auto row = [&out](const char* name, const MetricStat& s) {
        out += fmt::format("{},{},{}\n", name, s.mean, s.stddev);
    };
    if (report.mae_px)
        row("mae_px", *report.mae_px);
    else
        out += "mae_px,,\n";
    row("mape_m", report.mape_m);
    row("mdnape_m", report.mdnape_m);
    row("ma3de_m", report.ma3de_m);
    row("mdna3de_m", report.mdna3de_m);
    return out;
}

}  // namespace courtlift
