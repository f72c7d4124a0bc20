#include "courtlift/errors.hpp"
#include "courtlift/metrics.hpp"
#include "courtlift/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace courtlift;

namespace {

ErrorCode code_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    FAIL("expected a courtlift::Error");
    return ErrorCode::IoFailure;
}

std::vector<SampleError> errors_from(const std::vector<double>& proj)
{
    std::vector<SampleError> out;
    for (double p : proj)
        out.push_back({0.5 * p, p, 2.0 * p});
    return out;
}

EvalReport report_with_mape(double mape)
{
    EvalReport r;
    r.mape_m = mape;
    r.n_samples = 10;
    return r;
}

}  // namespace

TEST_CASE("one outlier pulls the mean far above the median")
{
    const EvalReport r = summarize(errors_from({1, 1, 1, 10}));
    CHECK(r.mape_m == 3.25);
    CHECK(r.mdnape_m == 1.0);
    CHECK(r.ma3de_m == 6.5);
    CHECK(r.mdna3de_m == 2.0);
    CHECK(*r.mae_px == 1.625);
    CHECK(r.n_samples == 4);
}

TEST_CASE("median of an even count is the midpoint")
{
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(median_of(v) == 2.5);
    const std::vector<double> odd{5.0, 1.0, 3.0};
    CHECK(median_of(odd) == 3.0);
    CHECK(mean_of(v) == 2.5);
    CHECK(code_of([] { median_of(std::vector<double>{}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("evaluate computes ground and 3D distances")
{
    BallSample s;
    s.ball_3d = {1.0, 2.0, 1.5};
    s.h_true = 80.0;
    Reconstruction r;
    r.ball_3d = {4.0, 6.0, 1.5};
    r.ground_projection = {4.0, 6.0, 0.0};
    const std::vector<BallSample> samples{s};
    const std::vector<Reconstruction> recons{r};
    const std::vector<HeightPrediction> preds{{70.0}};

    const EvalReport e = evaluate(samples, recons, preds);
    CHECK(*e.mae_px == 10.0);
    CHECK(e.mape_m == 5.0);
    CHECK(e.ma3de_m == 5.0);

    const EvalReport d = evaluate(samples, recons);
    CHECK(!d.mae_px);
    CHECK(d.mape_m == 5.0);

    CHECK(code_of([&] { evaluate(samples, std::vector<Reconstruction>{}, preds); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { evaluate(samples, recons, std::vector<HeightPrediction>{}); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { evaluate(std::vector<BallSample>{}, std::vector<Reconstruction>{}); }) ==
          ErrorCode::EmptyInput);
}

TEST_CASE("aggregate_repeats: mean and sample standard deviation")
{
    SUBCASE("k = 1")
    {
        const std::vector<EvalReport> one{report_with_mape(1.7)};
        const AggregateReport a = aggregate_repeats(one);
        CHECK(a.k == 1);
        CHECK(a.mape_m.mean == 1.7);
        CHECK(a.mape_m.stddev == 0.0);
    }
    SUBCASE("identical repeats")
    {
        // 0.1 is not dyadic: a plain running sum of eight copies is not 0.8 exactly
        const std::vector<EvalReport> same(8, report_with_mape(0.1));
        const AggregateReport a = aggregate_repeats(same);
        CHECK(a.k == 8);
        CHECK(a.mape_m.mean == 0.1);
        CHECK(a.mape_m.stddev == 0.0);
    }
    SUBCASE("two repeats")
    {
        const std::vector<EvalReport> two{report_with_mape(1.0), report_with_mape(2.0)};
        const AggregateReport a = aggregate_repeats(two);
        CHECK(a.mape_m.mean == 1.5);
        CHECK(a.mape_m.stddev == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
    SUBCASE("errors")
    {
        CHECK(code_of([] { aggregate_repeats(std::vector<EvalReport>{}); }) == ErrorCode::EmptyInput);
        EvalReport small = report_with_mape(1.0);
        small.n_samples = 3;
        const std::vector<EvalReport> mixed{report_with_mape(1.0), small};
        CHECK(code_of([&] { aggregate_repeats(mixed); }) == ErrorCode::LengthMismatch);
    }
}

TEST_CASE("height_histogram")
{
    const std::vector<double> edges{0, 1, 2, 3};
    const std::vector<double> ground(5, 0.0);
    CHECK(height_histogram(ground, edges) == std::vector<std::size_t>{5, 0, 0, 0});

    const std::vector<double> mixed{0.5, 1.0, 2.9, 3.0, 7.0, -0.1};
    CHECK(height_histogram(mixed, edges) == std::vector<std::size_t>{2, 1, 1, 2});

    CHECK(code_of([&] { height_histogram(mixed, std::vector<double>{}); }) == ErrorCode::BadBins);
    CHECK(code_of([&] { height_histogram(mixed, std::vector<double>{0, 2, 2}); }) == ErrorCode::BadBins);
    CHECK(code_of([&] { height_histogram(mixed, std::vector<double>{0, 3, 1}); }) == ErrorCode::BadBins);
}

TEST_CASE("DeepSport-like heights: about 60 of 801 above 3 m")
{
    const auto samples = generate_dataset(2024, 100000, ArenaSpec{}, HeightDistSpec::deepsport_like(), 20);
    const std::vector<double> edges{0.0, 3.0};
    const auto counts = height_histogram(samples, edges);
    CHECK(counts[0] + counts[1] == samples.size());
    const double above = static_cast<double>(counts[1]) / static_cast<double>(samples.size());
    CHECK(std::abs(above - 60.0 / 801.0) < 0.02);
}

TEST_CASE("metrics are invariant to sample order")
{
    std::mt19937_64 gen(8);
    std::lognormal_distribution<double> d(0.0, 1.5);
    std::vector<double> proj(1001);
    for (auto& p : proj)
        p = d(gen);
    const EvalReport ref = summarize(errors_from(proj));
    for (int i = 0; i < 10; ++i)
    {
        std::shuffle(proj.begin(), proj.end(), gen);
        const EvalReport r = summarize(errors_from(proj));
        REQUIRE(r.mape_m == ref.mape_m);
        REQUIRE(r.mdnape_m == ref.mdnape_m);
        REQUIRE(r.ma3de_m == ref.ma3de_m);
        REQUIRE(*r.mae_px == *ref.mae_px);
    }
}

TEST_CASE("doubling every error doubles every metric")
{
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<double> proj(500);
    for (auto& p : proj)
        p = u(gen);
    std::vector<double> doubled = proj;
    for (auto& p : doubled)
        p *= 2.0;
    const EvalReport a = summarize(errors_from(proj));
    const EvalReport b = summarize(errors_from(doubled));
    CHECK(b.mape_m == doctest::Approx(2.0 * a.mape_m).epsilon(1e-14));
    CHECK(b.mdnape_m == doctest::Approx(2.0 * a.mdnape_m).epsilon(1e-14));
    CHECK(b.ma3de_m == doctest::Approx(2.0 * a.ma3de_m).epsilon(1e-14));
    CHECK(b.mdna3de_m == doctest::Approx(2.0 * a.mdna3de_m).epsilon(1e-14));
    CHECK(*b.mae_px == doctest::Approx(2.0 * *a.mae_px).epsilon(1e-14));
}

TEST_CASE("the median resists a single outlier")
{
    std::vector<double> proj(101);
    for (std::size_t i = 0; i < proj.size(); ++i)
        proj[i] = 0.1 * static_cast<double>(i);
    const EvalReport before = summarize(errors_from(proj));
    const double n = static_cast<double>(proj.size());

    for (std::size_t k : {std::size_t{0}, std::size_t{50}, std::size_t{100}})
    {
        std::vector<double> changed = proj;
        changed[k] *= 10.0;
        const EvalReport after = summarize(errors_from(changed));
        CHECK(after.mape_m - before.mape_m == doctest::Approx(9.0 * proj[k] / n).epsilon(1e-12));
        // adjacent order statistics around the median are 0.1 apart
        CHECK(std::abs(after.mdnape_m - before.mdnape_m) <= 0.1 + 1e-12);
    }
}

TEST_CASE("report serialization")
{
    const std::vector<EvalReport> two{report_with_mape(1.0), report_with_mape(2.0)};
    const AggregateReport a = aggregate_repeats(two);
    const auto j = to_json(a);
    CHECK(j["mape_m"]["mean"] == 1.5);
    CHECK(j["mape_m"].contains("std"));
    CHECK(j["k"] == 2);
    CHECK(j["mae_px"].is_null());

    const std::string csv = to_csv(a);
    CHECK(csv.rfind("metric,mean,std\n", 0) == 0);
    CHECK(csv.find("mape_m,1.5,0.7071067811865476\n") != std::string::npos);
    CHECK(csv.find("mae_px,,\n") != std::string::npos);

    const EvalReport e = summarize(errors_from({1, 2}));
    CHECK(to_json(e, true)["per_sample_errors"].size() == 2);
    CHECK(!to_json(e).contains("per_sample_errors"));
}
