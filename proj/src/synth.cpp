#include "courtlift/synth.hpp"

#include "courtlift/errors.hpp"
#include "courtlift/parallel.hpp"
#include "courtlift/reconstruct.hpp"

#include <cmath>
#include <numbers>

namespace courtlift {

namespace {

constexpr int kMaxCameraAttempts = 1000;

bool range_ok(const Range& r)
{
    return std::isfinite(r.min) && std::isfinite(r.max) && r.valid();
}

// Accepts a ball only if every oracle used downstream is well defined for it.
bool usable_ball(const CameraCalibration& cal, const WorldPoint& ball)
{
    if (!(camera_depth(cal, ball) > kDepthEpsilon) || !(camera_depth(cal, ground_of(ball)) > kDepthEpsilon))
        return false;
    const ImagePoint px = project(cal, ball);
    if (!in_image(cal, px))
        return false;
    try
    {
        const ImagePoint ideal = project_undistorted(cal, ball);
        if (!((undistort_point(cal, px) - ideal).norm() < 1e-6))
            return false;
        vertical_direction(cal, ideal);
    }
    catch (const Error&)
    {
        return false;
    }
    return true;
}

}  // namespace

void validate(const ArenaSpec& a)
{
    if (!(a.court_half_length > 0.0 && a.court_half_width > 0.0))
        throw Error(ErrorCode::InvalidSpec, "court dimensions must be positive");
    if (!(a.image_width > 0 && a.image_height > 0))
        throw Error(ErrorCode::InvalidSpec, "image size must be positive");
    for (const Range* r : {&a.camera_height, &a.camera_distance, &a.look_at_height, &a.focal, &a.skew, &a.k1, &a.k2})
        if (!range_ok(*r))
            throw Error(ErrorCode::InvalidSpec, "range with min > max");
    if (!(a.camera_height.min > 0.0))
        throw Error(ErrorCode::InvalidSpec, "cameras must be above the floor");
    if (!(a.focal.min > 0.0))
        throw Error(ErrorCode::InvalidSpec, "focal length must be positive");
}

void validate(const HeightDistSpec& d)
{
    if (!(d.p_above_3m >= 0.0 && d.p_above_3m <= 1.0))
        throw Error(ErrorCode::InvalidSpec, "p_above_3m must lie in [0, 1]");
    if (!(d.max_height > kHighBallThreshold))
        throw Error(ErrorCode::InvalidSpec, "max_height must exceed 3 m");
}

bool distortion_invertible_over_image(const CameraCalibration& cal, double min_slope)
{
    const Distortion& d = cal.distortion;
    if (d.k1 == 0.0 && d.k2 == 0.0 && d.k3 == 0.0)
        return true;

    const double w = cal.image_width - 1.0, h = cal.image_height - 1.0;
    double reach = 0.0;
    for (const ImagePoint& corner : {ImagePoint(0, 0), ImagePoint(w, 0), ImagePoint(0, h), ImagePoint(w, h)})
        reach = std::max(reach, normalize(cal, corner).norm());
    reach *= 1.05;

    // r * radial(r^2) must climb past the corner radius with slope >= min_slope
    constexpr double kStep = 1e-3;
    for (double r = 0.0; r < 10.0; r += kStep)
    {
        const double r2 = r * r;
        const double radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
        const double slope = radial + 2.0 * r2 * (d.k1 + r2 * (2.0 * d.k2 + 3.0 * d.k3 * r2));
        if (slope < min_slope)
            return false;
        if (r * radial >= reach)
            return true;
    }
    return false;
}

bool in_image(const CameraCalibration& cal, const ImagePoint& p)
{
    return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= cal.image_width - 1.0 && p.y() <= cal.image_height - 1.0;
}

CameraCalibration sample_camera(RandomStream& rng, const ArenaSpec& arena)
{
    validate(arena);
    const double cx = 0.5 * (arena.image_width - 1.0);
    const double cy = 0.5 * (arena.image_height - 1.0);

    for (int attempt = 0; attempt < kMaxCameraAttempts; ++attempt)
    {
        const double distance = arena.camera_distance.draw(rng);
        const double height = arena.camera_height.draw(rng);
        const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const WorldPoint center(distance * std::cos(azimuth), distance * std::sin(azimuth), height);
        const WorldPoint target(rng.uniform(-arena.court_half_length, arena.court_half_length),
                                rng.uniform(-arena.court_half_width, arena.court_half_width),
                                arena.look_at_height.draw(rng));
        const double focal = arena.focal.draw(rng);

        CameraCalibration cal =
            look_at(center, target, focal, cx, cy, arena.image_width, arena.image_height);
        cal.skew = arena.skew.draw(rng);
        cal.distortion.k1 = arena.k1.draw(rng);
        cal.distortion.k2 = arena.k2.draw(rng);

        if (!validate(cal).empty() || !validation_warnings(cal).empty() || !distortion_invertible_over_image(cal))
            continue;
        const WorldPoint court_center = WorldPoint::Zero();
        if (!(camera_depth(cal, court_center) > kDepthEpsilon) || !in_image(cal, project(cal, court_center)))
            continue;
        return cal;
    }
    throw Error(ErrorCode::InvalidSpec, "no camera satisfying the arena spec after " +
                                            std::to_string(kMaxCameraAttempts) + " attempts");
}

WorldPoint sample_ball(RandomStream& rng, const ArenaSpec& arena, const HeightDistSpec& dist)
{
    const double x = rng.uniform(-arena.court_half_length, arena.court_half_length);
    const double y = rng.uniform(-arena.court_half_width, arena.court_half_width);
    double z;
    if (dist.kind == HeightDistKind::Uniform)
    {
        z = rng.uniform(0.0, dist.max_height);
    }
    else if (rng.uniform() < dist.p_above_3m)
    {
        z = rng.uniform(kHighBallThreshold, dist.max_height);
    }
    else
    {
        // inverse CDF of Exp(mean 1.2 m) truncated to [0, 3)
        const double mass = -std::expm1(-kHighBallThreshold / kLowBallMean);
        z = -kLowBallMean * std::log1p(-rng.uniform() * mass);
    }
    return {x, y, z};
}

BallSample make_sample(std::uint64_t id, int arena_id, const CameraCalibration& cal, const WorldPoint& ball_3d)
{
    BallSample s;
    s.sample_id = id;
    s.arena_id = arena_id;
    s.cal = cal;
    s.ball_3d = ball_3d;
    s.ball_px = project(cal, ball_3d);
    s.foot_px = project(cal, ground_of(ball_3d));
    s.h_true = true_pixel_height(cal, ball_3d).h;
    s.diameter_px_true = true_diameter_px(cal, ball_3d);
    return s;
}

std::vector<BallSample> generate_dataset(std::uint64_t seed, std::size_t n, const ArenaSpec& arena,
                                         const HeightDistSpec& dist, int n_arenas, unsigned threads)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidSpec, "dataset size must be >= 1");
    if (n_arenas < 1)
        throw Error(ErrorCode::InvalidSpec, "need at least one arena");
    validate(arena);
    validate(dist);

    std::vector<CameraCalibration> cameras;
    cameras.reserve(static_cast<std::size_t>(n_arenas));
    for (int a = 0; a < n_arenas; ++a)
    {
        RandomStream rng(seed, StreamTag::Camera, static_cast<std::uint64_t>(a));
        cameras.push_back(sample_camera(rng, arena));
    }

    std::vector<BallSample> samples(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const int arena_id = static_cast<int>(i % static_cast<std::size_t>(n_arenas));
        const CameraCalibration& cal = cameras[static_cast<std::size_t>(arena_id)];
        RandomStream rng(seed, StreamTag::Ball, i);
        for (int attempt = 0; attempt < kMaxBallRetries; ++attempt)
        {
            const WorldPoint ball = sample_ball(rng, arena, dist);
            if (usable_ball(cal, ball))
            {
                samples[i] = make_sample(i, arena_id, cal, ball);
                return;
            }
        }
        throw Error(ErrorCode::FrameCoverageFailure,
                    "sample " + std::to_string(i) + ": no in-frame ball after " + std::to_string(kMaxBallRetries) +
                        " draws");
    });
    return samples;
}

}  // namespace courtlift
