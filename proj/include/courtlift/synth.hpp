#pragma once

#include "courtlift/camera.hpp"
#include "courtlift/random.hpp"
#include "courtlift/sample.hpp"

#include <cstdint>
#include <vector>

namespace courtlift {

struct Range
{
    double min = 0.0;
    double max = 0.0;

    double draw(RandomStream& rng) const { return min == max ? min : rng.uniform(min, max); }
    bool valid() const { return min <= max; }
};

/// Geometry of a synthetic arena and the cameras filming it. Lengths in meters.
struct ArenaSpec
{
    double court_half_length = 14.0;
    double court_half_width = 7.5;
    Range camera_height{3.0, 8.0};
    Range camera_distance{15.0, 30.0};  // horizontal distance from court center
    Range look_at_height{1.0, 2.0};
    Range focal{1500.0, 3000.0};        // px
    Range skew{0.0, 0.0};               // px
    Range k1{0.0, 0.0};
    Range k2{0.0, 0.0};
    int image_width = 4500;
    int image_height = 1500;
};

enum class HeightDistKind { DeepSportLike, BallisticLike, Uniform };

struct HeightDistSpec
{
    HeightDistKind kind = HeightDistKind::DeepSportLike;
    double p_above_3m = 60.0 / 801.0;
    double max_height = 6.0;

    static HeightDistSpec deepsport_like() { return {HeightDistKind::DeepSportLike, 60.0 / 801.0, 6.0}; }
    static HeightDistSpec ballistic_like() { return {HeightDistKind::BallisticLike, 102.0 / 233.0, 6.0}; }
    static HeightDistSpec uniform(double max_height = 6.0) { return {HeightDistKind::Uniform, 0.0, max_height}; }
};

/// Mean of the exponential law used below 3 m (before truncation).
inline constexpr double kLowBallMean = 1.2;
inline constexpr double kHighBallThreshold = 3.0;
inline constexpr int kMaxBallRetries = 100;

/// Throws InvalidSpec on empty ranges or nonpositive dimensions.
void validate(const ArenaSpec& arena);
void validate(const HeightDistSpec& dist);

/*!
 * True when the radial distortion stays strictly increasing (slope above
 * `min_slope`) out to the farthest image corner, so every in-frame pixel has
 * a unique undistorted preimage.
 */
bool distortion_invertible_over_image(const CameraCalibration& cal, double min_slope = 0.2);

/// Camera on a ring around the court, looking at a point above the court floor.
CameraCalibration sample_camera(RandomStream& rng, const ArenaSpec& arena);

WorldPoint sample_ball(RandomStream& rng, const ArenaSpec& arena, const HeightDistSpec& dist);

bool in_image(const CameraCalibration& cal, const ImagePoint& p);

/// Fully annotated sample for ball `ball_3d` seen by `cal`.
BallSample make_sample(std::uint64_t id, int arena_id, const CameraCalibration& cal, const WorldPoint& ball_3d);

/*!
 * n samples spread round-robin over n_arenas cameras. Each sample draws from
 * its own substream, so the output does not depend on `threads`.
 */
std::vector<BallSample> generate_dataset(std::uint64_t seed, std::size_t n, const ArenaSpec& arena,
                                         const HeightDistSpec& dist, int n_arenas, unsigned threads = 1);

}  // namespace courtlift
