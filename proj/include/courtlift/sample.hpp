#pragma once

#include "courtlift/camera.hpp"

#include <cstdint>
#include <limits>

namespace courtlift {

/// One annotated ball instance. Pixel fields are raw (distorted) image coordinates.
struct BallSample
{
    std::uint64_t sample_id = 0;
    int arena_id = 0;
    CameraCalibration cal;
    WorldPoint ball_3d = WorldPoint::Zero();
    ImagePoint ball_px = ImagePoint::Zero();
    ImagePoint foot_px = ImagePoint::Zero();
    /// NaN when the annotation is absent.
    double h_true = std::numeric_limits<double>::quiet_NaN();
    double diameter_px_true = std::numeric_limits<double>::quiet_NaN();

    bool operator==(const BallSample&) const = default;
};

}  // namespace courtlift
