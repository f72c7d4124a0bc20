#pragma once

#include "courtlift/camera.hpp"

#include <Eigen/Geometry>

namespace courtlift {

/// Regulation basketball diameter in meters.
inline constexpr double kBasketballDiameter = 0.24;

/// Height of the probe point used to trace the local world vertical in the image.
inline constexpr double kVerticalProbeHeight = 0.1;
/// Below this projected probe displacement (px) the vertical is considered degenerate.
inline constexpr double kDegenerateVerticalPx = 1e-6;
inline constexpr double kFootTolerancePx = 0.01;
inline constexpr int kFootMaxIterations = 5;

/// Predicted image distance (px) between the ball and its ground projection.
struct HeightPrediction
{
    double h = 0.0;
};

struct VerticalDirection
{
    Vec2 direction;  // unit, pointing toward decreasing world Z
    double angle;    // atan2(direction.x, direction.y); 0 when aligned with image +y
};

struct Reconstruction
{
    WorldPoint ball_3d;
    WorldPoint ground_projection;  // Z == 0
    ImagePoint foot_pixel;         // undistorted coordinates
    double vertical_angle = 0.0;
    double plane_gap = 0.0;
};

/*!
 * Image direction of the world vertical at an undistorted pixel.
 *
 * The vertical is traced through the ground point of the pixel's ray, probing
 * kVerticalProbeHeight above it. Pixels whose ray never reaches the ground in
 * front of the camera (balls above camera height) are probed at the ray point of
 * unit camera depth instead; every vertical through a point of the ray images to
 * the same line through the vertical vanishing point.
 */
VerticalDirection vertical_direction(const CameraCalibration& cal, const ImagePoint& ball_px);

/// Undistorted pixel of the ground projection of the ball seen at `ball_px`.
ImagePoint foot_pixel(const CameraCalibration& cal, const ImagePoint& ball_px, HeightPrediction h);

/// Lifts a raw (distorted) ball pixel and a pixel height to court coordinates.
Reconstruction reconstruct_from_height(const CameraCalibration& cal, const ImagePoint& ball_px_raw,
                                       HeightPrediction h);

/// Annotation-style pixel height of a world point: undistorted distance to its ground projection.
HeightPrediction true_pixel_height(const CameraCalibration& cal, const WorldPoint& ball_3d);

/// Diameter-based baseline: depth from apparent size by similar triangles.
Reconstruction reconstruct_from_diameter(const CameraCalibration& cal, const ImagePoint& ball_px_raw,
                                         double diameter_px, double ball_diameter_m = kBasketballDiameter);

/// Apparent diameter (px) of a ball of `ball_diameter_m` centered at `ball_3d`.
double true_diameter_px(const CameraCalibration& cal, const WorldPoint& ball_3d,
                        double ball_diameter_m = kBasketballDiameter);

/*!
 * Similarity transform from original image coordinates to a square crop
 * centered on the ball, rotated so the local world vertical runs along crop +y.
 */
Eigen::Affine2d crop_transform(const CameraCalibration& cal, const ImagePoint& ball_px_raw, double crop_size,
                               double scale);

inline WorldPoint ground_of(const WorldPoint& p) { return {p.x(), p.y(), 0.0}; }

}  // namespace courtlift
