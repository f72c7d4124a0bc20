#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace courtlift {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Pixel coordinates: origin top-left, y down, pixel centers at integers.
using ImagePoint = Vec2;
/// Court frame in meters: ground plane Z = 0, Z up.
using WorldPoint = Vec3;

/// Brown-Conrady coefficients, applied in normalized camera coordinates.
struct Distortion
{
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    bool is_zero() const { return k1 == 0.0 && k2 == 0.0 && k3 == 0.0 && p1 == 0.0 && p2 == 0.0; }
    bool operator==(const Distortion&) const = default;
};

/*!
 * Intrinsics, extrinsics and distortion of one calibrated view.
 *
 * Extrinsics map world to camera coordinates as x_cam = rotation * X + translation.
 */
struct CameraCalibration
{
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    double skew = 0.0;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    Distortion distortion;
    int image_width = 1;
    int image_height = 1;

    Mat3 intrinsics() const;
    /// Same camera with every distortion coefficient set to zero.
    CameraCalibration undistorted() const;

    bool operator==(const CameraCalibration&) const = default;
};

struct Ray
{
    WorldPoint origin;
    Vec3 direction;  // unit length

    WorldPoint point_at(double s) const { return origin + s * direction; }
};

enum class Axis { X = 0, Y = 1, Z = 2 };

struct AxisPlane
{
    Axis axis;
    double value;
};

enum class CalibrationViolation {
    FocalNonPositive,
    ImageSizeNonPositive,
    RotationNotOrthonormal,
    RotationNotProper,
    CameraBelowGround,
    NonFinite,
};

std::string to_string(CalibrationViolation v);

/// Camera-frame depth below which a point counts as behind the camera.
inline constexpr double kDepthEpsilon = 1e-9;
/// Smallest direction component along a plane normal for a valid intersection.
inline constexpr double kParallelEpsilon = 1e-9;
/// Failure threshold of the inverse distortion, in normalized units.
inline constexpr double kUndistortTolerance = 1e-8;
inline constexpr int kUndistortMaxIterations = 50;

/// Full forward model: world -> camera -> normalized -> distorted -> pixels.
ImagePoint project(const CameraCalibration& cal, const WorldPoint& p);

/// Forward model ignoring the distortion coefficients.
ImagePoint project_undistorted(const CameraCalibration& cal, const WorldPoint& p);

/// Camera-frame depth of a world point (z component of R*X + t).
double camera_depth(const CameraCalibration& cal, const WorldPoint& p);

Vec2 distort(const Distortion& d, const Vec2& n);
inline Vec2 distort(const CameraCalibration& cal, const Vec2& n) { return distort(cal.distortion, n); }

/// Pixel -> normalized coordinates (inverse of the intrinsic matrix).
Vec2 normalize(const CameraCalibration& cal, const ImagePoint& p);
/// Normalized coordinates -> pixel.
ImagePoint denormalize(const CameraCalibration& cal, const Vec2& n);

/// Inverse of `distort` in normalized coordinates.
Vec2 undistort_normalized(const Distortion& d, const Vec2& target);

/// Maps a raw (distorted) pixel to where the distortion-free camera would image it.
ImagePoint undistort_point(const CameraCalibration& cal, const ImagePoint& p);

/// Ray of world points imaged at the undistorted pixel p.
Ray back_project(const CameraCalibration& cal, const ImagePoint& p);

WorldPoint intersect_ray_plane(const Ray& r, const AxisPlane& plane);

WorldPoint camera_center(const CameraCalibration& cal);

/// Calibration of the same view after resizing the image by `s`.
CameraCalibration scale_calibration(const CameraCalibration& cal, double s);

/// Hard invariant violations; empty when the calibration is usable.
std::vector<CalibrationViolation> validate(const CameraCalibration& cal);

/// Soft checks for arena cameras: currently only a camera center at or below the floor.
std::vector<CalibrationViolation> validation_warnings(const CameraCalibration& cal);

/*!
 * Camera at `center` whose optical axis passes through `target`, with image
 * "up" aligned to `up` (world +Z by default). Rows of the rotation are the
 * camera right, down and forward axes expressed in world coordinates.
 */
CameraCalibration look_at(const WorldPoint& center, const WorldPoint& target, double focal, double cx,
                          double cy, int width, int height, const Vec3& up = Vec3::UnitZ());

}  // namespace courtlift
