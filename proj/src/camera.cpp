#include "courtlift/camera.hpp"

#include "courtlift/errors.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace courtlift {

namespace {

Vec3 to_camera(const CameraCalibration& cal, const WorldPoint& p)
{
    return cal.rotation * p + cal.translation;
}

Vec2 perspective_divide(const Vec3& xc)
{
    if (!(xc.z() > kDepthEpsilon))
        throw Error(ErrorCode::DepthNonPositive, "camera-frame depth " + std::to_string(xc.z()));
    return {xc.x() / xc.z(), xc.y() / xc.z()};
}

double radial_scale(const Distortion& d, double r2)
{
    return 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
}

Eigen::Matrix2d distort_jacobian(const Distortion& d, const Vec2& n)
{
    const double x = n.x(), y = n.y();
    const double r2 = x * x + y * y;
    const double rad = radial_scale(d, r2);
    const double g = d.k1 + r2 * (2.0 * d.k2 + 3.0 * d.k3 * r2);  // d(rad)/d(r2)
    const double cross = 2.0 * x * y * g + 2.0 * d.p1 * x + 2.0 * d.p2 * y;
    Eigen::Matrix2d J;
    J << rad + 2.0 * x * x * g + 2.0 * d.p1 * y + 6.0 * d.p2 * x, cross,
        cross, rad + 2.0 * y * y * g + 6.0 * d.p1 * y + 2.0 * d.p2 * x;
    return J;
}

}  // namespace

std::string to_string(CalibrationViolation v)
{
    switch (v)
    {
        case CalibrationViolation::FocalNonPositive: return "FocalNonPositive";
        case CalibrationViolation::ImageSizeNonPositive: return "ImageSizeNonPositive";
        case CalibrationViolation::RotationNotOrthonormal: return "RotationNotOrthonormal";
        case CalibrationViolation::RotationNotProper: return "RotationNotProper";
        case CalibrationViolation::CameraBelowGround: return "CameraBelowGround";
        case CalibrationViolation::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

Mat3 CameraCalibration::intrinsics() const
{
    Mat3 K;
    K << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return K;
}

CameraCalibration CameraCalibration::undistorted() const
{
    CameraCalibration out = *this;
    out.distortion = Distortion{};
    return out;
}

double camera_depth(const CameraCalibration& cal, const WorldPoint& p)
{
    return cal.rotation.row(2).dot(p) + cal.translation.z();
}

Vec2 distort(const Distortion& d, const Vec2& n)
{
    const double x = n.x(), y = n.y();
    const double r2 = x * x + y * y;
    const double rad = radial_scale(d, r2);
    return {x * rad + 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
            y * rad + d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y};
}

Vec2 normalize(const CameraCalibration& cal, const ImagePoint& p)
{
    const double ny = (p.y() - cal.cy) / cal.fy;
    const double nx = (p.x() - cal.cx - cal.skew * ny) / cal.fx;
    return {nx, ny};
}

ImagePoint denormalize(const CameraCalibration& cal, const Vec2& n)
{
    return {cal.fx * n.x() + cal.skew * n.y() + cal.cx, cal.fy * n.y() + cal.cy};
}

ImagePoint project(const CameraCalibration& cal, const WorldPoint& p)
{
    return denormalize(cal, distort(cal.distortion, perspective_divide(to_camera(cal, p))));
}

ImagePoint project_undistorted(const CameraCalibration& cal, const WorldPoint& p)
{
    return denormalize(cal, perspective_divide(to_camera(cal, p)));
}

Vec2 undistort_normalized(const Distortion& d, const Vec2& target)
{
    if (d.is_zero())
        return target;

    // One fixed-point step x = (target - tangential(x)) / radial(x) from x = target
    // seeds the iteration; Newton steps on distort(x) - target then converge
    // quadratically, including the strong-distortion corners where the plain
    // fixed-point map contracts too slowly.
    const auto tangential = [&d](const Vec2& x) -> Vec2 { return distort(d, x) - radial_scale(d, x.squaredNorm()) * x; };
    Vec2 x = (target - tangential(target)) / radial_scale(d, target.squaredNorm());

    double residual = (distort(d, x) - target).norm();
    for (int it = 0; it < kUndistortMaxIterations && residual > 1e-15; ++it)
    {
        const Vec2 step = distort_jacobian(d, x).partialPivLu().solve(distort(d, x) - target);
        if (!step.allFinite())
            break;
        Vec2 candidate = x - step;
        double cand_residual = (distort(d, candidate) - target).norm();
        for (int halving = 0; halving < 30 && !(cand_residual < residual); ++halving)
        {
            candidate = 0.5 * (candidate + x);
            cand_residual = (distort(d, candidate) - target).norm();
        }
        if (!(cand_residual < residual))
            break;
        x = candidate;
        residual = cand_residual;
    }
    if (!(residual <= kUndistortTolerance))
        throw Error(ErrorCode::NoConvergence, "undistortion residual " + std::to_string(residual));
    return x;
}

ImagePoint undistort_point(const CameraCalibration& cal, const ImagePoint& p)
{
    if (cal.distortion.is_zero())
        return p;
    return denormalize(cal, undistort_normalized(cal.distortion, normalize(cal, p)));
}

WorldPoint camera_center(const CameraCalibration& cal)
{
    return -cal.rotation.transpose() * cal.translation;
}

Ray back_project(const CameraCalibration& cal, const ImagePoint& p)
{
    const Vec2 n = normalize(cal, p);
    const Vec3 dir = cal.rotation.transpose() * Vec3(n.x(), n.y(), 1.0);
    return {camera_center(cal), dir.normalized()};
}

WorldPoint intersect_ray_plane(const Ray& r, const AxisPlane& plane)
{
    const int a = static_cast<int>(plane.axis);
    const double denom = r.direction[a];
    if (!(std::abs(denom) > kParallelEpsilon))
        throw Error(ErrorCode::RayParallelToPlane, "");
    const double s = (plane.value - r.origin[a]) / denom;
    if (s < 0.0)
        throw Error(ErrorCode::IntersectionBehindCamera, "ray parameter " + std::to_string(s));
    WorldPoint out = r.point_at(s);
    out[a] = plane.value;  // exact on the plane, free of rounding in s
    return out;
}

CameraCalibration scale_calibration(const CameraCalibration& cal, double s)
{
    if (!(s > 0.0))
        throw Error(ErrorCode::NonPositiveScale, std::to_string(s));
    CameraCalibration out = cal;
    out.fx *= s;
    out.fy *= s;
    out.cx *= s;
    out.cy *= s;
    out.skew *= s;
    out.image_width = static_cast<int>(std::lround(cal.image_width * s));
    out.image_height = static_cast<int>(std::lround(cal.image_height * s));
    return out;
}

std::vector<CalibrationViolation> validate(const CameraCalibration& cal)
{
    std::vector<CalibrationViolation> out;
    const auto& d = cal.distortion;
    const bool finite = std::isfinite(cal.fx) && std::isfinite(cal.fy) && std::isfinite(cal.cx) &&
                        std::isfinite(cal.cy) && std::isfinite(cal.skew) && cal.rotation.allFinite() &&
                        cal.translation.allFinite() && std::isfinite(d.k1) && std::isfinite(d.k2) &&
                        std::isfinite(d.k3) && std::isfinite(d.p1) && std::isfinite(d.p2);
    if (!finite)
    {
        out.push_back(CalibrationViolation::NonFinite);
        return out;
    }
    if (!(cal.fx > 0.0 && cal.fy > 0.0))
        out.push_back(CalibrationViolation::FocalNonPositive);
    if (!(cal.image_width > 0 && cal.image_height > 0))
        out.push_back(CalibrationViolation::ImageSizeNonPositive);
    const double ortho_err = (cal.rotation.transpose() * cal.rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho_err < 1e-9))
        out.push_back(CalibrationViolation::RotationNotOrthonormal);
    if (!(cal.rotation.determinant() > 0.0))
        out.push_back(CalibrationViolation::RotationNotProper);
    return out;
}

std::vector<CalibrationViolation> validation_warnings(const CameraCalibration& cal)
{
    if (camera_center(cal).z() > 0.0)
        return {};
    return {CalibrationViolation::CameraBelowGround};
}

CameraCalibration look_at(const WorldPoint& center, const WorldPoint& target, double focal, double cx,
                          double cy, int width, int height, const Vec3& up)
{
    const Vec3 forward = (target - center).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 down = forward.cross(right);

    CameraCalibration cal;
    cal.fx = cal.fy = focal;
    cal.cx = cx;
    cal.cy = cy;
    cal.rotation.row(0) = right.transpose();
    cal.rotation.row(1) = down.transpose();
    cal.rotation.row(2) = forward.transpose();
    cal.translation = -cal.rotation * center;
    cal.image_width = width;
    cal.image_height = height;
    return cal;
}

}  // namespace courtlift
