#include "courtlift/reconstruct.hpp"

#include "courtlift/errors.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace courtlift {

namespace {

bool is_ray_failure(const Error& e)
{
    return e.code() == ErrorCode::RayParallelToPlane || e.code() == ErrorCode::IntersectionBehindCamera;
}

std::optional<WorldPoint> try_intersect(const Ray& r, const AxisPlane& plane)
{
    try
    {
        return intersect_ray_plane(r, plane);
    }
    catch (const Error& e)
    {
        if (is_ray_failure(e))
            return std::nullopt;
        throw;
    }
}

WorldPoint vertical_reference(const CameraCalibration& cal, const Ray& r)
{
    if (auto ground = try_intersect(r, {Axis::Z, 0.0}))
        return *ground;
    const double depth_rate = cal.rotation.row(2).dot(r.direction);
    return r.point_at(1.0 / depth_rate);
}

}  // namespace

VerticalDirection vertical_direction(const CameraCalibration& cal, const ImagePoint& ball_px)
{
    const WorldPoint ref = vertical_reference(cal, back_project(cal, ball_px));
    const Vec2 low = project_undistorted(cal, ref);
    const Vec2 high = project_undistorted(cal, ref + Vec3(0.0, 0.0, kVerticalProbeHeight));
    const Vec2 delta = low - high;
    const double len = delta.norm();
    if (!(len >= kDegenerateVerticalPx))
        throw Error(ErrorCode::DegenerateVertical, "vertical probe spans " + std::to_string(len) + " px");
    const Vec2 v = delta / len;
    return {v, std::atan2(v.x(), v.y())};
}

ImagePoint foot_pixel(const CameraCalibration& cal, const ImagePoint& ball_px, HeightPrediction h)
{
    if (h.h == 0.0)
        return ball_px;
    ImagePoint foot = ball_px + h.h * vertical_direction(cal, ball_px).direction;
    for (int it = 0; it < kFootMaxIterations; ++it)
    {
        const ImagePoint next = ball_px + h.h * vertical_direction(cal, foot).direction;
        const double moved = (next - foot).norm();
        foot = next;
        if (moved < kFootTolerancePx)
            break;
    }
    return foot;
}

Reconstruction reconstruct_from_height(const CameraCalibration& cal, const ImagePoint& ball_px_raw,
                                       HeightPrediction h)
{
    const ImagePoint p = undistort_point(cal, ball_px_raw);

    Reconstruction out;
    out.vertical_angle = vertical_direction(cal, p).angle;
    out.foot_pixel = foot_pixel(cal, p, h);

    const auto ground = try_intersect(back_project(cal, out.foot_pixel), {Axis::Z, 0.0});
    if (!ground)
        throw Error(ErrorCode::GroundIntersectionFailed,
                    "foot pixel (" + std::to_string(out.foot_pixel.x()) + ", " +
                        std::to_string(out.foot_pixel.y()) + ") does not see the ground");
    out.ground_projection = *ground;

    if (h.h == 0.0)
    {
        out.ball_3d = out.ground_projection;
        out.plane_gap = 0.0;
        return out;
    }

    const Ray ball_ray = back_project(cal, p);
    const auto on_x = try_intersect(ball_ray, {Axis::X, ground->x()});
    const auto on_y = try_intersect(ball_ray, {Axis::Y, ground->y()});
    if (on_x && on_y)
    {
        out.ball_3d = 0.5 * (*on_x + *on_y);
        out.plane_gap = (*on_x - *on_y).norm();
    }
    else if (on_x || on_y)
    {
        out.ball_3d = on_x ? *on_x : *on_y;
        out.plane_gap = 0.0;
    }
    else
    {
        throw Error(ErrorCode::BothPlanesDegenerate, "ball ray meets neither vertical plane");
    }
    return out;
}

HeightPrediction true_pixel_height(const CameraCalibration& cal, const WorldPoint& ball_3d)
{
    return {(project_undistorted(cal, ball_3d) - project_undistorted(cal, ground_of(ball_3d))).norm()};
}

Reconstruction reconstruct_from_diameter(const CameraCalibration& cal, const ImagePoint& ball_px_raw,
                                         double diameter_px, double ball_diameter_m)
{
    if (!(diameter_px > 0.0))
        throw Error(ErrorCode::NonPositiveDiameter, "diameter_px = " + std::to_string(diameter_px));
    if (!(ball_diameter_m > 0.0))
        throw Error(ErrorCode::NonPositiveDiameter, "ball_diameter_m = " + std::to_string(ball_diameter_m));

    const ImagePoint p = undistort_point(cal, ball_px_raw);
    const double f_mean = 0.5 * (cal.fx + cal.fy);
    const double depth = f_mean * ball_diameter_m / diameter_px;
    const Ray r = back_project(cal, p);

    Reconstruction out;
    out.ball_3d = r.point_at(depth / cal.rotation.row(2).dot(r.direction));
    out.ground_projection = ground_of(out.ball_3d);
    out.plane_gap = 0.0;
    // image-side fields are informational here; NaN when the geometry leaves them undefined
    out.foot_pixel = ImagePoint::Constant(std::numeric_limits<double>::quiet_NaN());
    out.vertical_angle = std::numeric_limits<double>::quiet_NaN();
    if (camera_depth(cal, out.ground_projection) > kDepthEpsilon)
        out.foot_pixel = project_undistorted(cal, out.ground_projection);
    try
    {
        out.vertical_angle = vertical_direction(cal, p).angle;
    }
    catch (const Error&)
    {
    }
    return out;
}

double true_diameter_px(const CameraCalibration& cal, const WorldPoint& ball_3d, double ball_diameter_m)
{
    const double depth = camera_depth(cal, ball_3d);
    if (!(depth > kDepthEpsilon))
        throw Error(ErrorCode::DepthNonPositive, "camera-frame depth " + std::to_string(depth));
    return 0.5 * (cal.fx + cal.fy) * ball_diameter_m / depth;
}

Eigen::Affine2d crop_transform(const CameraCalibration& cal, const ImagePoint& ball_px_raw, double crop_size,
                               double scale)
{
    if (!(scale > 0.0))
        throw Error(ErrorCode::NonPositiveScale, std::to_string(scale));
    const double angle = vertical_direction(cal, undistort_point(cal, ball_px_raw)).angle;

    // rotation(angle) maps the unit vertical (sin a, cos a) onto (0, 1)
    Eigen::Affine2d t = Eigen::Affine2d::Identity();
    t.translate(Vec2(0.5 * crop_size, 0.5 * crop_size));
    t.scale(scale);
    t.rotate(Eigen::Rotation2Dd(angle));
    t.translate(-ball_px_raw);
    return t;
}

}  // namespace courtlift
