#include "courtlift/camera.hpp"
#include "courtlift/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <random>

using namespace courtlift;
using namespace courtlift::testing;

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

CameraCalibration distorted_identity(double k1, double k2 = 0.0)
{
    CameraCalibration cal = identity_camera();
    cal.distortion.k1 = k1;
    cal.distortion.k2 = k2;
    return cal;
}

}  // namespace

TEST_CASE("project: principal point and lateral offset")
{
    const auto cal = identity_camera();
    const ImagePoint a = project(cal, {0, 0, 5});
    CHECK(a.x() == 960.0);
    CHECK(a.y() == 540.0);
    const ImagePoint b = project(cal, {1, 0, 5});
    CHECK(b.x() == doctest::Approx(1160.0));
    CHECK(b.y() == doctest::Approx(540.0));
}

TEST_CASE("project: CAM-A against hand-evaluated look-at geometry")
{
    // Rows of R: right (1,0,0), down (0,-3,-20)/sqrt(409), forward (0,20,-3)/sqrt(409).
    // (1,0,0): x_c = 1, z_c = sqrt(409)           -> x = 2250 + 2000/sqrt(409)
    // (0,0,1): y_c = -20/sqrt(409), z_c = 406/sqrt(409) -> y = 750 - 2000*20/406
    // (3,-2,1.5): x_c = 3, y_c = -24/sqrt(409), z_c = 364.5/sqrt(409)
    const auto cal = cam_a();
    const double r409 = std::sqrt(409.0);
    const ImagePoint o = project(cal, {0, 0, 0});
    CHECK(o.x() == doctest::Approx(2250.0).epsilon(1e-12));
    CHECK(o.y() == doctest::Approx(750.0).epsilon(1e-12));
    const ImagePoint p1 = project(cal, {1, 0, 0});
    CHECK(p1.x() == doctest::Approx(2250.0 + 2000.0 / r409).epsilon(1e-12));  // 2348.893635286830
    CHECK(p1.y() == doctest::Approx(750.0).epsilon(1e-12));
    const ImagePoint p2 = project(cal, {0, 0, 1});
    CHECK(p2.x() == doctest::Approx(2250.0).epsilon(1e-12));
    CHECK(p2.y() == doctest::Approx(651.477832512315).epsilon(1e-12));
    const ImagePoint p3 = project(cal, {3, -2, 1.5});
    CHECK(p3.x() == doctest::Approx(2582.901208496407).epsilon(1e-12));
    CHECK(p3.y() == doctest::Approx(618.312757201646).epsilon(1e-12));
    CHECK(camera_center(cal).isApprox(Vec3(0, -20, 3), 1e-12));
    CHECK((camera_center(cal) - Vec3(0, -20, 3)).norm() < 1e-9);
}

TEST_CASE("project: points behind the camera are rejected")
{
    const auto cal = identity_camera();
    CHECK(code_of([&] { project(cal, {0, 0, -1}); }) == ErrorCode::DepthNonPositive);
    CHECK(code_of([&] { project(cal, {1, 1, 0}); }) == ErrorCode::DepthNonPositive);
    CHECK(code_of([&] { project(cal, {0, 0, 5e-10}); }) == ErrorCode::DepthNonPositive);
}

TEST_CASE("project agrees with the raw-array oracle on random cameras")
{
    std::mt19937_64 gen(11);
    for (int i = 0; i < 1000; ++i)
    {
        const auto cal = random_camera(gen, true);
        const WorldPoint p = random_point_in_front(cal, gen);
        const auto expected = oracle_project(cal, {p.x(), p.y(), p.z()});
        const ImagePoint got = project(cal, p);
        REQUIRE(std::abs(got.x() - expected[0]) < 1e-9);
        REQUIRE(std::abs(got.y() - expected[1]) < 1e-9);
    }
}

TEST_CASE("distort: identity, fixed center, radial polynomial")
{
    const Distortion none;
    CHECK(distort(none, Vec2(0.3, -0.2)) == Vec2(0.3, -0.2));
    const Distortion k{-0.1};
    CHECK(distort(k, Vec2(0, 0)) == Vec2(0, 0));
    const Vec2 d = distort(k, Vec2(0.5, 0));
    CHECK(d.x() == doctest::Approx(0.4875).epsilon(1e-15));
    CHECK(d.y() == 0.0);

    // tangential terms, evaluated by hand at (0.2, 0.1), p1 = 0.01, p2 = -0.02
    const Distortion t{0, 0, 0, 0.01, -0.02};
    const Vec2 dt = distort(t, Vec2(0.2, 0.1));
    CHECK(dt.x() == doctest::Approx(0.2 + 2 * 0.01 * 0.02 - 0.02 * (0.05 + 0.08)).epsilon(1e-15));
    CHECK(dt.y() == doctest::Approx(0.1 + 0.01 * (0.05 + 0.02) - 2 * 0.02 * 0.02).epsilon(1e-15));
}

TEST_CASE("undistort_point: identity without distortion")
{
    const auto cal = identity_camera();
    const ImagePoint p = undistort_point(cal, {123.4, 567.8});
    CHECK(p.x() == 123.4);
    CHECK(p.y() == 567.8);
}

TEST_CASE("undistort_point inverts the distortion to 1e-6 px")
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ux(0.0, 1919.0), uy(0.0, 1079.0);

    SUBCASE("k1 = -0.1")
    {
        const auto cal = distorted_identity(-0.1);
        for (int i = 0; i < 1000; ++i)
        {
            const ImagePoint q(ux(gen), uy(gen));
            const ImagePoint raw = denormalize(cal, distort(cal, normalize(cal, q)));
            REQUIRE((undistort_point(cal, raw) - q).norm() < 1e-6);
        }
    }
    SUBCASE("k1 = -0.28, k2 = 0.12, raw points within image bounds")
    {
        const auto cal = distorted_identity(-0.28, 0.12);
        for (int i = 0; i < 1000; ++i)
        {
            const ImagePoint raw(ux(gen), uy(gen));
            const ImagePoint q = undistort_point(cal, raw);
            const ImagePoint back = denormalize(cal, distort(cal, normalize(cal, q)));
            REQUIRE((back - raw).norm() < 1e-6);
        }
    }
}

TEST_CASE("distortion inverse holds across the coefficient box")
{
    // |k1| <= 0.3, |k2| <= 0.15, |p1|,|p2| <= 0.01 on a 1920x1080, f = 2000 view
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ux(0.0, 1919.0), uy(0.0, 1079.0);
    for (int c = 0; c < 200; ++c)
    {
        CameraCalibration cal = identity_camera();
        cal.fx = cal.fy = 2000.0;
        cal.distortion = {0.3 * u(gen), 0.15 * u(gen), 0.0, 0.01 * u(gen), 0.01 * u(gen)};
        for (int i = 0; i < 20; ++i)
        {
            const ImagePoint p(ux(gen), uy(gen));
            const Vec2 residual = distort(cal, normalize(cal, undistort_point(cal, p))) - normalize(cal, p);
            REQUIRE(residual.norm() < 1e-8);
        }
    }
}

TEST_CASE("undistort_point reports non-convergence past the fold of the distortion")
{
    // r * (1 - 0.3 r^2) peaks at 0.703 for r = 1.054; a target of 0.8 beyond the fold
    // stalls the descent at the local maximum
    const Distortion d{-0.3};
    CHECK(code_of([&] { undistort_normalized(d, Vec2(0.8, 0.0)); }) == ErrorCode::NoConvergence);
}

TEST_CASE("back_project: examples and re-projection property")
{
    const auto cal = identity_camera();
    const Ray r0 = back_project(cal, {960, 540});
    CHECK(r0.origin.norm() == 0.0);
    CHECK((r0.direction - Vec3(0, 0, 1)).norm() < 1e-15);
    const Ray r1 = back_project(cal, {1160, 540});
    CHECK((r1.direction - Vec3(0.2, 0, 1).normalized()).norm() < 1e-15);

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ux(0.0, 4499.0), uy(0.0, 1499.0);
    for (int i = 0; i < 1000; ++i)
    {
        const auto c = random_camera(gen, true).undistorted();
        const ImagePoint p(ux(gen), uy(gen));
        const Ray r = back_project(c, p);
        REQUIRE(std::abs(r.direction.norm() - 1.0) < 1e-12);
        for (double s : {1.0, 5.0, 50.0})
            REQUIRE((project(c, r.point_at(s)) - p).norm() < 1e-9);
    }
}

TEST_CASE("round trip: project, undistort and back-project pass within 1e-6 m of the point")
{
    std::mt19937_64 gen(23);
    for (int i = 0; i < 1000; ++i)
    {
        const auto cal = random_camera(gen, true);
        const WorldPoint p = random_point_in_front(cal, gen);
        const Ray r = back_project(cal, undistort_point(cal, project(cal, p)));
        const Vec3 rel = p - r.origin;
        const double miss = (rel - rel.dot(r.direction) * r.direction).norm();
        REQUIRE(miss < 1e-6);
    }
}

TEST_CASE("intersect_ray_plane")
{
    const Ray down{{0, 0, 10}, {0, 0, -1}};
    CHECK(intersect_ray_plane(down, {Axis::Z, 0.0}) == WorldPoint(0, 0, 0));

    const Ray flat{{0, 0, 10}, {1, 0, 0}};
    CHECK(code_of([&] { intersect_ray_plane(flat, {Axis::Z, 0.0}); }) == ErrorCode::RayParallelToPlane);

    const Ray up{{0, 0, 10}, {0, 0, 1}};
    CHECK(code_of([&] { intersect_ray_plane(up, {Axis::Z, 0.0}); }) == ErrorCode::IntersectionBehindCamera);

    const Vec3 origin(0, -20, 3);
    const Ray toward{origin, (Vec3(2, 1, 0) - origin).normalized()};
    CHECK((intersect_ray_plane(toward, {Axis::Z, 0.0}) - Vec3(2, 1, 0)).norm() < 1e-12);

    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i)
    {
        const Ray r{{10 * u(gen), 10 * u(gen), 10 * u(gen)}, Vec3(u(gen), u(gen), u(gen)).normalized()};
        const Axis axis = static_cast<Axis>(i % 3);
        const int a = i % 3;
        const double value = r.origin[a] + 5.0 * (r.direction[a] >= 0 ? 1.0 : -1.0) * std::abs(u(gen));
        const WorldPoint hit = intersect_ray_plane(r, {axis, value});
        REQUIRE(std::abs(hit[a] - value) < 1e-12);
    }
}

TEST_CASE("camera_center")
{
    CameraCalibration cal = identity_camera();
    CHECK(camera_center(cal) == WorldPoint(0, 0, 0));
    cal.translation = {0, 0, -5};
    CHECK(camera_center(cal) == WorldPoint(0, 0, 5));

    // collinearity: every point between the center and p images where p does
    const auto a = cam_a();
    const WorldPoint p(3, 4, 1);
    const WorldPoint c = camera_center(a);
    for (double t : {0.1, 0.5, 0.9})
        CHECK((project(a, c + t * (p - c)) - project(a, p)).norm() < 1e-9);
}

TEST_CASE("scale_calibration")
{
    const auto cal = identity_camera();
    CHECK(scale_calibration(cal, 1.0) == cal);
    const ImagePoint half = project(scale_calibration(cal, 0.5), {0, 0, 5});
    CHECK(half.x() == 480.0);
    CHECK(half.y() == 270.0);
    CHECK(code_of([&] { scale_calibration(cal, 0.0); }) == ErrorCode::NonPositiveScale);
    CHECK(code_of([&] { scale_calibration(cal, -1.0); }) == ErrorCode::NonPositiveScale);

    std::mt19937_64 gen(31);
    for (int i = 0; i < 1000; ++i)
    {
        const auto c = random_camera(gen, true);
        const WorldPoint p = random_point_in_front(c, gen);
        const ImagePoint base = project(c, p);
        for (double s : {0.5, 0.25, 0.125})
        {
            const ImagePoint scaled = project(scale_calibration(c, s), p);
            REQUIRE((scaled - s * base).norm() <= 1e-9 * (s * base).norm());
        }
    }
}

TEST_CASE("validate names each violated invariant")
{
    CHECK(validate(identity_camera()).empty());
    CHECK(validate(cam_a()).empty());
    // the identity camera sits on the floor: acceptable, but flagged for arena use
    CHECK(validation_warnings(identity_camera()) == std::vector{CalibrationViolation::CameraBelowGround});
    CHECK(validation_warnings(cam_a()).empty());

    auto bad_focal = cam_a();
    bad_focal.fx = -1;
    CHECK(validate(bad_focal) == std::vector{CalibrationViolation::FocalNonPositive});

    auto swapped = cam_a();
    swapped.rotation.row(0).swap(swapped.rotation.row(1));
    CHECK(swapped.rotation.determinant() == doctest::Approx(-1.0));
    const auto v = validate(swapped);
    CHECK(std::find(v.begin(), v.end(), CalibrationViolation::RotationNotProper) != v.end());

    auto skewed = cam_a();
    skewed.rotation(0, 0) = 1.001;
    const auto w = validate(skewed);
    CHECK(std::find(w.begin(), w.end(), CalibrationViolation::RotationNotOrthonormal) != w.end());

    auto empty = cam_a();
    empty.image_width = 0;
    CHECK(validate(empty) == std::vector{CalibrationViolation::ImageSizeNonPositive});
}
