#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfl/sim.hpp"
#include "rfl/so3.hpp"

#ifdef RFL_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/SVD>
#endif

using namespace rfl;

namespace {

std::uint64_t g_rng = 0x9d2c5680u;

double uniform() { return (splitmix64(g_rng) >> 11) * 0x1.0p-53; }

Vec3 random_vec(double scale) {
    return {scale * (2.0 * uniform() - 1.0), scale * (2.0 * uniform() - 1.0),
            scale * (2.0 * uniform() - 1.0)};
}

Mat3 random_rotation() { return so3_exp(random_vec(3.0)); }

#ifdef RFL_HAVE_EIGEN
// Independent route: nearest rotation via SVD, Q = U diag(1,1,det(UV^T)) V^T.
Mat3 svd_project(const Mat3& m) {
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = m(r, c);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU(), v = svd.matrixV();
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (u * v.transpose()).determinant();
    Eigen::Matrix3d q = u * d * v.transpose();
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = q(r, c);
    return out;
}
#endif

} // namespace

TEST_CASE("hat matches the cross product") {
    CHECK(max_abs(hat({0, 0, 0})) == 0.0);

    const Mat3 hz = hat({0, 0, 1});
    const Mat3 expected{0, -1, 0, 1, 0, 0, 0, 0, 0};
    CHECK(max_abs(hz - expected) == 0.0);

    const Vec3 v{1, 2, 3}, w{4, 5, 6};
    const Vec3 hw = hat(v) * w;
    const Vec3 vxw = cross(v, w);
    CHECK(hw.x == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(hw.y == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(hw.z == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(norm(hw - vxw) == 0.0);

    for (int i = 0; i < 50; ++i) {
        const Vec3 a = random_vec(10.0), b = random_vec(10.0);
        CHECK(norm(hat(a) * b - cross(a, b)) < 1e-12 * (1.0 + norm(a) * norm(b)));
    }
}

TEST_CASE("vee inverts hat exactly") {
    const Vec3 v{1, 2, 3};
    const Vec3 r = vee(hat(v));
    CHECK(r.x == 1.0);
    CHECK(r.y == 2.0);
    CHECK(r.z == 3.0);

    CHECK(norm(vee(Mat3{})) == 0.0);

    const Vec3 u{-0.5, 0.0, 2.0};
    const Vec3 ru = vee(hat(u));
    CHECK(ru.x == -0.5);
    CHECK(ru.y == 0.0);
    CHECK(ru.z == 2.0);

    for (int i = 0; i < 50; ++i) {
        const Vec3 a = random_vec(5.0);
        const Vec3 back = vee(hat(a));
        CHECK(back.x == a.x);
        CHECK(back.y == a.y);
        CHECK(back.z == a.z);
    }
}

TEST_CASE("vee rejects non-skew input") {
    Mat3 m = hat({1, 2, 3});
    m(0, 1) += 1e-6;
    CHECK_THROWS_AS(vee(m), std::invalid_argument);
    m = hat({1, 2, 3});
    m(0, 1) += 1e-10; // within tolerance
    CHECK_NOTHROW(vee(m));
}

TEST_CASE("orthonormalize fixed points and projection") {
    CHECK(max_abs(orthonormalize(Mat3::identity()) - Mat3::identity()) < 1e-15);

    const Mat3 rz = rot_z(30.0 * M_PI / 180.0);
    CHECK(max_abs(orthonormalize(rz) - rz) < 1e-14);

    // Perturbed rotation stays within 2e-6 of the original.
    const Mat3 r = random_rotation();
    Mat3 noisy = r;
    for (double& x : noisy.m) x += 1e-6;
    const Mat3 q = orthonormalize(noisy);
    CHECK(frobenius_norm(q - r) < 2e-6);
    CHECK(max_abs(transpose(q) * q - Mat3::identity()) < 1e-12);
    CHECK(det(q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthonormalize is idempotent") {
    for (int i = 0; i < 20; ++i) {
        Mat3 noisy = random_rotation();
        for (double& x : noisy.m) x += 2e-3 * (2.0 * uniform() - 1.0);
        const Mat3 once = orthonormalize(noisy);
        const Mat3 twice = orthonormalize(once);
        CHECK(frobenius_norm(twice - once) < 1e-12);
    }
}

TEST_CASE("orthonormalize rejects inputs far from a rotation") {
    CHECK_THROWS_AS(orthonormalize(Mat3::diag(1.0, 1.0, -1.0)), std::domain_error);
    CHECK_THROWS_AS(orthonormalize(2.0 * Mat3::identity()), std::domain_error);
}

#ifdef RFL_HAVE_EIGEN
TEST_CASE("orthonormalize agrees with the SVD projection oracle") {
    for (int i = 0; i < 100; ++i) {
        Mat3 noisy = random_rotation();
        for (double& x : noisy.m) x += 0.02 * (2.0 * uniform() - 1.0);
        const Mat3 mine = orthonormalize(noisy);
        const Mat3 oracle = svd_project(noisy);
        CHECK(frobenius_norm(mine - oracle) < 1e-10);
    }
}
#endif

TEST_CASE("so3_exp produces rotations consistent with rot_z") {
    const Mat3 a = so3_exp({0, 0, 0.7});
    CHECK(frobenius_norm(a - rot_z(0.7)) < 1e-13);
    for (int i = 0; i < 20; ++i) {
        const Mat3 r = so3_exp(random_vec(2.0));
        CHECK(max_abs(transpose(r) * r - Mat3::identity()) < 1e-13);
        CHECK(det(r) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
