#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "hopf/errors.hpp"
#include "hopf/verify.hpp"
#include "oracles.hpp"

using namespace hopf;

namespace {

constexpr double kPi = std::numbers::pi;

const std::array<std::array<double, 2>, 4> kPoints{{{0.3, 0.9}, {1.2, 1.7}, {0.7, 2.3}, {0.1, 0.6}}};

} // namespace

TEST_CASE("horizontal projection")
{
    const auto patch = fixture::mixed_pair(HopfParams::from_phi(2.0, 0.3));
    const std::array<double, 2> x{0.5, 1.5};
    const AmbientVector z = patch->surface_point(x, 0.2).z;
    const double r = 2.0;
    CHECK(horizontal_project(z, z, r).max_modulus() <= 1e-13);
    CHECK(horizontal_project(z, times_i(z), r).max_modulus() <= 1e-13);
    const AmbientVector v{0.3, Complex(1.0, -2.0), Complex(0.5, 0.5)};
    const AmbientVector h = horizontal_project(z, v, r);
    CHECK(std::abs(real_form(h, z)) <= 1e-12);
    CHECK(std::abs(real_form(h, times_i(z))) <= 1e-12);
    CHECK((horizontal_project(z, h, r) - h).max_modulus() <= 1e-12);
}

TEST_CASE("tangent frame")
{
    for (double phi : {0.0, kPi / 6, -kPi / 4}) {
        for (double r : {1.0, 2.0}) {
            const auto patch = fixture::mixed_pair(HopfParams::from_phi(r, phi));
            for (const auto& x : kPoints) {
                const TangentFrame f = tangent_frame(*patch, x, 0.35);
                for (const AmbientVector& e : f.vectors) {
                    CHECK(std::abs(real_form(e, f.z())) <= 1e-10 * (1 + e.max_modulus()));
                    CHECK(std::abs(real_form(e, times_i(f.z()))) <= 1e-10 * (1 + e.max_modulus()));
                }
                // |E_u|^2 = r^2 sec^2(phi); reduces to r^2 at phi = 0
                const double sec2 = 1.0 / (std::cos(phi) * std::cos(phi));
                CHECK(real_form(f.along_u(), f.along_u()) == Catch::Approx(r * r * sec2).epsilon(1e-10));
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.gram);
                CHECK(eig.eigenvalues().minCoeff() > 0.0);
            }
        }
    }
    const auto gc = fixture::great_circle_pair(HopfParams::from_phi(1.0, 0.0));
    const std::array<double, 2> x{0.5, 2.5};
    CHECK_THROWS_AS(tangent_frame(*gc, x, 0.0), DegenerateFrameError);
}

TEST_CASE("unit normal and structure vector")
{
    const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.0, kPi / 6));
    for (const auto& x : kPoints) {
        const TangentFrame f = tangent_frame(*patch, x, -0.4);
        const AmbientVector xi = unit_normal(f);
        double worst = 0.0;
        for (const AmbientVector& e : f.vectors)
            worst = std::max(worst, std::abs(real_form(xi, e)));
        CHECK(worst <= 1e-9);
        CHECK(std::abs(real_form(xi, xi) - 1.0) <= 1e-12);
        CHECK(std::abs(real_form(xi, f.z())) <= 1e-12);
        CHECK(std::abs(real_form(xi, times_i(f.z()))) <= 1e-12);
        CHECK(real_form(xi, times_i(f.along_u()) * Complex(-1.0)) > 0.0);
        const AmbientVector rev = unit_normal(f, NormalOrientation::Reversed);
        CHECK((rev + xi).max_modulus() <= 1e-15);

        const AmbientVector w = structure_vector(f, xi);
        CHECK(std::abs(real_form(w, xi)) <= 1e-15);
        CHECK(std::abs(real_form(w, w) - 1.0) <= 1e-12);
        CHECK(tangency_residual(f, w) <= 1e-8);
    }
}

TEST_CASE("shape operator is self-adjoint and matches the second fundamental form oracle")
{
    for (double phi : {0.0, kPi / 6, -kPi / 4}) {
        const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.5, phi));
        for (const auto& x : kPoints) {
            const double u = 0.25;
            const ShapeOperator S = shape_operator(*patch, x, u);
            CHECK(S.asymmetry <= 1e-3);
            const Eigen::MatrixXd B = oracle::second_fundamental_form(*patch, x, u, S.normal);
            const double scale = 1.0 + B.norm();
            INFO("phi = " << phi << "\nshape form\n" << S.metric_form << "\noracle\n" << B);
            CHECK((S.metric_form - B).norm() <= 1e-5 * scale);
            CHECK((S.metric_form - S.metric_form.transpose()).norm() <= 1e-5 * scale);
        }
    }
}

TEST_CASE("Hopf principal curvature")
{
    SECTION("phi = 0 gives alpha = 0")
    {
        const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.0, 0.0));
        for (const auto& x : kPoints) {
            const HopfCheck c = hopf_defect(*patch, x, 0.1);
            CHECK(std::abs(c.measured_alpha) <= 1e-4);
            CHECK(c.defect <= 1e-3);
        }
    }
    SECTION("phi = pi/6, r = 1 gives |alpha| = 1")
    {
        const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.0, kPi / 6));
        for (const auto& x : kPoints) {
            const HopfCheck c = hopf_defect(*patch, x, -0.6);
            CHECK(std::abs(std::abs(c.measured_alpha) - 1.0) <= 1e-3);
            CHECK(c.measured_alpha == Catch::Approx(c.constructed_alpha).margin(1e-3));
            CHECK(c.defect <= 1e-3);
            CHECK(c.constructed_defect <= 1e-3);
        }
    }
    SECTION("reversing the normal negates alpha")
    {
        const auto patch = fixture::mixed_pair(HopfParams::from_phi(2.0, -kPi / 4));
        ShapeOptions rev;
        rev.orientation = NormalOrientation::Reversed;
        for (const auto& x : kPoints) {
            const HopfCheck a = hopf_defect(*patch, x, 0.5);
            const HopfCheck b = hopf_defect(*patch, x, 0.5, rev);
            CHECK(b.orientation == NormalOrientation::Reversed);
            CHECK(b.measured_alpha == Catch::Approx(-a.measured_alpha).margin(1e-9));
            CHECK(b.constructed_alpha == -a.constructed_alpha);
            CHECK(b.constructed_defect <= 1e-3);
        }
    }
}

TEST_CASE("finite-difference convergence of the shape operator")
{
    const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.0, kPi / 6));
    for (const auto& x : kPoints) {
        ShapeOptions coarse, fine, finer;
        coarse.fd_step = 1e-2;
        fine.fd_step = 5e-3;
        finer.fd_step = 2.5e-3;
        const double d1 = hopf_defect(*patch, x, 0.3, coarse).constructed_defect;
        const double d2 = hopf_defect(*patch, x, 0.3, fine).constructed_defect;
        const double d3 = hopf_defect(*patch, x, 0.3, finer).constructed_defect;
        INFO("defects " << d1 << " " << d2 << " " << d3);
        CHECK(d1 / d2 >= 3.0);
        CHECK(d2 / d3 >= 3.0);

        const Eigen::MatrixXd s1 = shape_operator(*patch, x, 0.3, coarse).matrix;
        const Eigen::MatrixXd s2 = shape_operator(*patch, x, 0.3, fine).matrix;
        const Eigen::MatrixXd s3 = shape_operator(*patch, x, 0.3, finer).matrix;
        CHECK((s1 - s2).norm() / (s2 - s3).norm() >= 3.0);
    }
}

TEST_CASE("W-curves")
{
    const auto patch = fixture::mixed_pair(HopfParams::from_phi(1.0, 0.4));
    const std::array<double, 3> us{-1.0, 0.0, 1.2};
    for (const auto& x : kPoints) {
        const WCurveCheck c = w_curve_check(*patch, x, us);
        CHECK(c.max_deviation <= 1e-6);
        REQUIRE(c.angles.size() == 3);
        for (double a : c.angles)
            CHECK(std::abs(a - c.angles[0]) <= 1e-6);

        const ShapeOperator S = shape_operator(*patch, x, 0.0);
        const double forward = alignment_angle(S.frame.along_u(), S.structure);
        const double backward = alignment_angle(S.frame.along_u() * Complex(-1.0), S.structure);
        CHECK(std::abs(forward + backward - kPi) <= 1e-12);
        CHECK(std::min(forward, kPi - forward) <= 1e-6);
    }
}

TEST_CASE("verify_sample classification")
{
    const auto mixed = fixture::mixed_pair(HopfParams::from_phi(1.0, kPi / 6));
    const SampleRecord good = verify_sample(*mixed, kPoints[0], 0.0);
    CHECK(good.generic);
    CHECK(good.note.empty());
    CHECK(good.rank == 3);
    CHECK(good.hopf_defect <= 1e-3);

    const auto gc = fixture::great_circle_pair(HopfParams::from_phi(1.0, 0.0));
    const std::array<double, 2> x{0.5, 2.5};
    const SampleRecord bad = verify_sample(*gc, x, 0.0);
    CHECK_FALSE(bad.generic);
    CHECK(bad.note == "rank-deficient");
    CHECK(std::isnan(bad.hopf_defect));

    VerificationReport report;
    report.records = {good, bad};
    CHECK(report.generic_count() == 1);
    const SummaryStat st = report.summarize(&SampleRecord::hopf_defect);
    CHECK(st.count == 1);
    CHECK(st.max == good.hopf_defect);
}
