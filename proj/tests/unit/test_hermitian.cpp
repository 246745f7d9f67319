#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hopf/errors.hpp"
#include "hopf/hermitian.hpp"
#include "oracles.hpp"

using namespace hopf;
using Catch::Approx;

namespace {

const Complex I(0.0, 1.0);

AmbientVector random_vector(std::mt19937_64& rng, int size)
{
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(size);
    for (int k = 0; k < size; ++k)
        v[k] = Complex(g(rng), g(rng));
    return AmbientVector(v);
}

} // namespace

TEST_CASE("ambient vectors reject non-finite and empty input")
{
    Eigen::VectorXcd bad(3);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
    CHECK_THROWS_AS(AmbientVector(bad), InputError);
    CHECK_THROWS_AS(AmbientVector(Eigen::VectorXcd()), InputError);
    CHECK_THROWS_AS(herm_form(AmbientVector{1.0, 0.0}, AmbientVector{1.0, 0.0, 0.0}), InputError);
}

TEST_CASE("hermitian form on hand-evaluated vectors")
{
    CHECK(herm_form({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}) == Complex(-1.0));
    CHECK(herm_form({1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}) == Complex(0.0));
    CHECK(herm_form({1.0, 1.0, 0.0}, {1.0, 0.0, 1.0}) == Complex(-1.0));
    CHECK(real_form({1.0, 0.0, 0.0}, {I, 0.0, 0.0}) == 0.0);
    CHECK(real_form({0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}) == 1.0);
    CHECK(real_form({1.0, 1.0, 0.0}, {I, I, 0.0}) == 0.0);
}

TEST_CASE("hermitian form matches the term-by-term oracle and is sesquilinear")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int size = 2 + trial % 4;
        const AmbientVector z = random_vector(rng, size), w = random_vector(rng, size), v = random_vector(rng, size);
        const Complex a(0.3 * trial - 2.0, 1.7);
        const Complex h = herm_form(z, w);
        const Complex o = oracle::herm(oracle::to_vec(z), oracle::to_vec(w));
        CHECK(std::abs(h - o) <= 1e-12 * (1.0 + std::abs(o)));
        CHECK(std::abs(herm_form(w, z) - std::conj(h)) <= 1e-12 * (1.0 + std::abs(h)));
        CHECK(std::abs(herm_form(z, a * w + v) - (a * h + herm_form(z, v))) <= 1e-11 * (1.0 + std::abs(a * h)));
        CHECK(std::abs(herm_form(a * z, w) - std::conj(a) * h) <= 1e-11 * (1.0 + std::abs(a * h)));
        CHECK(real_form(z, w) == h.real());
        // <z, iz> = Re(i <z,z>) = 0 because <z,z> is real
        CHECK(std::abs(real_form(z, times_i(z))) <= 1e-12 * (1.0 + z.max_modulus() * z.max_modulus()));
    }
}

TEST_CASE("quadric residual")
{
    const HopfParams p = HopfParams::from_phi(2.0, 0.3);
    CHECK(quadric_residual(AmbientVector{2.0, 0.0, 0.0}, p) == 0.0);
    CHECK(quadric_residual(AmbientVector{0.0, 1.0, 0.0}, 1.0) == 2.0);
    const AmbientVector e0{-I * std::sqrt(2.0), -I / std::sqrt(2.0), -I / std::sqrt(2.0)};
    REQUIRE(real_form(e0, e0) == Approx(-1.0).margin(1e-15));
    CHECK(std::abs(quadric_residual(Complex(0.0, -2.0) * e0, p)) <= 1e-14);
}

TEST_CASE("sphere chart")
{
    const ChartPoint a = to_sphere_chart({1.0, 1.0, 0.0});
    CHECK(a[0] == Complex(1.0));
    CHECK(a[1] == Complex(0.0));
    const ChartPoint b = to_sphere_chart({2.0, 2.0 * I, 0.0});
    CHECK(b[0] == I);
    CHECK(b[1] == Complex(0.0));
    for (double theta : {0.3, 1.9, -2.5}) {
        const Complex ph = std::polar(1.0, theta);
        const Complex w1 = std::polar(0.6, 0.4), w2 = std::polar(0.8, -1.1);
        const ChartPoint c = to_sphere_chart({ph, ph * w1, ph * w2});
        CHECK(std::abs(c[0] - w1) <= 1e-15);
        CHECK(std::abs(c[1] - w2) <= 1e-15);
    }
    CHECK_THROWS_AS(to_sphere_chart({0.0, 1.0, 0.0}), ChartError);
    CHECK_THROWS_AS(to_sphere_chart({1.0, 0.5, 0.0}), ChartError);
}

TEST_CASE("ball chart")
{
    const ChartPoint o = to_ball_chart({1.0, 0.0, 0.0});
    CHECK(o.norm() == 0.0);
    const ChartPoint h = to_ball_chart({2.0, 1.0, 0.0});
    CHECK(h[0] == Complex(0.5));
    CHECK(h[1] == Complex(0.0));
    const AmbientVector e0{-I * std::sqrt(2.0), -I / std::sqrt(2.0), -I / std::sqrt(2.0)};
    const ChartPoint w = to_ball_chart(e0);
    CHECK(std::abs(w[0] - 0.5) <= 1e-15);
    CHECK(std::abs(w[1] - 0.5) <= 1e-15);
    CHECK_THROWS_AS(to_ball_chart({0.0, 1.0, 0.0}), ChartError);
    CHECK_THROWS_AS(to_ball_chart({1.0, 1.0, 0.0}), ChartError);
    CHECK_THROWS_AS(to_ball_chart({1.0, 2.0, 0.0}), ChartError);
}

TEST_CASE("Hopf parameters")
{
    CHECK(HopfParams::from_alpha(1.0, 0.0).phi() == 0.0);
    const HopfParams p = HopfParams::from_phi(2.0, std::numbers::pi / 6);
    CHECK(p.alpha() == Approx(0.5).epsilon(1e-15));
    CHECK(p.alpha() == (2.0 / p.r()) * std::sin(p.phi()));
    const HopfParams q = HopfParams::from_alpha(1.5, -0.9);
    CHECK(q.alpha() == Approx(-0.9).epsilon(1e-14));
    CHECK(std::abs(q.alpha()) < 2.0 / q.r());
    CHECK_THROWS_AS(HopfParams::from_alpha(1.0, 2.5), RegimeError);
    CHECK_THROWS_AS(HopfParams::from_alpha(1.0, -2.0), RegimeError);
    CHECK_THROWS_AS(HopfParams::from_phi(1.0, std::numbers::pi / 2), RegimeError);
    CHECK_THROWS_AS(HopfParams::from_phi(0.0, 0.1), InputError);
    const Complex c = HopfParams::from_phi(1.0, std::numbers::pi / 4).tau_constant();
    CHECK(c.real() == 0.5);
    CHECK(c.imag() == Approx(-0.5).epsilon(1e-15));
}
