#pragma once

// Linear algebra of C^{n+1} with the signature-(1,n) Hermitian form
//   <z, w>_C = -conj(z0) w0 + sum_{j>=1} conj(zj) wj,
// its real part <z, w> = Re <z, w>_C, the quadric Q = {<z,z> = -r^2},
// the null cone, and the affine charts onto the unit ball and sphere.

#include <complex>
#include <initializer_list>

#include <Eigen/Core>

namespace hopf {

using Complex = std::complex<double>;

// Point of C^n in affine coordinates w_i = z_i / z_0.
using ChartPoint = Eigen::VectorXcd;

// Element of C^{n+1}; slot 0 is the timelike coordinate.
class AmbientVector {
public:
    // Throws InputError on an empty vector or a NaN/Inf entry.
    explicit AmbientVector(Eigen::VectorXcd coords);
    AmbientVector(std::initializer_list<Complex> coords);

    static AmbientVector zero(Eigen::Index size);
    static AmbientVector basis(Eigen::Index size, Eigen::Index index);

    Eigen::Index size() const noexcept { return coords_.size(); }
    const Eigen::VectorXcd& coords() const noexcept { return coords_; }
    Complex operator[](Eigen::Index i) const { return coords_[i]; }

    // Euclidean (not indefinite) max-modulus, used as the scale of tolerances.
    double max_modulus() const noexcept { return coords_.cwiseAbs().maxCoeff(); }

    AmbientVector& operator+=(const AmbientVector& other);
    AmbientVector& operator-=(const AmbientVector& other);
    AmbientVector& operator*=(Complex scalar);

    friend AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
    friend AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
    friend AmbientVector operator*(Complex c, AmbientVector a) { return a *= c; }
    friend AmbientVector operator*(AmbientVector a, Complex c) { return a *= c; }
    friend AmbientVector operator*(double c, AmbientVector a) { return a *= Complex(c); }
    friend AmbientVector operator/(AmbientVector a, Complex c) { return a *= (1.0 / c); }
    friend AmbientVector operator-(AmbientVector a) { return a *= Complex(-1.0); }

private:
    struct Unchecked {};
    AmbientVector(Eigen::VectorXcd coords, Unchecked) : coords_(std::move(coords)) {}

    Eigen::VectorXcd coords_;
};

// Multiplication by i, the complex structure J of C^{n+1}.
AmbientVector times_i(const AmbientVector& v);

// Curvature radius r of CH^n (holomorphic sectional curvature -4/r^2) together
// with the angle phi in (-pi/2, pi/2) and alpha = (2/r) sin(phi).
class HopfParams {
public:
    static HopfParams from_phi(double r, double phi);
    // Throws RegimeError unless |alpha| < 2/r.
    static HopfParams from_alpha(double r, double alpha);

    double r() const noexcept { return r_; }
    double phi() const noexcept { return phi_; }
    double alpha() const noexcept { return alpha_; }

    // 1/2 (1 - i tan phi), the right-hand side of tau^2 zeta.
    Complex tau_constant() const noexcept;

private:
    HopfParams(double r, double phi);

    double r_;
    double phi_;
    double alpha_;
};

Complex herm_form(const AmbientVector& z, const AmbientVector& w);
double real_form(const AmbientVector& z, const AmbientVector& w);

// real_form(z, z) + r^2; zero exactly on Q.
double quadric_residual(const AmbientVector& z, const HopfParams& params);
double quadric_residual(const AmbientVector& z, double r);

// |<n,n>| <= rel_tol * max_modulus(n)^2.
bool is_null(const AmbientVector& n, double rel_tol = 1e-9);

// (z1/z0, ..., zn/z0) for a null vector; the image lies on the unit sphere.
ChartPoint to_sphere_chart(const AmbientVector& n, double rel_tol = 1e-9);

// (z1/z0, ..., zn/z0) for a timelike vector; the image lies in the open unit ball.
ChartPoint to_ball_chart(const AmbientVector& z);

} // namespace hopf
