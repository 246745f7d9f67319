#include "hopf/hermitian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hopf/errors.hpp"

namespace hopf {

namespace {

void require_same_size(const AmbientVector& z, const AmbientVector& w, const char* op)
{
    if (z.size() != w.size()) {
        std::ostringstream msg;
        msg << op << ": dimension mismatch (" << z.size() << " vs " << w.size() << ")";
        throw InputError(msg.str());
    }
}

} // namespace

AmbientVector::AmbientVector(Eigen::VectorXcd coords) : coords_(std::move(coords))
{
    if (coords_.size() == 0)
        throw InputError("AmbientVector: empty coordinate list");
    for (Eigen::Index i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i].real()) || !std::isfinite(coords_[i].imag()))
            throw InputError("AmbientVector: non-finite coordinate at index " + std::to_string(i));
    }
}

AmbientVector::AmbientVector(std::initializer_list<Complex> coords)
    : AmbientVector(Eigen::Map<const Eigen::VectorXcd>(coords.begin(), static_cast<Eigen::Index>(coords.size())))
{
}

AmbientVector AmbientVector::zero(Eigen::Index size)
{
    return AmbientVector(Eigen::VectorXcd::Zero(size));
}

AmbientVector AmbientVector::basis(Eigen::Index size, Eigen::Index index)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
    v[index] = 1.0;
    return AmbientVector(std::move(v));
}

AmbientVector& AmbientVector::operator+=(const AmbientVector& other)
{
    require_same_size(*this, other, "operator+");
    coords_ += other.coords_;
    return *this;
}

AmbientVector& AmbientVector::operator-=(const AmbientVector& other)
{
    require_same_size(*this, other, "operator-");
    coords_ -= other.coords_;
    return *this;
}

AmbientVector& AmbientVector::operator*=(Complex scalar)
{
    coords_ *= scalar;
    return *this;
}

AmbientVector times_i(const AmbientVector& v)
{
    return Complex(0.0, 1.0) * v;
}

HopfParams::HopfParams(double r, double phi) : r_(r), phi_(phi), alpha_((2.0 / r) * std::sin(phi)) {}

HopfParams HopfParams::from_phi(double r, double phi)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw InputError("HopfParams: r must be positive and finite");
    if (!(std::abs(phi) < std::numbers::pi / 2))
        throw RegimeError("HopfParams: phi must lie in the open interval (-pi/2, pi/2)");
    return HopfParams(r, phi);
}

HopfParams HopfParams::from_alpha(double r, double alpha)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw InputError("HopfParams: r must be positive and finite");
    if (!std::isfinite(alpha) || !(std::abs(alpha) < 2.0 / r)) {
        std::ostringstream msg;
        msg << "HopfParams: |alpha| = " << std::abs(alpha) << " violates the small-alpha regime |alpha| < 2/r = "
            << 2.0 / r;
        throw RegimeError(msg.str());
    }
    return HopfParams(r, std::asin(alpha * r / 2.0));
}

Complex HopfParams::tau_constant() const noexcept
{
    return Complex(0.5, -0.5 * std::tan(phi_));
}

Complex herm_form(const AmbientVector& z, const AmbientVector& w)
{
    require_same_size(z, w, "herm_form");
    const auto& a = z.coords();
    const auto& b = w.coords();
    Complex sum = -std::conj(a[0]) * b[0];
    for (Eigen::Index j = 1; j < a.size(); ++j)
        sum += std::conj(a[j]) * b[j];
    return sum;
}

double real_form(const AmbientVector& z, const AmbientVector& w)
{
    return herm_form(z, w).real();
}

double quadric_residual(const AmbientVector& z, double r)
{
    return real_form(z, z) + r * r;
}

double quadric_residual(const AmbientVector& z, const HopfParams& params)
{
    return quadric_residual(z, params.r());
}

bool is_null(const AmbientVector& n, double rel_tol)
{
    const double scale = n.max_modulus();
    return std::abs(real_form(n, n)) <= rel_tol * scale * scale;
}

ChartPoint to_sphere_chart(const AmbientVector& n, double rel_tol)
{
    if (n.size() < 2)
        throw InputError("to_sphere_chart: need at least two coordinates");
    if (n[0] == Complex(0.0))
        throw ChartError("to_sphere_chart: z0 = 0; the projectivized null cone lies inside the affine chart");
    if (!is_null(n, rel_tol))
        throw ChartError("to_sphere_chart: vector is not null");
    return n.coords().tail(n.size() - 1) / n[0];
}

ChartPoint to_ball_chart(const AmbientVector& z)
{
    if (z.size() < 2)
        throw InputError("to_ball_chart: need at least two coordinates");
    if (z[0] == Complex(0.0))
        throw ChartError("to_ball_chart: z0 = 0");
    if (!(real_form(z, z) < 0.0))
        throw ChartError("to_ball_chart: vector is not timelike");
    return z.coords().tail(z.size() - 1) / z[0];
}

} // namespace hopf
