#include "hopf/spline.hpp"

#include <algorithm>
#include <cmath>

#include "hopf/errors.hpp"

namespace hopf {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw InputError("CubicSpline: need at least two knots and matching value count");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(x_[k]) || !std::isfinite(y_[k]))
            throw InputError("CubicSpline: non-finite knot data");
        if (k > 0 && !(x_[k] > x_[k - 1]))
            throw InputError("CubicSpline: knots must be strictly increasing");
    }

    // Tridiagonal system for the interior second derivatives (Thomas algorithm).
    m_.assign(n, 0.0);
    if (n == 2)
        return;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double h0 = x_[k] - x_[k - 1];
        const double h1 = x_[k + 1] - x_[k];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
    }
    for (std::size_t k = 2; k + 1 < n; ++k) {
        const double lower = x_[k] - x_[k - 1];
        const double w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    for (std::size_t k = n - 2; k >= 1; --k) {
        m_[k] = (rhs[k] - upper[k] * m_[k + 1]) / diag[k];
        if (k == 1)
            break;
    }
}

std::size_t CubicSpline::interval(double x) const
{
    if (x < x_.front() || x > x_.back())
        throw DomainError("CubicSpline: evaluation point outside knot range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - x_.begin());
    return std::clamp<std::size_t>(k, 1, x_.size() - 1) - 1;
}

double CubicSpline::value(double x) const
{
    const std::size_t k = interval(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h;
    const double b = (x - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] + ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const
{
    const std::size_t k = interval(x);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h;
    const double b = (x - x_[k]) / h;
    return (y_[k + 1] - y_[k]) / h + ((1.0 - 3.0 * a * a) * m_[k] + (3.0 * b * b - 1.0) * m_[k + 1]) * h / 6.0;
}

} // namespace hopf
