#pragma once

#include <vector>

namespace hopf {

// Natural cubic spline through (x_k, y_k) with strictly increasing x.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;

    double front() const noexcept { return x_.front(); }
    double back() const noexcept { return x_.back(); }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at the knots
};

} // namespace hopf
