#include "hopf/legendrian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hopf/errors.hpp"

namespace hopf {

namespace {

// One classical Runge-Kutta step for y' = f(t, y).
template <class F>
double rk4_step(const F& f, double t, double y, double h)
{
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

// Cubic Hermite interpolant of nodal values and slopes.
class HermiteTable {
public:
    HermiteTable(std::vector<double> t, std::vector<double> y, std::vector<double> dy)
        : t_(std::move(t)), y_(std::move(y)), dy_(std::move(dy))
    {
    }

    double operator()(double t) const
    {
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - t_.begin()), 1, t_.size() - 1) - 1;
        const double h = t_[k + 1] - t_[k];
        const double s = (t - t_[k]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * y_[k] + h10 * h * dy_[k] + h01 * y_[k + 1] + h11 * h * dy_[k + 1];
    }

private:
    std::vector<double> t_;
    std::vector<double> y_;
    std::vector<double> dy_;
};

void require_in_domain(const ContactCurve& curve, double t)
{
    if (!curve.domain().contains(t)) {
        std::ostringstream msg;
        msg << "contact curve evaluated at t = " << t << " outside [" << curve.domain().lo << ", "
            << curve.domain().hi << "]";
        throw DomainError(msg.str());
    }
}

} // namespace

AngleFunction AngleFunction::constant(double c)
{
    return {[c](double) { return c; }, [](double) { return 0.0; }};
}

AngleFunction AngleFunction::affine(double slope, double offset)
{
    return {[slope, offset](double t) { return slope * t + offset; }, [slope](double) { return slope; }};
}

ContactCurve::ContactCurve(AngleFunction mu, AngleFunction beta, AngleFunction gamma, Interval domain,
                           ContactCurveOptions options)
    : mu_(std::move(mu)), beta_(std::move(beta)), gamma_(std::move(gamma)), domain_(domain)
{
    if (!mu_.value || !mu_.derivative || !beta_.value || !beta_.derivative || !gamma_.value || !gamma_.derivative)
        throw InputError("ContactCurve: every angle function needs a value and a derivative");
    if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.hi >= domain_.lo))
        throw InputError("ContactCurve: invalid parameter domain");

    const int samples = std::max(options.validation_samples, 2);
    for (int k = 0; k < samples; ++k) {
        const double t = domain_.lo + domain_.length() * k / (samples - 1);
        const double c = std::cos(mu_.value(t));
        if (std::abs(c) < options.delta) {
            std::ostringstream msg;
            msg << "ContactCurve: cos(mu) = " << c << " below delta = " << options.delta << " at t = " << t;
            throw InputError(msg.str());
        }
        const double defect = contact_identity(t);
        const double scale = std::max(1.0, std::abs(beta_prime(t)) + std::abs(gamma_prime(t)));
        if (!(std::abs(defect) <= options.contact_tol * scale)) {
            std::ostringstream msg;
            msg << "ContactCurve: contact identity beta' cos^2 mu + gamma' sin^2 mu = " << defect << " at t = " << t;
            throw InputError(msg.str());
        }
    }
}

double ContactCurve::contact_identity(double t) const
{
    const double c = std::cos(mu(t));
    const double s = std::sin(mu(t));
    return beta_prime(t) * c * c + gamma_prime(t) * s * s;
}

AmbientVector lift(const ContactCurve& curve, double t)
{
    require_in_domain(curve, t);
    const double mu = curve.mu(t);
    return AmbientVector{Complex(1.0), std::polar(std::cos(mu), curve.beta(t)),
                         std::polar(1.0, curve.gamma(t)) * std::sin(mu)};
}

AmbientVector lift_derivative(const ContactCurve& curve, double t)
{
    require_in_domain(curve, t);
    const double mu = curve.mu(t);
    const double dmu = curve.mu_prime(t);
    const Complex i(0.0, 1.0);
    const Complex eb = std::polar(1.0, curve.beta(t));
    const Complex eg = std::polar(1.0, curve.gamma(t));
    return AmbientVector{Complex(0.0), eb * (i * curve.beta_prime(t) * std::cos(mu) - dmu * std::sin(mu)),
                         eg * (i * curve.gamma_prime(t) * std::sin(mu) + dmu * std::cos(mu))};
}

ContactCurve solve_contact_beta(const AngleFunction& mu, const AngleFunction& gamma, double beta0,
                                std::vector<double> grid, ContactSolveOptions options)
{
    if (grid.size() < 2)
        throw InputError("solve_contact_beta: grid needs at least two samples");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1]))
            throw InputError("solve_contact_beta: grid must be strictly increasing");
    }

    const double delta2 = options.delta * options.delta;
    auto rhs = [&](double t, double) {
        const double c = std::cos(mu.value(t));
        if (!(c * c >= delta2)) {
            std::ostringstream msg;
            msg << "solve_contact_beta: cos^2(mu) = " << c * c << " below delta^2 at t = " << t;
            throw SingularOdeError(msg.str(), t);
        }
        const double tn = std::tan(mu.value(t));
        return -gamma.derivative(t) * tn * tn;
    };

    std::vector<double> beta(grid.size()), slope(grid.size());
    beta[0] = beta0;
    slope[0] = rhs(grid[0], beta0);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        beta[k + 1] = rk4_step(rhs, grid[k], beta[k], grid[k + 1] - grid[k]);
        slope[k + 1] = rhs(grid[k + 1], beta[k + 1]);
    }

    const Interval domain{grid.front(), grid.back()};
    auto table = std::make_shared<HermiteTable>(grid, std::move(beta), std::move(slope));
    AngleFunction beta_fn{[table](double t) { return (*table)(t); },
                          [mu, gamma](double t) {
                              const double tn = std::tan(mu.value(t));
                              return -gamma.derivative(t) * tn * tn;
                          }};
    ContactCurveOptions curve_options;
    curve_options.delta = options.delta;
    return ContactCurve(mu, std::move(beta_fn), gamma, domain, curve_options);
}

bool CurvePatch::contains(std::span<const double> x) const
{
    return x.size() == 1 && curve_.domain().contains(x[0]);
}

AmbientVector CurvePatch::immersion(std::span<const double> x) const
{
    if (x.size() != 1)
        throw InputError("CurvePatch: expected one parameter");
    return lift(curve_, x[0]);
}

AmbientVector CurvePatch::partial(std::span<const double> x, int direction) const
{
    if (x.size() != 1 || direction != 0)
        throw InputError("CurvePatch: expected one parameter and direction 0");
    return lift_derivative(curve_, x[0]);
}

FunctionPatch::FunctionPatch(std::vector<Interval> box, Eigen::Index ambient_size, Map immersion,
                             PartialMap partials)
    : box_(std::move(box)), ambient_size_(ambient_size), immersion_(std::move(immersion)),
      partials_(std::move(partials))
{
    if (box_.empty() || ambient_size_ != static_cast<Eigen::Index>(box_.size()) + 2)
        throw InputError("FunctionPatch: a Legendrian patch in S^{2n-1} has n-1 parameters and n+1 coordinates");
    if (!immersion_ || !partials_)
        throw InputError("FunctionPatch: immersion and partials are required");
}

bool FunctionPatch::contains(std::span<const double> x) const
{
    if (x.size() != box_.size())
        return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!box_[k].contains(x[k]))
            return false;
    }
    return true;
}

void FunctionPatch::check(std::span<const double> x) const
{
    if (x.size() != box_.size())
        throw InputError("FunctionPatch: wrong parameter count");
    if (!contains(x))
        throw DomainError("FunctionPatch: parameters outside the patch box");
}

AmbientVector FunctionPatch::immersion(std::span<const double> x) const
{
    check(x);
    AmbientVector v(immersion_(x));
    if (v.size() != ambient_size_)
        throw InputError("FunctionPatch: immersion returned the wrong dimension");
    return v;
}

AmbientVector FunctionPatch::partial(std::span<const double> x, int direction) const
{
    check(x);
    if (direction < 0 || direction >= dim())
        throw InputError("FunctionPatch: direction out of range");
    AmbientVector v(partials_(x, direction));
    if (v.size() != ambient_size_)
        throw InputError("FunctionPatch: partial returned the wrong dimension");
    return v;
}

double contact_defect(const LegendrianPatch& patch, std::span<const double> x, int direction)
{
    return real_form(patch.partial(x, direction), times_i(patch.immersion(x)));
}

double contact_defect(const ContactCurve& curve, double t)
{
    return real_form(lift_derivative(curve, t), times_i(lift(curve, t)));
}

PatchValidation validate_patch(const LegendrianPatch& patch, std::span<const std::vector<double>> points)
{
    PatchValidation out;
    for (const auto& x : points) {
        const AmbientVector n = patch.immersion(x);
        out.max_null_residual = std::max(out.max_null_residual, std::abs(real_form(n, n)));
        out.max_lift_offset = std::max(out.max_lift_offset, std::abs(n[0] - 1.0));
        for (int k = 0; k < patch.dim(); ++k)
            out.max_contact_defect = std::max(out.max_contact_defect, std::abs(contact_defect(patch, x, k)));
        ++out.samples;
    }
    return out;
}

ContactCurve great_circle_curve(double beta0, double gamma0, Interval domain)
{
    return ContactCurve(AngleFunction::constant(std::numbers::pi / 4), AngleFunction::affine(1.0, beta0),
                        AngleFunction::affine(-1.0, gamma0), domain);
}

ContactCurve tilted_circle_curve(double m, double beta0, double gamma0, Interval domain)
{
    if (!(m > 0.0 && m < std::numbers::pi / 2))
        throw InputError("tilted_circle_curve: m must lie in (0, pi/2)");
    // beta' = 1 forces gamma' = -cos^2(m)/sin^2(m).
    const double cot = std::cos(m) / std::sin(m);
    return ContactCurve(AngleFunction::constant(m), AngleFunction::affine(1.0, beta0),
                        AngleFunction::affine(-cot * cot, gamma0), domain);
}

} // namespace hopf
