#pragma once

// Legendrian data in the ideal boundary S^{2n-1} of CH^n.
//
// For n = 2 a contact curve is written in angle form
//   w1 = e^{i beta} cos(mu),   w2 = e^{i gamma} sin(mu),
// with null lift n = (1, w1, w2); it is Legendrian iff
//   beta' cos^2(mu) + gamma' sin^2(mu) = 0.
// General n uses LegendrianPatch, an immersion of a box in R^{n-1} into the
// null cone with z0 = 1, validated through <dn, i n> = 0.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hopf/hermitian.hpp"

namespace hopf {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double t) const noexcept { return t >= lo && t <= hi; }
    double length() const noexcept { return hi - lo; }
};

// A real function of one variable together with its first derivative.
struct AngleFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    static AngleFunction constant(double c);
    static AngleFunction affine(double slope, double offset);
};

struct ContactCurveOptions {
    // Refuse curves where cos(mu) drops below delta.
    double delta = 1e-3;
    double contact_tol = 1e-9;
    // Uniform samples used for the construction-time invariant checks.
    int validation_samples = 257;
};

class ContactCurve {
public:
    // Throws InputError if the contact identity or the cos(mu) bound fails
    // on the validation samples.
    ContactCurve(AngleFunction mu, AngleFunction beta, AngleFunction gamma, Interval domain,
                 ContactCurveOptions options = {});

    double mu(double t) const { return mu_.value(t); }
    double mu_prime(double t) const { return mu_.derivative(t); }
    double beta(double t) const { return beta_.value(t); }
    double beta_prime(double t) const { return beta_.derivative(t); }
    double gamma(double t) const { return gamma_.value(t); }
    double gamma_prime(double t) const { return gamma_.derivative(t); }

    const Interval& domain() const noexcept { return domain_; }

    // beta' cos^2(mu) + gamma' sin^2(mu) at t.
    double contact_identity(double t) const;

private:
    AngleFunction mu_;
    AngleFunction beta_;
    AngleFunction gamma_;
    Interval domain_;
};

// (1, e^{i beta} cos mu, e^{i gamma} sin mu). Throws DomainError outside the domain.
AmbientVector lift(const ContactCurve& curve, double t);
AmbientVector lift_derivative(const ContactCurve& curve, double t);

struct ContactSolveOptions {
    double delta = 1e-3;
};

// Integrates beta' = -gamma' tan^2(mu), beta(grid[0]) = beta0, with one
// classical RK4 step per grid interval. Off-grid beta uses cubic Hermite
// interpolation with the exact nodal slopes; beta' is evaluated from the
// right-hand side directly. Throws SingularOdeError where cos^2(mu) < delta^2.
ContactCurve solve_contact_beta(const AngleFunction& mu, const AngleFunction& gamma, double beta0,
                                std::vector<double> grid, ContactSolveOptions options = {});

// Immersion of a box in R^{dim} into the null cone of C^{n+1}, z0 == 1.
class LegendrianPatch {
public:
    virtual ~LegendrianPatch() = default;

    virtual int dim() const = 0;
    virtual Eigen::Index ambient_size() const = 0;
    virtual bool contains(std::span<const double> x) const = 0;
    virtual AmbientVector immersion(std::span<const double> x) const = 0;
    virtual AmbientVector partial(std::span<const double> x, int direction) const = 0;
};

// The n = 2 patch given by the null lift of a contact curve.
class CurvePatch final : public LegendrianPatch {
public:
    explicit CurvePatch(ContactCurve curve) : curve_(std::move(curve)) {}

    int dim() const override { return 1; }
    Eigen::Index ambient_size() const override { return 3; }
    bool contains(std::span<const double> x) const override;
    AmbientVector immersion(std::span<const double> x) const override;
    AmbientVector partial(std::span<const double> x, int direction) const override;

    const ContactCurve& curve() const noexcept { return curve_; }

private:
    ContactCurve curve_;
};

// User-supplied patch for general n. No generation procedure exists for
// Legendrian (n-1)-folds, so these are validated but never synthesized.
class FunctionPatch final : public LegendrianPatch {
public:
    using Map = std::function<Eigen::VectorXcd(std::span<const double>)>;
    using PartialMap = std::function<Eigen::VectorXcd(std::span<const double>, int)>;

    FunctionPatch(std::vector<Interval> box, Eigen::Index ambient_size, Map immersion, PartialMap partials);

    int dim() const override { return static_cast<int>(box_.size()); }
    Eigen::Index ambient_size() const override { return ambient_size_; }
    bool contains(std::span<const double> x) const override;
    AmbientVector immersion(std::span<const double> x) const override;
    AmbientVector partial(std::span<const double> x, int direction) const override;

    const std::vector<Interval>& box() const noexcept { return box_; }

private:
    void check(std::span<const double> x) const;

    std::vector<Interval> box_;
    Eigen::Index ambient_size_;
    Map immersion_;
    PartialMap partials_;
};

// real_form(dn/dx_direction, i n); vanishes iff the patch is Legendrian along
// that direction at x.
double contact_defect(const LegendrianPatch& patch, std::span<const double> x, int direction);
double contact_defect(const ContactCurve& curve, double t);

struct PatchValidation {
    double max_null_residual = 0.0;
    double max_contact_defect = 0.0;
    double max_lift_offset = 0.0; // max |z0 - 1|
    std::size_t samples = 0;
};

PatchValidation validate_patch(const LegendrianPatch& patch, std::span<const std::vector<double>> points);

// Built-in curves.
//   great_circle:  mu = pi/4, beta = t + beta0, gamma = -t + gamma0
//   tilted_circle: mu = m,    beta = t + beta0, gamma = -t cot^2(m) + gamma0
// Both satisfy beta' cos^2 mu + gamma' sin^2 mu = 0 identically.
ContactCurve great_circle_curve(double beta0 = 0.0, double gamma0 = 0.0, Interval domain = {-50.0, 50.0});
ContactCurve tilted_circle_curve(double m, double beta0 = 0.0, double gamma0 = 0.0,
                                 Interval domain = {-50.0, 50.0});

} // namespace hopf
