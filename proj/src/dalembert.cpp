#include "hopf/dalembert.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "hopf/errors.hpp"

namespace hopf {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string node_label(const ParameterLattice& lattice, std::size_t node)
{
    std::ostringstream out;
    out << "node " << node << " at (";
    const auto p = lattice.point(node);
    for (std::size_t k = 0; k < p.size(); ++k)
        out << (k ? ", " : "") << p[k];
    out << ")";
    return out.str();
}

bool same_branch(Complex a, Complex b)
{
    return (a * std::conj(b)).real() > 0.0;
}

Eigen::MatrixXd jacobian_from_jet(const LiftJet& jet)
{
    const Eigen::Index n = jet.z.size() - 1;
    Eigen::MatrixXd J(2 * n, static_cast<Eigen::Index>(jet.partials.size()));
    for (std::size_t c = 0; c < jet.partials.size(); ++c) {
        const ChartPoint dw = chart_differential(jet.z, jet.partials[c]);
        for (Eigen::Index i = 0; i < n; ++i) {
            J(2 * i, static_cast<Eigen::Index>(c)) = dw[i].real();
            J(2 * i + 1, static_cast<Eigen::Index>(c)) = dw[i].imag();
        }
    }
    return J;
}

} // namespace

ParameterLattice::ParameterLattice(std::vector<LatticeAxis> axes) : axes_(std::move(axes))
{
    if (axes_.empty())
        throw InputError("ParameterLattice: need at least one axis");
    size_ = 1;
    for (const auto& a : axes_) {
        if (a.count < 1 || !std::isfinite(a.lo) || !std::isfinite(a.hi) || a.hi < a.lo)
            throw InputError("ParameterLattice: invalid axis");
        if (a.count > 1 && !(a.hi > a.lo))
            throw InputError("ParameterLattice: empty axis range with count > 1");
        size_ *= static_cast<std::size_t>(a.count);
    }
}

std::vector<int> ParameterLattice::unflatten(std::size_t node) const
{
    std::vector<int> index(axes_.size());
    for (std::size_t k = axes_.size(); k-- > 0;) {
        const auto c = static_cast<std::size_t>(axes_[k].count);
        index[k] = static_cast<int>(node % c);
        node /= c;
    }
    return index;
}

std::size_t ParameterLattice::flatten(std::span<const int> index) const
{
    std::size_t node = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k)
        node = node * static_cast<std::size_t>(axes_[k].count) + static_cast<std::size_t>(index[k]);
    return node;
}

std::vector<double> ParameterLattice::point(std::size_t node) const
{
    const auto index = unflatten(node);
    std::vector<double> x(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k)
        x[k] = axes_[k].at(index[k]);
    return x;
}

std::vector<std::size_t> ParameterLattice::neighbors(std::size_t node) const
{
    auto index = unflatten(node);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        for (int step : {-1, 1}) {
            const int j = index[k] + step;
            if (j < 0 || j >= axes_[k].count)
                continue;
            index[k] = j;
            out.push_back(flatten(index));
            index[k] -= step;
        }
    }
    return out;
}

std::optional<std::size_t> ParameterLattice::nearest(std::span<const double> x) const
{
    if (x.size() != axes_.size())
        throw InputError("ParameterLattice::nearest: wrong parameter count");
    std::vector<int> index(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        const auto& a = axes_[k];
        if (a.count == 1) {
            index[k] = 0;
            continue;
        }
        const double h = a.spacing();
        if (x[k] < a.lo - h || x[k] > a.hi + h)
            return std::nullopt;
        const double f = std::round((x[k] - a.lo) / h);
        index[k] = std::clamp(static_cast<int>(f), 0, a.count - 1);
    }
    return flatten(index);
}

Complex principal_tau(const HopfParams& params, Complex zeta_value)
{
    Complex q = params.tau_constant() / zeta_value;
    // Strip signed zeros so a negative real quotient always maps to +i|q|^{1/2}.
    q = Complex(q.real() + 0.0, q.imag() + 0.0);
    return std::sqrt(q);
}

Complex zeta(const AmbientVector& n1, const AmbientVector& n2)
{
    return herm_form(n1, n2);
}

Complex zeta_explicit_n2(const ContactCurve& first, const ContactCurve& second, double s, double t)
{
    const double mu1 = first.mu(s);
    const double mu2 = second.mu(t);
    return -1.0 + std::polar(std::cos(mu1) * std::cos(mu2), second.beta(t) - first.beta(s)) +
           std::polar(std::sin(mu1) * std::sin(mu2), second.gamma(t) - first.gamma(s));
}

TauField::TauField(const LegendrianPatch& first, const LegendrianPatch& second, const HopfParams& params,
                   ParameterLattice lattice, TauFieldOptions options)
    : lattice_(std::move(lattice)), params_(params)
{
    if (lattice_.dims() != first.dim() + second.dim())
        throw InputError("TauField: lattice dimension must equal the total parameter count");

    const std::size_t count = lattice_.size();
    const auto d1 = static_cast<std::size_t>(first.dim());
    zeta_.resize(count);
    tau_.assign(count, Complex(0.0));
    retained_.assign(count, false);
    component_.assign(count, -1);

    for (std::size_t node = 0; node < count; ++node) {
        const auto x = lattice_.point(node);
        const std::span<const double> xs(x);
        zeta_[node] = hopf::zeta(first.immersion(xs.first(d1)), second.immersion(xs.subspan(d1)));
        retained_[node] = std::abs(zeta_[node]) >= options.zeta_floor;
    }

    auto flood = [&](std::size_t base, int label) {
        tau_[base] = principal_tau(params_, zeta_[base]);
        component_[base] = label;
        std::deque<std::size_t> queue{base};
        while (!queue.empty()) {
            const std::size_t node = queue.front();
            queue.pop_front();
            for (std::size_t nb : lattice_.neighbors(node)) {
                if (!retained_[nb] || component_[nb] >= 0)
                    continue;
                Complex root = principal_tau(params_, zeta_[nb]);
                if (!same_branch(root, tau_[node]))
                    root = -root;
                tau_[nb] = root;
                component_[nb] = label;
                queue.push_back(nb);
            }
        }
    };

    if (options.base_node) {
        const std::size_t base = *options.base_node;
        if (base >= count)
            throw InputError("TauField: base node out of range");
        if (!retained_[base])
            throw BranchObstructionError("TauField: zeta vanishes at the base " + node_label(lattice_, base), base);
        flood(base, components_++);
    }
    for (std::size_t node = 0; node < count; ++node) {
        if (!retained_[node] || component_[node] >= 0)
            continue;
        if (!options.per_component && components_ > 0)
            break;
        flood(node, components_++);
    }

    // Every retained edge inside a component must carry no sign jump.
    for (std::size_t node = 0; node < count; ++node) {
        if (component_[node] < 0)
            continue;
        for (std::size_t nb : lattice_.neighbors(node)) {
            if (nb < node || component_[nb] != component_[node])
                continue;
            if (!same_branch(tau_[node], tau_[nb])) {
                throw BranchObstructionError("TauField: square-root branch jumps sign between " +
                                                 node_label(lattice_, node) + " and " + node_label(lattice_, nb),
                                             node);
            }
        }
    }
}

Complex TauField::tau(std::size_t node) const
{
    if (!retained_.at(node))
        throw BranchObstructionError("TauField: zeta vanishes at " + node_label(lattice_, node), node);
    if (component_[node] < 0)
        throw UnreachableNodeError("TauField: " + node_label(lattice_, node) + " is not connected to the base",
                                   node);
    return tau_[node];
}

Complex TauField::continue_to(std::span<const double> x, Complex zeta_x) const
{
    const auto near = lattice_.nearest(x);
    if (!near)
        throw UnreachableNodeError("TauField: point lies outside the continuation lattice", lattice_.size());

    std::optional<std::size_t> anchor;
    if (retained_[*near] && component_[*near] >= 0) {
        anchor = near;
    } else {
        // Fall back to the closest continued node among the lattice neighbors.
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t nb : lattice_.neighbors(*near)) {
            if (!retained_[nb] || component_[nb] < 0)
                continue;
            const auto p = lattice_.point(nb);
            double dist = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double h = lattice_.axes()[k].spacing();
                const double d = h > 0.0 ? (x[k] - p[k]) / h : 0.0;
                dist += d * d;
            }
            if (dist < best) {
                best = dist;
                anchor = nb;
            }
        }
    }
    if (!anchor) {
        if (!retained_[*near])
            throw BranchObstructionError("TauField: zeta vanishes near " + node_label(lattice_, *near), *near);
        throw UnreachableNodeError("TauField: " + node_label(lattice_, *near) + " is not connected to the base",
                                   *near);
    }
    if (std::abs(zeta_x) == 0.0)
        throw BranchObstructionError("TauField: zeta vanishes at the requested point", *anchor);

    Complex root = principal_tau(params_, zeta_x);
    if (!same_branch(root, tau_[*anchor]))
        root = -root;
    return root;
}

DalembertPatch::DalembertPatch(std::shared_ptr<const LegendrianPatch> first,
                               std::shared_ptr<const LegendrianPatch> second, HopfParams params,
                               ParameterLattice lattice, TauFieldOptions options)
    : first_(std::move(first)), second_(std::move(second)), params_(params),
      tau_field_((first_ && second_ && first_->ambient_size() == second_->ambient_size())
                     ? TauField(*first_, *second_, params_, std::move(lattice), options)
                     : throw InputError("DalembertPatch: both patches must live in the same C^{n+1}"))
{
}

std::span<const double> DalembertPatch::first_part(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != param_count())
        throw InputError("DalembertPatch: expected " + std::to_string(param_count()) + " parameters");
    return x.first(static_cast<std::size_t>(first_->dim()));
}

std::span<const double> DalembertPatch::second_part(std::span<const double> x) const
{
    first_part(x);
    return x.subspan(static_cast<std::size_t>(first_->dim()));
}

bool DalembertPatch::contains(std::span<const double> x) const
{
    return static_cast<int>(x.size()) == param_count() && first_->contains(first_part(x)) &&
           second_->contains(second_part(x));
}

Complex DalembertPatch::zeta_at(std::span<const double> x) const
{
    return hopf::zeta(first_->immersion(first_part(x)), second_->immersion(second_part(x)));
}

ZetaJet DalembertPatch::zeta_jet(std::span<const double> x) const
{
    const auto x1 = first_part(x);
    const auto x2 = second_part(x);
    const AmbientVector n1 = first_->immersion(x1);
    const AmbientVector n2 = second_->immersion(x2);
    ZetaJet jet{hopf::zeta(n1, n2), {}, {}, Eigen::MatrixXcd(first_->dim(), second_->dim())};
    std::vector<AmbientVector> dn1, dn2;
    for (int j = 0; j < first_->dim(); ++j) {
        dn1.push_back(first_->partial(x1, j));
        jet.first.push_back(herm_form(dn1.back(), n2));
    }
    for (int k = 0; k < second_->dim(); ++k) {
        dn2.push_back(second_->partial(x2, k));
        jet.second.push_back(herm_form(n1, dn2.back()));
    }
    for (int j = 0; j < first_->dim(); ++j)
        for (int k = 0; k < second_->dim(); ++k)
            jet.mixed(j, k) = herm_form(dn1[static_cast<std::size_t>(j)], dn2[static_cast<std::size_t>(k)]);
    return jet;
}

Complex DalembertPatch::tau_at(std::span<const double> x) const
{
    return tau_field_.continue_to(x, zeta_at(x));
}

AmbientVector DalembertPatch::ehat0(std::span<const double> x, Complex lambda) const
{
    if (lambda == Complex(0.0))
        throw InputError("DalembertPatch::ehat0: lambda must be nonzero");
    const AmbientVector n1 = first_->immersion(first_part(x));
    const AmbientVector n2 = second_->immersion(second_part(x));
    const Complex tau = tau_field_.continue_to(x, hopf::zeta(n1, n2));
    return std::conj(lambda * tau) * n1 - (tau / lambda) * n2;
}

LiftJet DalembertPatch::lift_jet(std::span<const double> x, double u) const
{
    const auto x1 = first_part(x);
    const auto x2 = second_part(x);
    const AmbientVector n1 = first_->immersion(x1);
    const AmbientVector n2 = second_->immersion(x2);
    const Complex z = hopf::zeta(n1, n2);
    const Complex tau = tau_field_.continue_to(x, z);
    const double lambda = std::exp(u);
    const Complex scale = -kI * params_.r();

    const AmbientVector e0 = std::conj(tau) * lambda * n1 - (tau / lambda) * n2;
    LiftJet jet{scale * e0, e0, {}, z, tau, lambda};

    // tau' = -tau zeta' / (2 zeta), from differentiating tau^2 zeta = const.
    for (int j = 0; j < first_->dim(); ++j) {
        const AmbientVector dn1 = first_->partial(x1, j);
        const Complex dtau = -tau * herm_form(dn1, n2) / (2.0 * z);
        const AmbientVector de0 = lambda * std::conj(dtau) * n1 + lambda * std::conj(tau) * dn1 - (dtau / lambda) * n2;
        jet.partials.push_back(scale * de0);
    }
    for (int k = 0; k < second_->dim(); ++k) {
        const AmbientVector dn2 = second_->partial(x2, k);
        const Complex dtau = -tau * herm_form(n1, dn2) / (2.0 * z);
        const AmbientVector de0 = lambda * std::conj(dtau) * n1 - (dtau / lambda) * n2 - (tau / lambda) * dn2;
        jet.partials.push_back(scale * de0);
    }
    jet.partials.push_back(scale * (lambda * std::conj(tau) * n1 + (tau / lambda) * n2));
    return jet;
}

SurfaceSample DalembertPatch::surface_point(std::span<const double> x, double u, double rank_rtol) const
{
    const LiftJet jet = lift_jet(x, u);
    const Complex c = params_.tau_constant();
    SurfaceSample sample{std::vector<double>(x.begin(), x.end()),
                         u,
                         jet.z,
                         to_ball_chart(jet.z),
                         jet.zeta,
                         jet.tau};
    sample.genericity = n() == 2 ? genericity(x) : std::numeric_limits<double>::quiet_NaN();
    sample.quadric_residual = quadric_residual(jet.z, params_);
    sample.ehat0_residual = real_form(jet.ehat0, jet.ehat0) + 1.0;
    sample.tau_residual = std::abs(jet.tau * jet.tau * jet.zeta - c) / std::abs(c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian_from_jet(jet));
    sample.rank = numeric_rank(svd.singularValues(), rank_rtol);
    return sample;
}

ChartPoint DalembertPatch::boundary_limit(std::span<const double> x, BoundaryEnd end) const
{
    // Confirms the point carries a branch; the limit itself does not depend on it.
    tau_at(x);
    if (end == BoundaryEnd::LambdaToZero)
        return to_sphere_chart(second_->immersion(second_part(x)));
    return to_sphere_chart(first_->immersion(first_part(x)));
}

double DalembertPatch::genericity(std::span<const double> x, DerivativeMode mode, double fd_step) const
{
    if (n() != 2)
        throw InputError("genericity: defined for n = 2 only");
    Complex z, zs, zt, zst;
    if (mode == DerivativeMode::Analytic) {
        const ZetaJet jet = zeta_jet(x);
        z = jet.value;
        zs = jet.first[0];
        zt = jet.second[0];
        zst = jet.mixed(0, 0);
    } else {
        const double h = fd_step;
        auto at = [&](double ds, double dt) {
            const double p[2] = {x[0] + ds, x[1] + dt};
            return zeta_at(p);
        };
        z = zeta_at(x);
        zs = (at(h, 0) - at(-h, 0)) / (2 * h);
        zt = (at(0, h) - at(0, -h)) / (2 * h);
        zst = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
    }
    if (std::abs(z) == 0.0)
        throw BranchObstructionError("genericity: zeta vanishes", 0);
    const double sec = 1.0 / std::cos(params_.phi());
    return (zst - sec * sec * zs * zt / z).imag();
}

Eigen::MatrixXd DalembertPatch::chart_jacobian(std::span<const double> x, double u) const
{
    return jacobian_from_jet(lift_jet(x, u));
}

Eigen::VectorXd DalembertPatch::chart_singular_values(std::span<const double> x, double u) const
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(chart_jacobian(x, u));
    return svd.singularValues();
}

int DalembertPatch::jacobian_rank(std::span<const double> x, double u, double rtol) const
{
    return numeric_rank(chart_singular_values(x, u), rtol);
}

ChartPoint chart_differential(const AmbientVector& z, const AmbientVector& dz)
{
    if (z.size() != dz.size())
        throw InputError("chart_differential: dimension mismatch");
    if (z[0] == Complex(0.0))
        throw ChartError("chart_differential: z0 = 0");
    const Eigen::Index n = z.size() - 1;
    const ChartPoint w = z.coords().tail(n) / z[0];
    return (dz.coords().tail(n) - w * dz[0]) / z[0];
}

int numeric_rank(const Eigen::VectorXd& singular_values, double rtol)
{
    if (singular_values.size() == 0)
        return 0;
    const double top = singular_values.maxCoeff();
    if (!(top > 0.0))
        return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i)
        rank += singular_values[i] > rtol * top ? 1 : 0;
    return rank;
}

} // namespace hopf
