#pragma once

// Explicit parametrization of a Hopf hypersurface in CH^n from two Legendrian
// patches N1, N2 of the ideal boundary:
//
//   zeta = <n1, n2>_C,     tau^2 zeta = 1/2 (1 - i tan phi),
//   e0   = conj(lambda tau) n1 - (tau / lambda) n2,      <e0, e0> = -1,
//   z    = -i r e0  in Q = {<z,z> = -r^2},   lambda = e^u > 0.
//
// tau needs a square-root branch that is continuous over the parameter
// domain; TauField carries it across a lattice by continuation.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hopf/hermitian.hpp"
#include "hopf/legendrian.hpp"

namespace hopf {

struct LatticeAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double at(int i) const noexcept { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
    double spacing() const noexcept { return count == 1 ? 0.0 : (hi - lo) / (count - 1); }
};

// Regular lattice over the product of the N1 and N2 parameter boxes, flattened
// row-major (last axis fastest).
class ParameterLattice {
public:
    explicit ParameterLattice(std::vector<LatticeAxis> axes);

    int dims() const noexcept { return static_cast<int>(axes_.size()); }
    std::size_t size() const noexcept { return size_; }
    const std::vector<LatticeAxis>& axes() const noexcept { return axes_; }

    std::vector<int> unflatten(std::size_t node) const;
    std::size_t flatten(std::span<const int> index) const;
    std::vector<double> point(std::size_t node) const;

    // Nodes differing by one step along a single axis, in axis order (-, +).
    std::vector<std::size_t> neighbors(std::size_t node) const;

    // Nearest node by per-axis rounding; nullopt if x lies more than one
    // spacing outside the lattice box.
    std::optional<std::size_t> nearest(std::span<const double> x) const;

private:
    std::vector<LatticeAxis> axes_;
    std::size_t size_ = 0;
};

struct TauFieldOptions {
    // Nodes with |zeta| below this are masked.
    double zeta_floor = 1e-8;
    // Continuation base; defaults to the first retained node in row-major order.
    std::optional<std::size_t> base_node;
    // Continue every connected component of retained nodes from its own base.
    // When false, only the base component is continued and the rest are unreachable.
    bool per_component = true;
};

// Principal square root of 1/2 (1 - i tan phi) / zeta, the branch convention
// at a continuation base.
Complex principal_tau(const HopfParams& params, Complex zeta);

Complex zeta(const AmbientVector& n1, const AmbientVector& n2);

// -1 + e^{i(beta2 - beta1)} cos mu1 cos mu2 + e^{i(gamma2 - gamma1)} sin mu1 sin mu2
Complex zeta_explicit_n2(const ContactCurve& first, const ContactCurve& second, double s, double t);

// Continuous branch of tau over a lattice, computed once and immutable afterwards.
class TauField {
public:
    TauField(const LegendrianPatch& first, const LegendrianPatch& second, const HopfParams& params,
             ParameterLattice lattice, TauFieldOptions options = {});

    const ParameterLattice& lattice() const noexcept { return lattice_; }

    bool retained(std::size_t node) const { return retained_.at(node); }
    bool reached(std::size_t node) const { return component_.at(node) >= 0; }
    Complex zeta(std::size_t node) const { return zeta_.at(node); }
    int component(std::size_t node) const { return component_.at(node); }
    int component_count() const noexcept { return components_; }

    // Throws BranchObstructionError on masked nodes, UnreachableNodeError on
    // nodes outside every continued component.
    Complex tau(std::size_t node) const;

    // Root of tau^2 = c / zeta_x on the branch of the lattice node nearest x.
    Complex continue_to(std::span<const double> x, Complex zeta_x) const;

private:
    ParameterLattice lattice_;
    HopfParams params_;
    std::vector<Complex> zeta_;
    std::vector<Complex> tau_;
    std::vector<bool> retained_;
    std::vector<int> component_;
    int components_ = 0;
};

// zeta and its derivatives along the N1 parameters (first) and N2 parameters (second).
struct ZetaJet {
    Complex value;
    std::vector<Complex> first;
    std::vector<Complex> second;
    // mixed(j, k) = d^2 zeta / dx1_j dx2_k
    Eigen::MatrixXcd mixed;
};

// z together with its analytic partials: N1 parameters, N2 parameters, then u.
struct LiftJet {
    AmbientVector z;
    AmbientVector ehat0;
    std::vector<AmbientVector> partials;
    Complex zeta;
    Complex tau;
    double lambda;
};

struct SurfaceSample {
    std::vector<double> params;
    double u = 0.0;
    AmbientVector z;
    ChartPoint w;
    Complex zeta;
    Complex tau;
    // NaN unless n = 2.
    double genericity = 0.0;
    double quadric_residual = 0.0;
    // real_form(e0, e0) + 1
    double ehat0_residual = 0.0;
    // |tau^2 zeta - c| / |c|
    double tau_residual = 0.0;
    int rank = 0;

    double s() const { return params.at(0); }
    double t() const { return params.at(1); }
};

enum class BoundaryEnd { LambdaToZero, LambdaToInfinity };
enum class DerivativeMode { Analytic, FiniteDifference };

class DalembertPatch {
public:
    DalembertPatch(std::shared_ptr<const LegendrianPatch> first, std::shared_ptr<const LegendrianPatch> second,
                   HopfParams params, ParameterLattice lattice, TauFieldOptions options = {});

    // Complex dimension n of CH^n.
    int n() const noexcept { return static_cast<int>(first_->ambient_size()) - 1; }
    int param_count() const noexcept { return first_->dim() + second_->dim(); }

    const HopfParams& params() const noexcept { return params_; }
    const LegendrianPatch& first() const noexcept { return *first_; }
    const LegendrianPatch& second() const noexcept { return *second_; }
    const TauField& tau_field() const noexcept { return tau_field_; }

    bool contains(std::span<const double> x) const;

    Complex zeta_at(std::span<const double> x) const;
    ZetaJet zeta_jet(std::span<const double> x) const;
    Complex tau_at(std::span<const double> x) const;

    AmbientVector ehat0(std::span<const double> x, Complex lambda) const;
    LiftJet lift_jet(std::span<const double> x, double u) const;
    SurfaceSample surface_point(std::span<const double> x, double u, double rank_rtol = 1e-7) const;

    ChartPoint boundary_limit(std::span<const double> x, BoundaryEnd end) const;

    // Im(zeta_st - sec^2(phi) zeta_s zeta_t / zeta); n = 2 only.
    double genericity(std::span<const double> x, DerivativeMode mode = DerivativeMode::Analytic,
                      double fd_step = 1e-5) const;

    // Real 2n x (2n-1) Jacobian of (x, u) -> w, rows (Re w1, Im w1, Re w2, ...).
    Eigen::MatrixXd chart_jacobian(std::span<const double> x, double u) const;
    Eigen::VectorXd chart_singular_values(std::span<const double> x, double u) const;
    int jacobian_rank(std::span<const double> x, double u, double rtol = 1e-7) const;

private:
    std::span<const double> first_part(std::span<const double> x) const;
    std::span<const double> second_part(std::span<const double> x) const;

    std::shared_ptr<const LegendrianPatch> first_;
    std::shared_ptr<const LegendrianPatch> second_;
    HopfParams params_;
    TauField tau_field_;
};

// Differential of w = (z1/z0, ..., zn/z0) applied to dz.
ChartPoint chart_differential(const AmbientVector& z, const AmbientVector& dz);

// Count of singular values above rtol * largest.
int numeric_rank(const Eigen::VectorXd& singular_values, double rtol);

} // namespace hopf
