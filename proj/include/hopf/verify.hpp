#pragma once

// Numerical check that a d'Alembert patch is a Hopf hypersurface.
//
// Everything is computed upstairs on the quadric Q with the flat derivative of
// C^{n+1}: tangent vectors of the hypersurface in CH^n are represented by their
// horizontal lifts (real-orthogonal to z and iz), the unit normal xi is the
// horizontal direction orthogonal to the tangent frame, W = -i xi, and
//   S X = -hor(D_X xi).
// Because pi : Q -> CH^n is a semi-Riemannian submersion, the horizontal part of
// the flat derivative of a horizontal lift is the lift of the Levi-Civita
// derivative downstairs, so no Christoffel symbols are needed.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hopf/dalembert.hpp"

namespace hopf {

// v + (<v,z>/r^2) z + (<v,iz>/r^2) iz
AmbientVector horizontal_project(const AmbientVector& z, const AmbientVector& v, double r);

struct FrameOptions {
    // Frames whose Gram matrix has sqrt(min eig / max eig) below this are degenerate.
    double rank_rtol = 1e-7;
};

struct TangentFrame {
    SurfaceSample base;
    // Raw coordinate partials dz/dx_k and dz/du.
    std::vector<AmbientVector> partials;
    // Horizontal projections E_k of the partials; the last one is E_u.
    std::vector<AmbientVector> vectors;
    Eigen::MatrixXd gram;
    double r = 1.0;

    const AmbientVector& z() const noexcept { return base.z; }
    const AmbientVector& along_u() const { return vectors.back(); }
};

TangentFrame tangent_frame(const DalembertPatch& patch, std::span<const double> x, double u,
                           FrameOptions options = {});

// Construction: xi is oriented so that <xi, -i E_u> > 0, i.e. W = -i xi points
// against increasing u. With this orientation the Hopf principal curvature
// comes out as +(2/r) sin(phi).
enum class NormalOrientation { Construction, Reversed };

const char* to_string(NormalOrientation orientation);

AmbientVector unit_normal(const TangentFrame& frame, NormalOrientation orientation = NormalOrientation::Construction);

// Norm of the part of a horizontal vector v orthogonal to span(E_k), relative to |v|.
double tangency_residual(const TangentFrame& frame, const AmbientVector& v);

// W = -i xi. Throws GeometryError if W is not tangent within `tol`.
AmbientVector structure_vector(const TangentFrame& frame, const AmbientVector& xi, double tol = 1e-8);

struct ShapeOptions {
    double fd_step = 1e-5;
    NormalOrientation orientation = NormalOrientation::Construction;
    FrameOptions frame;
    // Step halvings tried when a displaced sample is degenerate.
    int max_refinements = 3;
};

struct ShapeOperator {
    TangentFrame frame;
    AmbientVector normal;
    AmbientVector structure;
    // S in the frame basis: S E_k = sum_j matrix(j, k) E_j.
    Eigen::MatrixXd matrix;
    // G S, symmetric for a self-adjoint S.
    Eigen::MatrixXd metric_form;
    // S in a g-orthonormal basis of the tangent space.
    Eigen::MatrixXd orthonormal;
    // |G S - (G S)^T| / |G S|
    double asymmetry = 0.0;
    Eigen::VectorXd principal_curvatures;
    double fd_step = 0.0;
};

ShapeOperator shape_operator(const DalembertPatch& patch, std::span<const double> x, double u,
                             ShapeOptions options = {});

struct HopfCheck {
    // |S W - measured_alpha W|_g / (1 + |S|_g)
    double defect = 0.0;
    // g(SW, W) / g(W, W)
    double measured_alpha = 0.0;
    // (2/r) sin(phi), signed for the Construction orientation
    double constructed_alpha = 0.0;
    // |S W - constructed_alpha W|_g / (1 + |S|_g), signs matched to the orientation
    double constructed_defect = 0.0;
    double asymmetry = 0.0;
    Eigen::VectorXd principal_curvatures;
    NormalOrientation orientation = NormalOrientation::Construction;
};

HopfCheck hopf_defect(const ShapeOperator& shape, const HopfParams& params, NormalOrientation orientation);
HopfCheck hopf_defect(const DalembertPatch& patch, std::span<const double> x, double u, ShapeOptions options = {});

// Angle in [0, pi] between two horizontal vectors under the real form.
double alignment_angle(const AmbientVector& a, const AmbientVector& b);

struct WCurveCheck {
    // max over u of min(angle, pi - angle) between E_u and W
    double max_deviation = 0.0;
    std::vector<double> angles;
};

WCurveCheck w_curve_check(const DalembertPatch& patch, std::span<const double> x, std::span<const double> u_values,
                          FrameOptions options = {});

struct SampleRecord {
    std::vector<double> params;
    double u = 0.0;
    Complex zeta;
    ChartPoint w;
    int rank = 0;
    double genericity = 0.0;
    double quadric_residual = 0.0;
    double ehat0_residual = 0.0;
    double tau_residual = 0.0;
    // NaN when the shape operator was not evaluated.
    double hopf_defect = 0.0;
    double measured_alpha = 0.0;
    double constructed_defect = 0.0;
    double asymmetry = 0.0;
    double w_alignment = 0.0;
    // Counted by the Hopf acceptance: full rank and |genericity| above the floor.
    bool generic = false;
    // Empty when the sample was fully evaluated.
    std::string note;
};

struct SummaryStat {
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

struct VerificationReport {
    std::vector<SampleRecord> records;

    // Summary of |field| over records where it is finite (and, if
    // `generic_only`, over generic records).
    SummaryStat summarize(double SampleRecord::*field, bool generic_only = false) const;
    std::size_t generic_count() const;
};

struct VerifyOptions {
    ShapeOptions shape;
    double genericity_floor = 1e-6;
};

SampleRecord verify_sample(const DalembertPatch& patch, std::span<const double> x, double u,
                           VerifyOptions options = {});

} // namespace hopf
