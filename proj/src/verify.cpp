#include "hopf/verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hopf/errors.hpp"

namespace hopf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string where(std::span<const double> x, double u)
{
    std::ostringstream out;
    out << "(";
    for (double v : x)
        out << v << ", ";
    out << "u=" << u << ")";
    return out.str();
}

double g_norm(const AmbientVector& v)
{
    return std::sqrt(std::max(real_form(v, v), 0.0));
}

// Orthonormal basis of span(vectors) under real_form (positive definite on
// horizontal vectors); modified Gram-Schmidt with one re-orthogonalization pass.
std::vector<AmbientVector> orthonormalize(const std::vector<AmbientVector>& vectors)
{
    std::vector<AmbientVector> basis;
    for (const auto& v : vectors) {
        AmbientVector w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis)
                w -= real_form(q, w) * q;
        const double norm = g_norm(w);
        if (norm > 0.0)
            basis.push_back((1.0 / norm) * w);
    }
    return basis;
}

// Coefficients c with sum_j c_j E_j the g-orthogonal projection of v.
Eigen::VectorXd frame_coefficients(const TangentFrame& frame, const AmbientVector& v)
{
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(frame.vectors.size()));
    for (std::size_t j = 0; j < frame.vectors.size(); ++j)
        rhs[static_cast<Eigen::Index>(j)] = real_form(frame.vectors[j], v);
    return frame.gram.ldlt().solve(rhs);
}

enum class Stencil { Centered, Forward, Backward };

} // namespace

AmbientVector horizontal_project(const AmbientVector& z, const AmbientVector& v, double r)
{
    const AmbientVector iz = times_i(z);
    const double r2 = r * r;
    return v + (real_form(v, z) / r2) * z + (real_form(v, iz) / r2) * iz;
}

TangentFrame tangent_frame(const DalembertPatch& patch, std::span<const double> x, double u, FrameOptions options)
{
    const LiftJet jet = patch.lift_jet(x, u);
    const double r = patch.params().r();

    TangentFrame frame{patch.surface_point(x, u, options.rank_rtol), jet.partials, {}, {}, r};
    for (const auto& p : jet.partials)
        frame.vectors.push_back(horizontal_project(jet.z, p, r));

    const auto m = static_cast<Eigen::Index>(frame.vectors.size());
    frame.gram.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            frame.gram(i, j) = real_form(frame.vectors[static_cast<std::size_t>(i)],
                                         frame.vectors[static_cast<std::size_t>(j)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(frame.gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || !(lo > 0.0) || std::sqrt(lo / hi) < options.rank_rtol) {
        std::ostringstream msg;
        msg << "tangent_frame: rank-deficient frame at " << where(x, u) << " (Gram eigenvalues " << lo << ", " << hi
            << ")";
        throw DegenerateFrameError(msg.str());
    }
    return frame;
}

const char* to_string(NormalOrientation orientation)
{
    return orientation == NormalOrientation::Construction ? "construction" : "reversed";
}

AmbientVector unit_normal(const TangentFrame& frame, NormalOrientation orientation)
{
    const auto basis = orthonormalize(frame.vectors);
    if (basis.size() != frame.vectors.size())
        throw DegenerateFrameError("unit_normal: frame vectors are linearly dependent");

    // The horizontal space is spanned by projections of e_j and i e_j; keep the
    // candidate with the largest component off the tangent span.
    const AmbientVector& z = frame.z();
    std::optional<AmbientVector> best;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        for (Complex c : {Complex(1.0), Complex(0.0, 1.0)}) {
            AmbientVector w = horizontal_project(z, c * AmbientVector::basis(z.size(), j), frame.r);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis)
                    w -= real_form(q, w) * q;
            const double norm = g_norm(w);
            if (norm > best_norm) {
                best_norm = norm;
                best = w;
            }
        }
    }
    if (!best || !(best_norm > 0.0))
        throw DegenerateFrameError("unit_normal: no horizontal direction orthogonal to the frame");
    AmbientVector xi = (1.0 / best_norm) * *best;

    const AmbientVector reference = Complex(0.0, -1.0) * frame.along_u();
    const double pairing = real_form(xi, reference);
    bool flip = false;
    if (std::abs(pairing) > 1e-9 * g_norm(reference)) {
        flip = pairing < 0.0;
    } else {
        // Fallback: first clearly nonzero real coordinate positive.
        for (Eigen::Index j = 0; j < xi.size(); ++j) {
            const double parts[2] = {xi[j].real(), xi[j].imag()};
            bool decided = false;
            for (double p : parts) {
                if (std::abs(p) > 1e-12) {
                    flip = p < 0.0;
                    decided = true;
                    break;
                }
            }
            if (decided)
                break;
        }
    }
    if (flip)
        xi = -xi;
    if (orientation == NormalOrientation::Reversed)
        xi = -xi;
    return xi;
}

double tangency_residual(const TangentFrame& frame, const AmbientVector& v)
{
    const Eigen::VectorXd c = frame_coefficients(frame, v);
    AmbientVector rest = v;
    for (std::size_t j = 0; j < frame.vectors.size(); ++j)
        rest -= c[static_cast<Eigen::Index>(j)] * frame.vectors[j];
    const double norm = g_norm(v);
    return norm > 0.0 ? g_norm(rest) / norm : g_norm(rest);
}

AmbientVector structure_vector(const TangentFrame& frame, const AmbientVector& xi, double tol)
{
    AmbientVector w = Complex(0.0, -1.0) * xi;
    const double residual = tangency_residual(frame, w);
    if (!(residual <= tol)) {
        std::ostringstream msg;
        msg << "structure_vector: W = -i xi is not tangent (residual " << residual << ") at "
            << where(frame.base.params, frame.base.u);
        throw GeometryError(msg.str());
    }
    return w;
}

ShapeOperator shape_operator(const DalembertPatch& patch, std::span<const double> x, double u, ShapeOptions options)
{
    TangentFrame frame = tangent_frame(patch, x, u, options.frame);
    const AmbientVector xi = unit_normal(frame, options.orientation);
    const AmbientVector w = structure_vector(frame, xi);
    const AmbientVector& z = frame.z();
    const double r = frame.r;
    const int params = patch.param_count();
    const auto m = static_cast<Eigen::Index>(frame.vectors.size());

    auto normal_at = [&](std::vector<double> xp, double up) {
        const TangentFrame f = tangent_frame(patch, xp, up, options.frame);
        AmbientVector n = unit_normal(f, options.orientation);
        return real_form(n, xi) < 0.0 ? -n : n;
    };

    auto derivative = [&](int k, double h) {
        auto displaced = [&](double offset) {
            std::vector<double> xp(x.begin(), x.end());
            double up = u;
            if (k < params)
                xp[static_cast<std::size_t>(k)] += offset;
            else
                up += offset;
            return std::make_pair(xp, up);
        };
        auto inside = [&](double offset) {
            return k >= params || patch.contains(displaced(offset).first);
        };
        Stencil stencil = Stencil::Centered;
        if (!inside(h) || !inside(-h))
            stencil = inside(h) && inside(2 * h) ? Stencil::Forward : Stencil::Backward;

        auto eval = [&](double offset) {
            auto [xp, up] = displaced(offset);
            return normal_at(std::move(xp), up);
        };
        switch (stencil) {
        case Stencil::Centered:
            return (1.0 / (2.0 * h)) * (eval(h) - eval(-h));
        case Stencil::Forward:
            return (1.0 / (2.0 * h)) * (-3.0 * xi + 4.0 * eval(h) - eval(2 * h));
        case Stencil::Backward:
        default:
            return (1.0 / (2.0 * h)) * (3.0 * xi - 4.0 * eval(-h) + eval(-2 * h));
        }
    };

    std::vector<AmbientVector> shape_images;
    double used_step = options.fd_step;
    for (int k = 0; k < static_cast<int>(m); ++k) {
        double h = options.fd_step;
        std::optional<AmbientVector> dxi;
        std::string failure;
        for (int attempt = 0; attempt <= options.max_refinements && !dxi; ++attempt, h *= 0.5) {
            try {
                dxi = derivative(k, h);
            } catch (const DegenerateFrameError& e) {
                failure = e.what();
            } catch (const BranchObstructionError& e) {
                failure = e.what();
            } catch (const ChartError& e) {
                failure = e.what();
            }
        }
        if (!dxi)
            throw DegenerateFrameError("shape_operator: degenerate neighbor sample near " + where(x, u) + ": " +
                                       failure);
        used_step = std::min(used_step, h * 2.0);

        // The coordinate curve moves along E_k plus a fiber component c_k iz;
        // xi is S^1-equivariant, so D_{iz} xi = i xi, and D_{E_k} xi follows.
        const AmbientVector& partial = frame.partials[static_cast<std::size_t>(k)];
        const double vertical = -real_form(partial, times_i(z)) / (r * r);
        const AmbientVector along_frame = *dxi - vertical * times_i(xi);
        shape_images.push_back(-horizontal_project(z, along_frame, r));
    }

    Eigen::MatrixXd metric_form(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k)
            metric_form(j, k) = real_form(frame.vectors[static_cast<std::size_t>(j)],
                                          shape_images[static_cast<std::size_t>(k)]);

    const Eigen::LLT<Eigen::MatrixXd> llt(frame.gram);
    const Eigen::MatrixXd matrix = llt.solve(metric_form);
    // L^{-1} B L^{-T}: S in the orthonormal basis induced by the Cholesky factor.
    const Eigen::MatrixXd left = llt.matrixL().solve(metric_form);
    const Eigen::MatrixXd orthonormal = llt.matrixL().solve(left.transpose()).transpose();

    const double scale = metric_form.norm();
    const double asymmetry = scale > 0.0 ? (metric_form - metric_form.transpose()).norm() / scale : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (orthonormal + orthonormal.transpose()),
                                                       Eigen::EigenvaluesOnly);

    return ShapeOperator{std::move(frame), xi, w, matrix, metric_form, orthonormal, asymmetry, eig.eigenvalues(),
                         used_step};
}

HopfCheck hopf_defect(const ShapeOperator& shape, const HopfParams& params, NormalOrientation orientation)
{
    const TangentFrame& frame = shape.frame;
    const Eigen::LLT<Eigen::MatrixXd> llt(frame.gram);
    const Eigen::VectorXd wc = frame_coefficients(frame, shape.structure);
    const Eigen::VectorXd w_on = llt.matrixL().transpose() * wc;
    const Eigen::VectorXd sw_on = shape.orthonormal * w_on;

    HopfCheck check;
    check.orientation = orientation;
    check.asymmetry = shape.asymmetry;
    check.principal_curvatures = shape.principal_curvatures;
    const double ww = w_on.squaredNorm();
    const double norm_s = 1.0 + shape.orthonormal.norm();
    check.measured_alpha = w_on.dot(sw_on) / ww;
    check.defect = (sw_on - check.measured_alpha * w_on).norm() / std::sqrt(ww) / norm_s;
    check.constructed_alpha = orientation == NormalOrientation::Construction ? params.alpha() : -params.alpha();
    check.constructed_defect = (sw_on - check.constructed_alpha * w_on).norm() / std::sqrt(ww) / norm_s;
    return check;
}

HopfCheck hopf_defect(const DalembertPatch& patch, std::span<const double> x, double u, ShapeOptions options)
{
    return hopf_defect(shape_operator(patch, x, u, options), patch.params(), options.orientation);
}

double alignment_angle(const AmbientVector& a, const AmbientVector& b)
{
    const double na = g_norm(a);
    const double nb = g_norm(b);
    if (!(na > 0.0) || !(nb > 0.0))
        throw InputError("alignment_angle: zero vector");
    const AmbientVector ua = (1.0 / na) * a;
    const AmbientVector ub = (1.0 / nb) * b;
    const double cosine = real_form(ua, ub);
    const AmbientVector rejection = ub - cosine * ua;
    return std::atan2(g_norm(rejection), cosine);
}

WCurveCheck w_curve_check(const DalembertPatch& patch, std::span<const double> x, std::span<const double> u_values,
                          FrameOptions options)
{
    WCurveCheck out;
    for (double u : u_values) {
        const TangentFrame frame = tangent_frame(patch, x, u, options);
        const AmbientVector w = structure_vector(frame, unit_normal(frame));
        const double angle = alignment_angle(frame.along_u(), w);
        out.angles.push_back(angle);
        out.max_deviation = std::max(out.max_deviation, std::min(angle, std::numbers::pi - angle));
    }
    return out;
}

SummaryStat VerificationReport::summarize(double SampleRecord::*field, bool generic_only) const
{
    SummaryStat stat;
    double sum = 0.0;
    for (const auto& rec : records) {
        if (generic_only && !rec.generic)
            continue;
        const double v = std::abs(rec.*field);
        if (!std::isfinite(v))
            continue;
        stat.max = std::max(stat.max, v);
        sum += v;
        ++stat.count;
    }
    stat.mean = stat.count ? sum / static_cast<double>(stat.count) : 0.0;
    return stat;
}

std::size_t VerificationReport::generic_count() const
{
    std::size_t count = 0;
    for (const auto& rec : records)
        count += rec.generic ? 1 : 0;
    return count;
}

SampleRecord verify_sample(const DalembertPatch& patch, std::span<const double> x, double u, VerifyOptions options)
{
    SampleRecord rec;
    rec.params.assign(x.begin(), x.end());
    rec.u = u;
    rec.hopf_defect = rec.measured_alpha = rec.constructed_defect = rec.asymmetry = rec.w_alignment = kNaN;

    const SurfaceSample sample = patch.surface_point(x, u, options.shape.frame.rank_rtol);
    rec.zeta = sample.zeta;
    rec.w = sample.w;
    rec.rank = sample.rank;
    rec.genericity = sample.genericity;
    rec.quadric_residual = sample.quadric_residual;
    rec.ehat0_residual = sample.ehat0_residual;
    rec.tau_residual = sample.tau_residual;

    const int full = 2 * patch.n() - 1;
    if (sample.rank < full) {
        rec.note = "rank-deficient";
        return rec;
    }
    rec.generic = patch.n() != 2 || std::abs(sample.genericity) >= options.genericity_floor;
    if (!rec.generic)
        rec.note = "non-generic";

    try {
        const ShapeOperator shape = shape_operator(patch, x, u, options.shape);
        const HopfCheck check = hopf_defect(shape, patch.params(), options.shape.orientation);
        rec.hopf_defect = check.defect;
        rec.measured_alpha = check.measured_alpha;
        rec.constructed_defect = check.constructed_defect;
        rec.asymmetry = check.asymmetry;
        const double angle = alignment_angle(shape.frame.along_u(), shape.structure);
        rec.w_alignment = std::min(angle, std::numbers::pi - angle);
    } catch (const DegenerateFrameError& e) {
        rec.note = std::string("degenerate: ") + e.what();
    } catch (const GeometryError& e) {
        rec.note = std::string("geometry: ") + e.what();
    }
    return rec;
}

} // namespace hopf
