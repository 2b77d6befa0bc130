#include "vacfric/reflection.hpp"

#include "vacfric/constants.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace vacfric {

using namespace constants;

namespace {

constexpr int samples = 8;
constexpr double degeneracy_threshold = 1e-7;
constexpr double min_reciprocal_condition = 1e-12;
constexpr double cluster_radius = 1e-4;
constexpr double null_space_tolerance = 1e-6;

Eigen::Matrix3cd cross_matrix(const Eigen::Vector3cd& n) {
    Eigen::Matrix3cd m;
    m << 0.0, -n.z(), n.y(), n.z(), 0.0, -n.x(), -n.y(), n.x(), 0.0;
    return m;
}

cplx determinant(double kappa, double phi, cplx kz, cplx eps, const Matrix3c& mu) {
    return slab_matrix(kappa, phi, kz, eps, mu).partialPivLu().determinant();
}

// Smallest right singular vectors of m, best last.
Eigen::Matrix<cplx, 6, 6> right_singular_vectors(const Matrix6c& m) {
    Eigen::JacobiSVD<Matrix6c> svd(m, Eigen::ComputeFullV);
    return svd.matrixV();
}

Eigen::Vector4cd tangential(const Eigen::Vector3cd& e, const Eigen::Vector3cd& h) {
    return {e.x(), e.y(), h.x(), h.y()};
}

}  // namespace

Matrix3c oriented_permeability(const GyrotropicPermeability& mu, Axis bias_axis) {
    const cplx perp = mu.perp / mu0;
    const cplx gyro = mu.gyro / mu0;
    const cplx par = mu.par / mu0;
    Matrix3c m = Matrix3c::Zero();
    // Cyclic relabelling keeps the handedness of the z-biased tensor.
    int a = 0, b = 1, c = 2;
    if (bias_axis == Axis::x) { a = 1; b = 2; c = 0; }
    if (bias_axis == Axis::y) { a = 2; b = 0; c = 1; }
    m(a, a) = perp;
    m(b, b) = perp;
    m(a, b) = -gyro;
    m(b, a) = gyro;
    m(c, c) = par;
    return m;
}

Matrix6c slab_matrix(double kappa, double phi, cplx kz, cplx eps, const Matrix3c& mu) {
    const Eigen::Vector3cd n{kappa * std::cos(phi), kappa * std::sin(phi), kz};
    const Eigen::Matrix3cd cross = cross_matrix(n);
    Matrix6c m;
    m.topLeftCorner<3, 3>() = eps * Eigen::Matrix3cd::Identity();
    m.topRightCorner<3, 3>() = cross;
    m.bottomLeftCorner<3, 3>() = -cross;
    m.bottomRightCorner<3, 3>() = mu;
    return m;
}

SlabModeSet slab_modes_gyromagnetic(double kappa, double phi, cplx eps, const Matrix3c& mu) {
    const double scale = std::max({kappa, std::sqrt(std::abs(eps) * mu.cwiseAbs().maxCoeff()), 1.0});

    // det M(scale t) is a polynomial in t of degree <= 4; recover it from samples on the unit circle.
    std::array<cplx, samples> values;
    for (int k = 0; k < samples; ++k)
        values[k] = determinant(kappa, phi, scale * std::polar(1.0, 2.0 * pi * k / samples), eps, mu);
    std::array<cplx, samples> coefficient{};
    for (int j = 0; j < samples; ++j) {
        cplx sum = 0.0;
        for (int k = 0; k < samples; ++k) sum += values[k] * std::polar(1.0, -2.0 * pi * j * k / samples);
        coefficient[j] = sum / double(samples);
    }
    const cplx leading = coefficient[4];
    double size = 0.0;
    for (const cplx& c : coefficient) size = std::max(size, std::abs(c));
    if (!(std::abs(leading) > 1e-10 * size))
        throw RootFinderFailure("slab_modes_gyromagnetic: dispersion relation is not quartic");

    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    for (int j = 0; j < 4; ++j) companion(0, j) = -coefficient[3 - j] / leading;
    for (int j = 1; j < 4; ++j) companion(j, j - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw RootFinderFailure("slab_modes_gyromagnetic: eigen-solve failed");

    SlabModeSet set;
    for (int j = 0; j < 4; ++j) {
        cplx t = solver.eigenvalues()[j];
        // Newton polish against the exact determinant; the derivative comes from the recovered polynomial.
        for (int iteration = 0; iteration < 3; ++iteration) {
            const cplx derivative = 4.0 * coefficient[4] * t * t * t + 3.0 * coefficient[3] * t * t +
                                    2.0 * coefficient[2] * t + coefficient[1];
            if (std::abs(derivative) < 1e-8 * size) break;
            const cplx step = determinant(kappa, phi, scale * t, eps, mu) / derivative;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        set.roots[j] = scale * t;
    }

    // Downward modes: decaying towards z -> -inf, or propagating with Re kz < 0 when lossless.
    std::array<int, 4> order{0, 1, 2, 3};
    auto downward_rank = [&](int j) {
        const cplx q = set.roots[j];
        if (std::abs(q.imag()) > 1e-12 * scale) return q.imag() < 0.0 ? 0 : 2;
        return q.real() < 0.0 ? 1 : 2;
    };
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        const int l = downward_rank(lhs), r = downward_rank(rhs);
        if (l != r) return l < r;
        return set.roots[lhs].imag() < set.roots[rhs].imag();
    });
    if (downward_rank(order[1]) == 2)
        throw RootFinderFailure("slab_modes_gyromagnetic: fewer than two downward modes");

    const cplx q1 = set.roots[order[0]];
    const cplx q2 = set.roots[order[1]];
    // A double root with two polarizations leaves a two-dimensional null space at the midpoint; numerics
    // split such a root by up to ~sqrt(machine epsilon), so closeness alone cannot decide it.
    const cplx mean = 0.5 * (q1 + q2);
    const Eigen::JacobiSVD<Matrix6c> midpoint(slab_matrix(kappa, phi, mean, eps, mu), Eigen::ComputeFullV);
    const auto& sigma = midpoint.singularValues();
    set.degenerate = std::abs(q1 - q2) < degeneracy_threshold * scale ||
                     (std::abs(q1 - q2) < cluster_radius * scale && sigma[4] < null_space_tolerance * sigma[0]);
    if (set.degenerate) {
        set.selected[0] = {mean, midpoint.matrixV().col(5)};
        set.selected[1] = {mean, midpoint.matrixV().col(4)};
    } else {
        for (int m = 0; m < 2; ++m) {
            const cplx q = set.roots[order[m]];
            set.selected[m] = {q, right_singular_vectors(slab_matrix(kappa, phi, q, eps, mu)).col(5)};
        }
    }
    for (const auto& mode : set.selected) {
        const Matrix6c m = slab_matrix(kappa, phi, mode.normal, eps, mu);
        const double norm = m.cwiseAbs().maxCoeff();
        set.max_residual = std::max(set.max_residual, (m * mode.field).norm() / norm);
    }
    return set;
}

ReflectionMatrix fresnel_gyromagnetic(double kappa, double phi, cplx eps, const Matrix3c& mu) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("fresnel_gyromagnetic: kappa must be non-negative");
    const SlabModeSet modes = slab_modes_gyromagnetic(kappa, phi, eps, mu);
    const double c = std::cos(phi), s = std::sin(phi);
    const cplx p = vacuum_normal(kappa);
    const Eigen::Vector3cd s_hat{s, -c, 0.0};
    const Eigen::Vector3cd p_in{p * c, p * s, kappa};
    const Eigen::Vector3cd p_out{-p * c, -p * s, kappa};

    Eigen::Matrix4cd system;
    system.col(0) = tangential(s_hat, -p_out);
    system.col(1) = tangential(p_out, s_hat);
    for (int m = 0; m < 2; ++m) {
        const Vector6c& f = modes.selected[m].field;
        system.col(2 + m) = -tangential(f.head<3>(), f.tail<3>());
    }
    Eigen::Matrix<cplx, 4, 2> rhs;
    rhs.col(0) = -tangential(s_hat, -p_in);
    rhs.col(1) = -tangential(p_in, s_hat);

    Eigen::Vector4d column_scale;
    for (int j = 0; j < 4; ++j) {
        column_scale[j] = system.col(j).norm();
        if (!(column_scale[j] > 0.0)) throw SingularBoundaryMatrix("fresnel_gyromagnetic: empty boundary column");
        system.col(j) /= column_scale[j];
    }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(system, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    if (!(sigma[3] > min_reciprocal_condition * sigma[0]))
        throw SingularBoundaryMatrix("fresnel_gyromagnetic: boundary matrix condition number exceeds 1e12");
    const Eigen::Matrix<cplx, 4, 2> solution = svd.solve(rhs);

    ReflectionMatrix r;
    r.ss = solution(0, 0) / column_scale[0];
    r.ps = solution(1, 0) / column_scale[1];
    r.sp = solution(0, 1) / column_scale[0];
    r.pp = solution(1, 1) / column_scale[1];
    return r;
}

}  // namespace vacfric
