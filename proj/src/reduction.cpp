#include "c3b/reduction.hpp"

#include <cmath>

namespace c3b {

Mat2 rotation(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return (Mat2() << c, -s, s, c).finished();
}

Mat2 planar_j() { return (Mat2() << 0.0, -1.0, 1.0, 0.0).finished(); }

Mat6 MeyerSchmidtBasis::matrix() const {
    Mat6 a;
    for (int i = 0; i < 3; ++i) {
        a.block<2, 2>(2 * i, 0) = Mat2::Identity();
        a.block<2, 2>(2 * i, 2) = a_blocks[i];
        a.block<2, 2>(2 * i, 4) = b_blocks[i];
    }
    return a;
}

MeyerSchmidtBasis meyer_schmidt_basis(const CentralConfiguration& config, const BodySetup& setup) {
    MeyerSchmidtBasis basis;
    const Mat2 j = planar_j();
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = config.positions[i];
        basis.a_blocks[i].col(0) = a;
        basis.a_blocks[i].col(1) = j * a;
    }
    const auto& m = setup.masses();
    const double root = std::sqrt(m[0] * m[1] * m[2]);
    for (int i = 0; i < 3; ++i) basis.rho[i] = root / m[i];

    const auto& a = basis.a_blocks;
    basis.b_blocks[0] = basis.rho[0] * (a[2] - a[1]).transpose();
    basis.b_blocks[1] = basis.rho[1] * (a[0] - a[2]).transpose();
    basis.b_blocks[2] = basis.rho[2] * (a[1] - a[0]).transpose();
    return basis;
}

Mat6 mass_matrix(const BodySetup& setup) {
    Mat6 m = Mat6::Zero();
    for (int i = 0; i < 3; ++i) m.block<2, 2>(2 * i, 2 * i) = setup.mass(i) * Mat2::Identity();
    return m;
}

ShapeCoefficients shape_coefficients(const CentralConfiguration& config, const BodySetup& setup) {
    const auto& m = setup.masses();
    const double th2 = config.angles[1], th3 = config.angles[2];
    const double c23 = std::cos(th2 - th3), s23 = std::sin(th2 - th3);
    const double c2 = std::cos(th2), s2 = std::sin(th2);
    const double c3 = std::cos(th3), s3 = std::sin(th3);

    ShapeCoefficients d;
    d.d1 = m[0] * c23 * c23 + m[1] * c2 * c2 + m[2] * c3 * c3;
    d.d2 = m[0] * c23 * s23 + m[1] * c2 * s2 - m[2] * c3 * s3;
    d.d3 = d.d2;
    d.d4 = m[0] * s23 * s23 + m[1] * s2 * s2 + m[2] * s3 * s3;
    return d;
}

HessianBlocks hessian_blocks(const CentralConfiguration& config, const BodySetup& setup,
                             const OrbitParams& params, double theta) {
    HessianBlocks h;
    h.d = shape_coefficients(config, setup);
    const double ec = params.e * std::cos(theta);
    const double denom = 1.0 + ec;
    h.zz << -(2.0 - ec) / denom, 0.0, 0.0, 1.0;
    h.zw.setZero();
    h.ww << 1.0 - 3.0 * h.d.d1 / denom, -3.0 * h.d.d2 / denom, -3.0 * h.d.d3 / denom, 1.0 - 3.0 * h.d.d4 / denom;
    return h;
}

double reduced_potential(const MeyerSchmidtBasis& basis, const BodySetup& setup, const Vec2& z, const Vec2& w) {
    const DeltaMatrix deltas = delta_matrix(setup);
    double u = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec2 sep = (basis.a_blocks[i] - basis.a_blocks[j]) * z + (basis.b_blocks[i] - basis.b_blocks[j]) * w;
            u += setup.mass(i) * setup.mass(j) * deltas(i, j) / sep.norm();
        }
    }
    return u;
}

HessianResidual hessian_fd_check(const CentralConfiguration& config, const BodySetup& setup,
                                 const OrbitParams& params) {
    const MeyerSchmidtBasis basis = meyer_schmidt_basis(config, setup);
    const double sigma = params.sigma;
    const double h = 1e-5 * sigma;

    // Second differences cancel about ten digits, so the potential is summed
    // in extended precision.
    using Vec4L = Eigen::Matrix<long double, 4, 1>;
    const DeltaMatrix deltas = delta_matrix(setup);
    auto u = [&](const Vec4L& x) {
        long double total = 0.0L;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const Eigen::Matrix<long double, 2, 2> da = (basis.a_blocks[i] - basis.a_blocks[j]).cast<long double>();
                const Eigen::Matrix<long double, 2, 2> db = (basis.b_blocks[i] - basis.b_blocks[j]).cast<long double>();
                const Eigen::Matrix<long double, 2, 1> sep = da * x.head<2>() + db * x.tail<2>();
                total += static_cast<long double>(setup.mass(i) * setup.mass(j) * deltas(i, j)) / sep.norm();
            }
        }
        return total;
    };

    const Vec4L x0(sigma, 0.0L, 0.0L, 0.0L);
    const long double hl = h;
    Mat4 fd;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const Vec4L ei = hl * Vec4L::Unit(i);
            const Vec4L ej = hl * Vec4L::Unit(j);
            const long double second =
                (u(x0 + ei + ej) - u(x0 + ei - ej) - u(x0 - ei + ej) + u(x0 - ei - ej)) / (4.0L * hl * hl);
            fd(i, j) = static_cast<double>(second);
            fd(j, i) = fd(i, j);
        }
    }

    const double scale = params.mu / (sigma * sigma * sigma);
    const ShapeCoefficients d = shape_coefficients(config, setup);
    const Mat2 dmat = (Mat2() << d.d1, d.d2, d.d3, d.d4).finished();
    const Mat2 uzz = scale * kHessianK;
    const Mat2 uww = scale * (-Mat2::Identity() + 3.0 * dmat);

    HessianResidual r;
    r.zz = (fd.topLeftCorner<2, 2>() - uzz).cwiseAbs().maxCoeff();
    r.zw = fd.topRightCorner<2, 2>().cwiseAbs().maxCoeff();
    r.ww = (fd.bottomRightCorner<2, 2>() - uww).cwiseAbs().maxCoeff();
    return r;
}

Mat2 d_tilde(const CentralConfiguration& config, const BodySetup& setup) {
    const ShapeCoefficients d = shape_coefficients(config, setup);
    return (Mat2() << 1.0 - 3.0 * d.d1, -3.0 * d.d2, -3.0 * d.d3, 1.0 - 3.0 * d.d4).finished();
}

Mat2 diagonalizing_rotation(const Mat2& d) {
    const Eigen::SelfAdjointEigenSolver<Mat2> eig(d);
    const Eigen::Vector2d values = eig.eigenvalues();  // ascending
    if (std::abs(values(1) - values(0)) < 1e-12) return Mat2::Identity();

    Vec2 first = eig.eigenvectors().col(0).normalized();
    if (std::abs(first.x()) >= 1e-12) {
        if (first.x() < 0.0) first = -first;
    } else if (first.y() < 0.0) {
        first = -first;
    }
    Mat2 r;
    r.col(0) = first;
    r.col(1) = planar_j() * first;
    return r;
}

EssentialSystem::EssentialSystem(double beta, double e) : beta_(beta), e_(e) {
    if (!(beta >= 0.0 && beta <= 9.0)) throw std::invalid_argument("beta must lie in [0, 9]");
    if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("eccentricity must lie in [0, 1)");
    sqrt_9_minus_beta_ = std::sqrt(9.0 - beta);
    lambda1_ = (-1.0 - sqrt_9_minus_beta_) / 2.0;
    lambda2_ = (-1.0 + sqrt_9_minus_beta_) / 2.0;
}

Mat4 EssentialSystem::coefficient(double theta) const {
    const double ec = e_ * std::cos(theta);
    const double denom = 2.0 * (1.0 + ec);
    Mat4 b;
    b << 1.0, 0.0, 0.0, 1.0,
         0.0, 1.0, -1.0, 0.0,
         0.0, -1.0, (2.0 * ec - 1.0 - sqrt_9_minus_beta_) / denom, 0.0,
         1.0, 0.0, 0.0, (2.0 * ec - 1.0 + sqrt_9_minus_beta_) / denom;
    return b;
}

Mat4 EssentialSystem::generator(double theta) const {
    // J B with J = [[0, -I], [I, 0]]: top rows are -(lower half of B), bottom rows the upper half.
    const double ec = e_ * std::cos(theta);
    const double denom = 2.0 * (1.0 + ec);
    const double l1 = (2.0 * ec - 1.0 - sqrt_9_minus_beta_) / denom;
    const double l2 = (2.0 * ec - 1.0 + sqrt_9_minus_beta_) / denom;
    Mat4 g;
    g << 0.0, 1.0, -l1, 0.0,
         -1.0, 0.0, 0.0, -l2,
         1.0, 0.0, 0.0, 1.0,
         0.0, 1.0, -1.0, 0.0;
    return g;
}

Mat4 EssentialSystem::apply_generator(double theta, const Mat4& y) const {
    const double ec = e_ * std::cos(theta);
    const double denom = 2.0 * (1.0 + ec);
    const double l1 = (2.0 * ec - 1.0 - sqrt_9_minus_beta_) / denom;
    const double l2 = (2.0 * ec - 1.0 + sqrt_9_minus_beta_) / denom;
    Mat4 out;
    out.row(0) = y.row(1) - l1 * y.row(2);
    out.row(1) = -y.row(0) - l2 * y.row(3);
    out.row(2) = y.row(0) + y.row(3);
    out.row(3) = y.row(1) - y.row(2);
    return out;
}

EssentialSystem essential_system(double beta, double e) { return EssentialSystem(beta, e); }

EssentialDiagonalization essential_diagonalization(const CentralConfiguration& config, const BodySetup& setup) {
    EssentialDiagonalization out;
    out.d_tilde = d_tilde(config, setup);
    out.rotation = diagonalizing_rotation(out.d_tilde);
    const Mat2 diag = out.rotation.transpose() * out.d_tilde * out.rotation;
    out.lambda1 = diag(0, 0);
    out.lambda2 = diag(1, 1);
    return out;
}

Mat4 coupled_coefficient(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                         double theta) {
    const HessianBlocks h = hessian_blocks(config, setup, params, theta);
    const Mat2 j = planar_j();
    Mat4 b;
    b.topLeftCorner<2, 2>() = Mat2::Identity();
    b.topRightCorner<2, 2>() = -j;
    b.bottomLeftCorner<2, 2>() = j;
    b.bottomRightCorner<2, 2>() = h.ww;
    return b;
}

double diagonalization_check(const CentralConfiguration& config, const BodySetup& setup,
                             const OrbitParams& params, std::span<const double> thetas) {
    const EssentialDiagonalization diag = essential_diagonalization(config, setup);
    Mat4 hat = Mat4::Zero();
    hat.topLeftCorner<2, 2>() = diag.rotation;
    hat.bottomRightCorner<2, 2>() = diag.rotation;

    const double beta = std::clamp(config.beta, 0.0, 9.0);
    const EssentialSystem essential(beta, params.e);
    double worst = 0.0;
    for (double theta : thetas) {
        const Mat4 rotated = hat.transpose() * coupled_coefficient(config, setup, params, theta) * hat;
        worst = std::max(worst, (rotated - essential.coefficient(theta)).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace c3b
