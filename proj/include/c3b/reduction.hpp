#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "c3b/central_config.hpp"
#include "c3b/kepler.hpp"

namespace c3b {

using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// 2x2 rotation by angle phi.
Mat2 rotation(double phi);

/// Planar symplectic unit [[0, -1], [1, 0]].
Mat2 planar_j();

/// Central-configuration coordinates: Q = A X with X = (g, z, w) and
/// A = [[I, A_i, B_i]]_{i=1..3}.
struct MeyerSchmidtBasis {
    std::array<Mat2, 3> a_blocks;  ///< A_i = (a_i, J a_i)
    std::array<Mat2, 3> b_blocks;  ///< B_i
    std::array<double, 3> rho{};   ///< sqrt(m1 m2 m3) / m_i

    Mat6 matrix() const;
};

MeyerSchmidtBasis meyer_schmidt_basis(const CentralConfiguration& config, const BodySetup& setup);

/// Mass-weighted 6x6 matrix diag(m1 I, m2 I, m3 I).
Mat6 mass_matrix(const BodySetup& setup);

/// Shape coefficients of the w-block Hessian. d2 == d3 always; d1 + d4 == 1
/// for normalized masses.
struct ShapeCoefficients {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
};

ShapeCoefficients shape_coefficients(const CentralConfiguration& config, const BodySetup& setup);

inline const Mat2 kHessianK = (Mat2() << 2.0, 0.0, 0.0, -1.0).finished();
inline const Mat2 kHessianK1 = (Mat2() << 1.0, 0.0, 0.0, 0.0).finished();

/// Second derivatives of the true-anomaly Hamiltonian at the elliptic
/// solution, split into Kepler (z) and shape (w) variables.
struct HessianBlocks {
    Mat2 zz;
    Mat2 zw;
    Mat2 ww;
    ShapeCoefficients d;
};

HessianBlocks hessian_blocks(const CentralConfiguration& config, const BodySetup& setup,
                             const OrbitParams& params, double theta);

/// Deviation of finite-difference second derivatives of U(z, w) from the
/// closed forms at (z, w) = ((sigma, 0), 0).
struct HessianResidual {
    double zz = 0.0;
    double zw = 0.0;
    double ww = 0.0;

    double max() const { return std::max({zz, zw, ww}); }
};

/// Potential in (z, w) coordinates, sum m_i m_j delta_ij / |(A_i-A_j) z + (B_i-B_j) w|.
double reduced_potential(const MeyerSchmidtBasis& basis, const BodySetup& setup, const Vec2& z, const Vec2& w);

/// Central differences with step h = 1e-5 * sigma.
HessianResidual hessian_fd_check(const CentralConfiguration& config, const BodySetup& setup,
                                 const OrbitParams& params);

/// D~ = [[1 - 3 d1, -3 d2], [-3 d3, 1 - 3 d4]].
Mat2 d_tilde(const CentralConfiguration& config, const BodySetup& setup);

/// Rotation in SO(2) whose columns are eigenvectors of the symmetric matrix
/// `d` for ascending eigenvalues. Returns the identity when the eigenvalues
/// coincide to 1e-12.
Mat2 diagonalizing_rotation(const Mat2& d);

/// Essential 4x4 linear Hamiltonian system, which depends on the bodies
/// only through beta.
class EssentialSystem {
public:
    /// Throws std::invalid_argument unless beta in [0, 9] and e in [0, 1).
    EssentialSystem(double beta, double e);

    double beta() const { return beta_; }
    double e() const { return e_; }
    double lambda1() const { return lambda1_; }
    double lambda2() const { return lambda2_; }

    /// Symmetric coefficient matrix B2bar(theta).
    Mat4 coefficient(double theta) const;

    /// J * B2bar(theta) with J = [[0, -I], [I, 0]].
    Mat4 generator(double theta) const;

    /// generator(theta) * y without forming the generator.
    Mat4 apply_generator(double theta, const Mat4& y) const;

private:
    double beta_;
    double e_;
    double sqrt_9_minus_beta_;
    double lambda1_;
    double lambda2_;
};

/// Setup-specific data behind the essential system: D~ and its rotation.
struct EssentialDiagonalization {
    Mat2 d_tilde;
    Mat2 rotation;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

EssentialSystem essential_system(double beta, double e);

EssentialDiagonalization essential_diagonalization(const CentralConfiguration& config, const BodySetup& setup);

/// Undiagonalized coefficient B2(theta) built from the shape coefficients.
Mat4 coupled_coefficient(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                         double theta);

/// max over theta of ||diag(R,R)^T B2(theta) diag(R,R) - B2bar(theta)||_max.
double diagonalization_check(const CentralConfiguration& config, const BodySetup& setup,
                             const OrbitParams& params, std::span<const double> thetas);

}  // namespace c3b
