#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace c3b {

/// Masses on the unit simplex.
struct SimplexPoint {
    std::array<double, 3> m{};

    /// Throws std::invalid_argument unless each entry is in [0, 1] and the
    /// sum is 1 to 1e-14.
    static SimplexPoint make(double m1, double m2, double m3);
};

/// Inner angles of a triangle with their squared sines.
struct TriangleAngles {
    std::array<double, 3> theta{};
    std::array<double, 3> lambda{};  ///< sin^2 theta_i

    /// Throws std::invalid_argument unless each angle is in (0, pi) and the
    /// angles sum to pi to 1e-12.
    static TriangleAngles make(double t1, double t2, double t3);
};

/// lambda1 m2 m3 + lambda2 m3 m1 + lambda3 m1 m2; beta = 36 f.
double f_value(const SimplexPoint& m, const TriangleAngles& angles);

/// S = 2 (l1 l2 + l2 l3 + l3 l1) - (l1^2 + l2^2 + l3^2).
double heron_S(const TriangleAngles& angles);

/// (a+b+c)(a+b-c)(a+c-b)(b+c-a) / 16 with a = 2 sin theta_1 etc. (unit
/// circumradius); equals heron_S.
double heron_factorized(const TriangleAngles& angles);

struct CriticalMasses {
    double S = 0.0;
    std::array<double, 3> raw{};        ///< m*_i = lambda_i (lambda_j + lambda_k - lambda_i) / S
    std::optional<SimplexPoint> masses;  ///< set when every m*_i is positive
    std::string rejection;
};

/// Stationary point of f on the simplex for fixed angles. Rejects (as a
/// value) when some m*_i <= 1e-12, i.e. the triangle is not acute.
CriticalMasses critical_masses(const TriangleAngles& angles);

/// Angles drawn uniformly from the angle simplex (Dirichlet(1,1,1) on theta / pi).
std::vector<TriangleAngles> sample_angles(std::size_t count, std::uint64_t seed);

struct BruteMax {
    double max_beta = 0.0;
    SimplexPoint argmax_masses;
    TriangleAngles argmax_angles;
    double boundary_max_beta = 0.0;  ///< over the edges where one mass vanishes
    SimplexPoint boundary_argmax_masses;
    TriangleAngles boundary_argmax_angles;
};

/// Maximizes 36 f over the mass grid {i h} crossed with sampled angles.
/// Requires 0 < grid_step <= 1e-2.
BruteMax brute_max(double grid_step, std::size_t angle_samples, std::uint64_t seed = 1, unsigned jobs = 0);

struct BetaSample {
    TriangleAngles angles;  ///< lambda may be zero at the collinear end
    SimplexPoint masses;
    double beta = 0.0;
};

/// Equal masses with angles (pi - 2u, u, u), u from 0 (collinear) to pi/3
/// (equilateral); beta runs continuously from 0 to 9.
std::vector<BetaSample> beta_path(std::size_t points);

/// Header theta1,theta2,theta3,m1,m2,m3,beta.
void write_beta_csv(std::ostream& out, const std::vector<BetaSample>& samples);

struct IdentityReport {
    std::size_t acute_triangles = 0;
    double worst_critical_f = 0.0;   ///< |f(m*) - 1/4|
    double worst_product = 0.0;      ///< |l1 l2 l3 - S/4|
    double worst_heron = 0.0;        ///< |S - factorized| / factorized over the acute triangles
    double min_S = 0.0;
    double max_random_beta = 0.0;    ///< over random (m, angles)
    double min_random_beta = 0.0;
};

/// Checks the closed-form identities on `count` random acute triangles and
/// the bounds 0 <= 36 f <= 9 on `count` random (m, angles) pairs.
IdentityReport identity_suite(std::size_t count, std::uint64_t seed = 7);

}  // namespace c3b
