#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "c3b/central_config.hpp"
#include "c3b/integrator.hpp"
#include "c3b/kepler.hpp"
#include "c3b/monodromy.hpp"

namespace c3b {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Positions and momenta of the three bodies. Vector layout is
/// (q1, q2, q3, p1, p2, p3).
struct PhaseState {
    std::array<Vec2, 3> q{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
    std::array<Vec2, 3> p{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};

    Vec12 vector() const;
    static PhaseState from_vector(const Vec12& x);
};

class CollisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kCollisionDistance = 1e-12;

/// Hamiltonian vector field (q' = p / m, p' = grad U). Throws CollisionError
/// when two bodies come closer than kCollisionDistance.
Vec12 full_rhs(const Vec12& x, const BodySetup& setup);
PhaseState full_rhs(const PhaseState& state, const BodySetup& setup);

/// Jacobian of full_rhs with respect to the state.
Mat12 full_jacobian(const Vec12& x, const BodySetup& setup);

/// grad_q U, the force on each body.
std::array<Vec2, 3> forces(const std::array<Vec2, 3>& q, const BodySetup& setup);

double energy(const Vec12& x, const BodySetup& setup);
double angular_momentum(const Vec12& x);
Vec2 linear_momentum(const Vec12& x);

/// Homographic solution q_i(t) = r(t) R(theta(t)) a_i with p_i = m_i q_i'.
PhaseState elliptic_state(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                          double t);

/// Largest |p_i' - grad_i U| over the sample times, with p' from central
/// differences of elliptic_state (step 1e-6 T).
double orbit_residual(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                      std::span<const double> times);

/// Result of integrating x' = f(x) together with Phi' = Df(x) Phi, Phi(0) = I.
template <int N>
struct VariationalResult {
    Eigen::Matrix<double, N, 1> state;
    Eigen::Matrix<double, N, N> flow;
};

/// Generic fixed-step variational integration over [0, t_end].
template <int N, class Field, class Jacobian>
VariationalResult<N> variational_flow(const Field& field, const Jacobian& jacobian,
                                      const Eigen::Matrix<double, N, 1>& x0, double t_end, std::size_t steps) {
    using Aug = Eigen::Matrix<double, N, N + 1>;
    auto rhs = [&](double, const Aug& y) -> Aug {
        const Eigen::Matrix<double, N, 1> x = y.col(0);
        Aug out;
        out.col(0) = field(x);
        out.template rightCols<N>() = jacobian(x) * y.template rightCols<N>();
        return out;
    };
    Aug y;
    y.col(0) = x0;
    y.template rightCols<N>().setIdentity();
    y = rk8::integrate(rhs, y, 0.0, t_end, steps);
    return {y.col(0), y.template rightCols<N>()};
}

/// Standard 2n x 2n symplectic unit for (q, p) ordering.
Mat12 symplectic_unit12();

/// Period map of the linearized flow along the homographic solution.
struct FullMonodromy {
    Mat12 m;
    double period = 0.0;
    std::size_t steps = 0;
    double energy_drift = 0.0;        ///< |E(T) - E(0)| / |E(0)|
    double symplectic_defect = 0.0;   ///< ||M^T J M - J||_max
    double closure_error = 0.0;       ///< ||x(T) - x(0)||_max
    double momentum_drift = 0.0;      ///< linear momentum, max-norm
    double angular_momentum_drift = 0.0;
};

/// Step count for one period: ceil(4000 (1 - e)^{-3/2}).
std::size_t full_steps(double e);

inline constexpr double kFullSymplecticTolerance = 1e-7;
inline constexpr double kEnergyDriftTolerance = 1e-9;

/// Throws IntegrationError when the symplectic defect exceeds 1e-7 or the
/// relative energy drift exceeds 1e-9.
FullMonodromy full_monodromy(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                             std::size_t steps = 0);

struct Theorem1Report {
    std::vector<Complex> multipliers_full;
    std::array<Complex, 4> multipliers_essential{};
    std::array<double, 4> residuals{};      ///< sigma_min(M - l I) / ||M||_2
    std::array<double, 4> det_residuals{};  ///< |det(M - l I)| / ||M||_1^2
    double unit_count = 0.0;            ///< winding number around 1
    int unit_multiplier_count = 0;
    bool passed = false;
    std::string message;
};

inline constexpr double kEmbeddingTolerance = 1e-5;
inline constexpr double kUnitContourRadius = 1e-3;
inline constexpr int kUnitMultipliers = 8;

/// Roots of det(M - z I) inside |z - centre| = radius via the argument
/// principle on `points` samples; returns the raw winding sum.
double contour_root_count(const Mat12& m, Complex centre, double radius, int points = 512);

/// An essential multiplier l counts as embedded when sigma_min(M - l I),
/// i.e. |det(M - l I)| over the product of the other eleven singular values,
/// is below 1e-5 ||M||_2.
Theorem1Report theorem1_check(const FullMonodromy& full, const EssentialMonodromy& essential);

struct ActionReport {
    double action_numeric = 0.0;
    double action_formula = 0.0;
    double rel_diff = 0.0;
    std::array<int, 3> winding{1, 1, 1};  ///< loop-space class, documentation only
};

/// Panels of the 8-node Gauss-Legendre rule used for the action integral.
inline constexpr int kActionPanels = 64;

/// Action of the homographic solution over one period (which must be 2 pi)
/// against 3 pi sum m_i m_j delta_ij^{2/3}.
ActionReport action_check(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params);

void to_json(nlohmann::json& j, const Theorem1Report& report);
void to_json(nlohmann::json& j, const ActionReport& report);

}  // namespace c3b
