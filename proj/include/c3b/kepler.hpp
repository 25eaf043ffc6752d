#pragma once

#include <stdexcept>

namespace c3b {

/// Elliptic Kepler orbit with period normalized to 2*pi.
struct OrbitParams {
    double e = 0.0;      ///< eccentricity, [0, 1)
    double p = 1.0;      ///< semi-latus rectum
    double a = 1.0;      ///< semi-major axis
    double mu = 1.0;     ///< gravitational parameter
    double sigma = 1.0;  ///< (p mu)^{1/4}
    double c = 1.0;      ///< angular momentum r^2 dtheta/dt
    double T = 0.0;      ///< period
};

/// Chooses a = mu^{1/3} so that the period is exactly 2*pi.
/// Throws std::invalid_argument unless mu > 0 and 0 <= e < 1.
OrbitParams orbit_params(double mu, double e);

/// r(theta) = p / (1 + e cos theta).
double radius(const OrbitParams& params, double theta);

struct KeplerState {
    double r = 0.0;
    double theta = 0.0;  ///< true anomaly, continuous in t (not wrapped)
    double rdot = 0.0;
    double thetadot = 0.0;
};

class KeplerConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State at time t, with t = 0 at perihelion.
KeplerState solve_time_state(const OrbitParams& params, double t);

/// Eccentric anomaly for mean anomaly `mean` (any real), Newton iteration.
double solve_kepler_equation(double mean, double e);

}  // namespace c3b
