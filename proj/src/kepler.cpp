#include "c3b/kepler.hpp"

#include <cmath>
#include <numbers>

namespace c3b {

using std::numbers::pi;

OrbitParams orbit_params(double mu, double e) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
    if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("eccentricity must lie in [0, 1)");
    OrbitParams o;
    o.e = e;
    o.mu = mu;
    o.a = std::cbrt(mu);
    o.p = o.a * (1.0 - e * e);
    o.sigma = std::sqrt(std::sqrt(o.p * mu));
    o.c = std::sqrt(mu * o.p);
    o.T = 2.0 * pi * std::pow(o.a, 1.5) / std::sqrt(mu);
    return o;
}

double radius(const OrbitParams& params, double theta) {
    return params.p / (1.0 + params.e * std::cos(theta));
}

double solve_kepler_equation(double mean, double e) {
    // Reduce to [-pi, pi) and restore the winding afterwards.
    const double turns = std::floor((mean + pi) / (2.0 * pi));
    const double m = mean - 2.0 * pi * turns;

    double ecc_anomaly = e < 0.8 ? m : (m < 0.0 ? -pi : pi);
    for (int iter = 0; iter < 50; ++iter) {
        const double f = ecc_anomaly - e * std::sin(ecc_anomaly) - m;
        if (std::abs(f) < 1e-14) return ecc_anomaly + 2.0 * pi * turns;
        ecc_anomaly -= f / (1.0 - e * std::cos(ecc_anomaly));
    }
    const double f = ecc_anomaly - e * std::sin(ecc_anomaly) - m;
    if (std::abs(f) < 1e-14) return ecc_anomaly + 2.0 * pi * turns;
    throw KeplerConvergenceError("Kepler equation did not converge in 50 Newton steps");
}

KeplerState solve_time_state(const OrbitParams& params, double t) {
    const double e = params.e;
    const double mean = 2.0 * pi * t / params.T;
    const double big_e = solve_kepler_equation(mean, e);

    // Same winding as big_e; the half-angle form keeps theta continuous.
    const double turns = std::floor((big_e + pi) / (2.0 * pi));
    const double reduced = big_e - 2.0 * pi * turns;
    double theta = 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(reduced / 2.0),
                                    std::sqrt(1.0 - e) * std::cos(reduced / 2.0));
    theta += 2.0 * pi * turns;

    KeplerState s;
    s.theta = theta;
    s.r = radius(params, theta);
    s.thetadot = params.c / (s.r * s.r);
    s.rdot = std::sqrt(params.mu / params.p) * e * std::sin(theta);
    return s;
}

}  // namespace c3b
