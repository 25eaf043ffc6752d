#include "c3b/central_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace c3b {

namespace {

constexpr double kCosClamp = 1e-12;

std::array<double, 3> normalize_masses(const std::array<double, 3>& m) {
    for (double mi : m) {
        if (!std::isfinite(mi) || mi <= 0.0) {
            throw std::invalid_argument("masses must be positive and finite");
        }
    }
    const double sum = m[0] + m[1] + m[2];
    // Already-normalized input is left untouched so normalization is idempotent.
    if (std::abs(sum - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
        return m;
    }
    return {m[0] / sum, m[1] / sum, m[2] / sum};
}

// Inner angle opposite `opposite`, adjacent sides b and c.
double law_of_cosines(double opposite, double b, double c) {
    double cos_angle = (b * b + c * c - opposite * opposite) / (2.0 * b * c);
    if (cos_angle > 1.0 && cos_angle <= 1.0 + kCosClamp) cos_angle = 1.0;
    if (cos_angle < -1.0 && cos_angle >= -1.0 - kCosClamp) cos_angle = -1.0;
    return std::acos(std::clamp(cos_angle, -1.0, 1.0));
}

}  // namespace

BodySetup::BodySetup(const std::array<double, 3>& masses, const std::array<double, 3>& charges)
    : masses_(normalize_masses(masses)), charges_(charges) {
    for (double c : charges_) {
        if (!std::isfinite(c)) throw std::invalid_argument("charges must be finite");
    }
}

double DeltaMatrix::operator()(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == 0 && j == 1) return d12;
    if (i == 1 && j == 2) return d23;
    if (i == 0 && j == 2) return d31;
    throw std::out_of_range("delta index pair must be distinct bodies in 0..2");
}

DeltaMatrix delta_matrix(const BodySetup& setup) {
    auto d = [&](int i, int j) { return 1.0 - setup.specific_charge(i) * setup.specific_charge(j); };
    return {d(0, 1), d(1, 2), d(2, 0)};
}

AdmissibilityVerdict admissible(const DeltaMatrix& deltas) {
    const std::array<std::pair<const char*, double>, 3> named{
        {{"delta_12", deltas.d12}, {"delta_23", deltas.d23}, {"delta_31", deltas.d31}}};
    for (const auto& [name, value] : named) {
        if (!(value > 0.0)) {
            return {AdmissibilityFailure::non_positive_delta, std::string(name) + " non-positive"};
        }
    }
    const std::array<double, 3> s{std::cbrt(deltas.d12), std::cbrt(deltas.d23), std::cbrt(deltas.d31)};
    for (int l = 0; l < 3; ++l) {
        const double others = s[(l + 1) % 3] + s[(l + 2) % 3];
        if (!(others > s[l])) {
            return {AdmissibilityFailure::degenerate_triangle,
                    "cube roots of deltas violate the strict triangle inequality (" +
                        std::string(named[l].first) + " side too long)"};
        }
    }
    return {};
}

CentralConfiguration build_configuration(const BodySetup& setup) {
    const DeltaMatrix deltas = delta_matrix(setup);
    if (auto verdict = admissible(deltas); !verdict) throw InadmissibleSetup(verdict);

    // Side opposite body l is proportional to the cube root of the delta of
    // the other two bodies.
    const double s1 = std::cbrt(deltas.d23);
    const double s2 = std::cbrt(deltas.d31);
    const double s3 = std::cbrt(deltas.d12);

    CentralConfiguration cc;
    const double th1 = law_of_cosines(s1, s2, s3);
    const double th2 = law_of_cosines(s2, s1, s3);
    const double th3 = std::numbers::pi - th1 - th2;
    cc.angles = {th1, th2, th3};
    for (double th : cc.angles) {
        if (!(th > kMinAngle)) {
            throw InadmissibleSetup({AdmissibilityFailure::near_collinear,
                                     "configuration is numerically collinear (inner angle below 1e-6)"});
        }
    }

    return configuration_from_angles(cc.angles, setup);
}

CentralConfiguration configuration_from_angles(const std::array<double, 3>& angles, const BodySetup& setup) {
    CentralConfiguration cc;
    cc.angles = angles;
    const double th1 = angles[0], th2 = angles[1], th3 = angles[2];
    const auto& m = setup.masses();
    const double sn1 = std::sin(th1), sn2 = std::sin(th2), sn3 = std::sin(th3);
    const double cs2 = std::cos(th2), cs3 = std::cos(th3);
    const double s23 = std::sin(th2 + th3);

    cc.alpha = std::sqrt(m[1] * m[2] * sn1 * sn1 + m[2] * m[0] * sn2 * sn2 + m[0] * m[1] * sn3 * sn3);
    cc.beta = 36.0 * cc.alpha * cc.alpha;

    const double inv = 1.0 / cc.alpha;
    cc.positions[0] = inv * Vec2(m[1] * cs2 * sn3 - m[2] * sn2 * cs3, (m[1] + m[2]) * sn2 * sn3);
    cc.positions[1] = inv * Vec2(-m[0] * cs2 * sn3 - m[2] * s23, -m[0] * sn2 * sn3);
    cc.positions[2] = inv * Vec2(m[1] * s23 + m[0] * sn2 * cs3, -m[0] * sn2 * sn3);

    cc.mu = potential(cc.positions, setup);
    if (!(cc.mu > 0.0)) {
        throw InadmissibleSetup({AdmissibilityFailure::non_positive_mu, "Kepler parameter mu is not positive"});
    }
    cc.k = std::cbrt(delta_matrix(setup).d12) / (cc.positions[0] - cc.positions[1]).norm();
    return cc;
}

double potential(const std::array<Vec2, 3>& q, const BodySetup& setup) {
    const DeltaMatrix deltas = delta_matrix(setup);
    double u = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            u += setup.mass(i) * setup.mass(j) * deltas(i, j) / (q[i] - q[j]).norm();
        }
    }
    return u;
}

double cc_residual(const CentralConfiguration& config, const BodySetup& setup) {
    const DeltaMatrix deltas = delta_matrix(setup);
    const auto& a = config.positions;
    double moment = 0.0;
    for (int i = 0; i < 3; ++i) moment += setup.mass(i) * a[i].squaredNorm();
    const double lambda = potential(a, setup) / moment;

    double residual = 0.0;
    for (int i = 0; i < 3; ++i) {
        Vec2 grad = Vec2::Zero();
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            const Vec2 d = a[i] - a[j];
            grad -= setup.mass(i) * setup.mass(j) * deltas(i, j) * d / std::pow(d.norm(), 3);
        }
        const Vec2 r = lambda * setup.mass(i) * a[i] + grad;
        residual = std::max(residual, r.cwiseAbs().maxCoeff());
    }
    return residual;
}

const char* to_string(AdmissibilityFailure failure) {
    switch (failure) {
        case AdmissibilityFailure::none: return "none";
        case AdmissibilityFailure::non_positive_delta: return "non_positive_delta";
        case AdmissibilityFailure::degenerate_triangle: return "degenerate_triangle";
        case AdmissibilityFailure::near_collinear: return "near_collinear";
        case AdmissibilityFailure::non_positive_mu: return "non_positive_mu";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const BodySetup& setup) {
    j = nlohmann::json{{"masses", setup.masses()}, {"charges", setup.charges()}};
}

void to_json(nlohmann::json& j, const CentralConfiguration& config) {
    nlohmann::json positions = nlohmann::json::array();
    for (const Vec2& a : config.positions) positions.push_back({a.x(), a.y()});
    j = nlohmann::json{{"angles_rad", config.angles}, {"positions", positions}, {"alpha", config.alpha},
                       {"beta", config.beta},         {"mu", config.mu},         {"k", config.k}};
}

void from_json(const nlohmann::json& j, CentralConfiguration& config) {
    config.angles = j.at("angles_rad").get<std::array<double, 3>>();
    const auto& positions = j.at("positions");
    for (int i = 0; i < 3; ++i) {
        const auto xy = positions.at(i).get<std::array<double, 2>>();
        config.positions[i] = Vec2(xy[0], xy[1]);
    }
    j.at("alpha").get_to(config.alpha);
    j.at("beta").get_to(config.beta);
    j.at("mu").get_to(config.mu);
    j.at("k").get_to(config.k);
}

}  // namespace c3b

c3b::BodySetup nlohmann::adl_serializer<c3b::BodySetup>::from_json(const json& j) {
    return {j.at("masses").get<std::array<double, 3>>(), j.at("charges").get<std::array<double, 3>>()};
}
