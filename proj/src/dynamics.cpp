#include "c3b/dynamics.hpp"

#include <algorithm>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "c3b/reduction.hpp"

namespace c3b {

using std::numbers::pi;

namespace {

double pair_coupling(const BodySetup& setup, const DeltaMatrix& deltas, int i, int j) {
    return setup.mass(i) * setup.mass(j) * deltas(i, j);
}

nlohmann::json complex_json(const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

Vec12 PhaseState::vector() const {
    Vec12 x;
    for (int i = 0; i < 3; ++i) {
        x.segment<2>(2 * i) = q[i];
        x.segment<2>(6 + 2 * i) = p[i];
    }
    return x;
}

PhaseState PhaseState::from_vector(const Vec12& x) {
    PhaseState s;
    for (int i = 0; i < 3; ++i) {
        s.q[i] = x.segment<2>(2 * i);
        s.p[i] = x.segment<2>(6 + 2 * i);
    }
    return s;
}

std::array<Vec2, 3> forces(const std::array<Vec2, 3>& q, const BodySetup& setup) {
    const DeltaMatrix deltas = delta_matrix(setup);
    std::array<Vec2, 3> f{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec2 d = q[j] - q[i];
            const double r = d.norm();
            if (r < kCollisionDistance) {
                throw CollisionError("bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                     " collide");
            }
            const Vec2 pull = pair_coupling(setup, deltas, i, j) / (r * r * r) * d;
            f[i] += pull;
            f[j] -= pull;
        }
    }
    return f;
}

Vec12 full_rhs(const Vec12& x, const BodySetup& setup) {
    const PhaseState s = PhaseState::from_vector(x);
    const auto f = forces(s.q, setup);
    Vec12 dx;
    for (int i = 0; i < 3; ++i) {
        dx.segment<2>(2 * i) = s.p[i] / setup.mass(i);
        dx.segment<2>(6 + 2 * i) = f[i];
    }
    return dx;
}

PhaseState full_rhs(const PhaseState& state, const BodySetup& setup) {
    return PhaseState::from_vector(full_rhs(state.vector(), setup));
}

Mat12 full_jacobian(const Vec12& x, const BodySetup& setup) {
    const DeltaMatrix deltas = delta_matrix(setup);
    Mat12 jac = Mat12::Zero();
    for (int i = 0; i < 3; ++i) jac.block<2, 2>(2 * i, 6 + 2 * i) = Mat2::Identity() / setup.mass(i);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec2 d = x.segment<2>(2 * j) - x.segment<2>(2 * i);
            const double r = d.norm();
            if (r < kCollisionDistance) throw CollisionError("collision in the linearized flow");
            const double r3 = r * r * r;
            // d/dq_j of the pull on body i
            const Mat2 block =
                pair_coupling(setup, deltas, i, j) * (Mat2::Identity() / r3 - 3.0 * d * d.transpose() / (r3 * r * r));
            jac.block<2, 2>(6 + 2 * i, 2 * j) += block;
            jac.block<2, 2>(6 + 2 * i, 2 * i) -= block;
            jac.block<2, 2>(6 + 2 * j, 2 * i) += block;
            jac.block<2, 2>(6 + 2 * j, 2 * j) -= block;
        }
    }
    return jac;
}

double energy(const Vec12& x, const BodySetup& setup) {
    const PhaseState s = PhaseState::from_vector(x);
    double kinetic = 0.0;
    for (int i = 0; i < 3; ++i) kinetic += s.p[i].squaredNorm() / (2.0 * setup.mass(i));
    return kinetic - potential(s.q, setup);
}

double angular_momentum(const Vec12& x) {
    double l = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec2 q = x.segment<2>(2 * i), p = x.segment<2>(6 + 2 * i);
        l += q.x() * p.y() - q.y() * p.x();
    }
    return l;
}

Vec2 linear_momentum(const Vec12& x) {
    return x.segment<2>(6) + x.segment<2>(8) + x.segment<2>(10);
}

PhaseState elliptic_state(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                          double t) {
    const KeplerState k = solve_time_state(params, t);
    const Mat2 rot = rotation(k.theta);
    const Mat2 j = planar_j();
    PhaseState s;
    for (int i = 0; i < 3; ++i) {
        const Vec2 ra = rot * config.positions[i];
        s.q[i] = k.r * ra;
        s.p[i] = setup.mass(i) * (k.rdot * ra + k.r * k.thetadot * (j * ra));
    }
    return s;
}

double orbit_residual(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                      std::span<const double> times) {
    const double h = 1e-6 * params.T;
    double worst = 0.0;
    for (double t : times) {
        const PhaseState ahead = elliptic_state(config, setup, params, t + h);
        const PhaseState behind = elliptic_state(config, setup, params, t - h);
        const PhaseState now = elliptic_state(config, setup, params, t);
        const auto f = forces(now.q, setup);
        for (int i = 0; i < 3; ++i) {
            const Vec2 pdot = (ahead.p[i] - behind.p[i]) / (2.0 * h);
            worst = std::max(worst, (pdot - f[i]).norm());
        }
    }
    return worst;
}

Mat12 symplectic_unit12() {
    Mat12 j = Mat12::Zero();
    j.topRightCorner<6, 6>().setIdentity();
    j.bottomLeftCorner<6, 6>() = -Eigen::Matrix<double, 6, 6>::Identity();
    return j;
}

std::size_t full_steps(double e) {
    return static_cast<std::size_t>(std::ceil(4000.0 / std::pow(1.0 - e, 1.5)));
}

FullMonodromy full_monodromy(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params,
                             std::size_t steps) {
    if (steps == 0) steps = full_steps(params.e);
    const Vec12 x0 = elliptic_state(config, setup, params, 0.0).vector();
    auto field = [&setup](const Vec12& x) { return full_rhs(x, setup); };
    auto jac = [&setup](const Vec12& x) { return full_jacobian(x, setup); };
    const VariationalResult<12> run = variational_flow<12>(field, jac, x0, params.T, steps);
    if (!run.flow.allFinite() || !run.state.allFinite()) {
        throw IntegrationError("full variational integration produced non-finite values");
    }

    FullMonodromy out;
    out.m = run.flow;
    out.period = params.T;
    out.steps = steps;
    const double e0 = energy(x0, setup);
    out.energy_drift = std::abs(energy(run.state, setup) - e0) / std::abs(e0);
    const Mat12 j = symplectic_unit12();
    out.symplectic_defect = (out.m.transpose() * j * out.m - j).cwiseAbs().maxCoeff();
    out.closure_error = (run.state - x0).cwiseAbs().maxCoeff();
    out.momentum_drift = (linear_momentum(run.state) - linear_momentum(x0)).cwiseAbs().maxCoeff();
    out.angular_momentum_drift = std::abs(angular_momentum(run.state) - angular_momentum(x0));

    if (out.symplectic_defect > kFullSymplecticTolerance) {
        throw IntegrationError("full monodromy symplectic defect " + std::to_string(out.symplectic_defect) +
                               " exceeds 1e-7");
    }
    if (out.energy_drift > kEnergyDriftTolerance) {
        throw IntegrationError("relative energy drift " + std::to_string(out.energy_drift) + " exceeds 1e-9");
    }
    return out;
}

double contour_root_count(const Mat12& m, Complex centre, double radius, int points) {
    using CMat = Eigen::Matrix<Complex, 12, 12>;
    const CMat mc = m.cast<Complex>();
    auto char_poly = [&](Complex z) {
        CMat shifted = mc;
        shifted.diagonal().array() -= z;
        return Eigen::PartialPivLU<CMat>(shifted).determinant();
    };
    double winding = 0.0;
    Complex prev = char_poly(centre + radius);
    for (int k = 1; k <= points; ++k) {
        const double phi = 2.0 * pi * k / points;
        const Complex cur = char_poly(centre + radius * std::polar(1.0, phi));
        winding += std::arg(cur / prev);
        prev = cur;
    }
    return winding / (2.0 * pi);
}

Theorem1Report theorem1_check(const FullMonodromy& full, const EssentialMonodromy& essential) {
    Theorem1Report report;
    const Eigen::EigenSolver<Mat12> eig(full.m, false);
    for (int i = 0; i < 12; ++i) report.multipliers_full.push_back(eig.eigenvalues()(i));
    std::sort(report.multipliers_full.begin(), report.multipliers_full.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    using CMat = Eigen::Matrix<Complex, 12, 12>;
    const double norm1 = full.m.cwiseAbs().colwise().sum().maxCoeff();
    const double norm2 = Eigen::JacobiSVD<Mat12>(full.m).singularValues()(0);
    bool ok = true;
    std::string offenders;
    for (int i = 0; i < 4; ++i) {
        const Complex lambda = essential.split.multipliers[i];
        report.multipliers_essential[i] = lambda;
        CMat shifted = full.m.cast<Complex>();
        shifted.diagonal().array() -= lambda;
        report.det_residuals[i] = std::abs(Eigen::PartialPivLU<CMat>(shifted).determinant()) / (norm1 * norm1);
        const Eigen::JacobiSVD<CMat> svd(shifted);
        report.residuals[i] = svd.singularValues()(11) / norm2;
        if (!(report.residuals[i] < kEmbeddingTolerance)) {
            ok = false;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s(%.6g%+.6gi: %.3g)", offenders.empty() ? "" : ", ", lambda.real(),
                          lambda.imag(), report.residuals[i]);
            offenders += buf;
        }
    }

    report.unit_count = contour_root_count(full.m, Complex(1.0, 0.0), kUnitContourRadius);
    report.unit_multiplier_count = static_cast<int>(std::lround(report.unit_count));
    const bool units_ok = std::abs(report.unit_count - kUnitMultipliers) < 0.5;

    report.passed = ok && units_ok;
    if (!ok) report.message = "essential multipliers missing from the full spectrum: " + offenders;
    if (!units_ok) {
        if (!report.message.empty()) report.message += "; ";
        report.message += "found " + std::to_string(report.unit_multiplier_count) + " unit multipliers, expected 8";
    }
    return report;
}

ActionReport action_check(const CentralConfiguration& config, const BodySetup& setup, const OrbitParams& params) {
    if (std::abs(params.T - 2.0 * pi) > 1e-12) throw std::invalid_argument("action check needs period 2 pi");
    const DeltaMatrix deltas = delta_matrix(setup);

    auto integrand = [&](double t) {
        const PhaseState s = elliptic_state(config, setup, params, t);
        double value = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const Vec2 dv = s.p[i] / setup.mass(i) - s.p[j] / setup.mass(j);
                const double sep = (s.q[i] - s.q[j]).norm();
                value += setup.mass(i) * setup.mass(j) * (0.5 * dv.squaredNorm() + deltas(i, j) / sep);
            }
        }
        return value;
    };

    using Rule = boost::math::quadrature::gauss<double, 8>;
    const double width = params.T / kActionPanels;
    double total = 0.0;
    for (int k = 0; k < kActionPanels; ++k) {
        total += Rule::integrate(integrand, k * width, (k + 1) * width);
    }

    ActionReport report;
    report.action_numeric = total;
    double weights = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) weights += setup.mass(i) * setup.mass(j) * std::pow(deltas(i, j), 2.0 / 3.0);
    }
    report.action_formula = 3.0 * pi * weights;
    report.rel_diff = std::abs(report.action_numeric - report.action_formula) / std::abs(report.action_formula);
    return report;
}

void to_json(nlohmann::json& j, const Theorem1Report& report) {
    nlohmann::json full = nlohmann::json::array(), essential = nlohmann::json::array();
    for (const auto& z : report.multipliers_full) full.push_back(complex_json(z));
    for (const auto& z : report.multipliers_essential) essential.push_back(complex_json(z));
    j = nlohmann::json{{"multipliers_full", full},
                       {"multipliers_essential", essential},
                       {"residuals", report.residuals},
                       {"det_residuals", report.det_residuals},
                       {"unit_multiplier_count", report.unit_multiplier_count},
                       {"unit_count_raw", report.unit_count},
                       {"passed", report.passed}};
    if (!report.message.empty()) j["message"] = report.message;
}

void to_json(nlohmann::json& j, const ActionReport& report) {
    j = nlohmann::json{{"action_numeric", report.action_numeric},
                       {"action_formula", report.action_formula},
                       {"rel_diff", report.rel_diff},
                       {"winding", report.winding}};
}

}  // namespace c3b
