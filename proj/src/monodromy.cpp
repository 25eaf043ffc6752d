#include "c3b/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "c3b/integrator.hpp"

namespace c3b {

using std::numbers::pi;

Mat4 symplectic_unit4() {
    Mat4 j = Mat4::Zero();
    j.topRightCorner<2, 2>() = -Mat2::Identity();
    j.bottomLeftCorner<2, 2>() = Mat2::Identity();
    return j;
}

double symplectic_defect(const Mat4& gamma) {
    const Mat4 j = symplectic_unit4();
    return (gamma.transpose() * j * gamma - j).cwiseAbs().maxCoeff();
}

double scaled_symplectic_defect(const Mat4& gamma) {
    const double size = gamma.cwiseAbs().maxCoeff();
    return symplectic_defect(gamma) / std::max(1.0, size * size);
}

MultiplierSplit multiplier_split(const Mat4& gamma) {
    MultiplierSplit s;
    s.c3 = -gamma.trace();
    double minors = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) minors += gamma(i, i) * gamma(j, j) - gamma(i, j) * gamma(j, i);
    }
    s.c2 = minors;
    s.discriminant = s.c3 * s.c3 - 4.0 * (s.c2 - 2.0);

    // Cancellation-free roots of rho^2 + c3 rho + (c2 - 2).
    const Complex root = std::sqrt(Complex(s.discriminant, 0.0));
    const Complex q = -0.5 * (Complex(s.c3, 0.0) + (s.c3 >= 0.0 ? root : -root));
    if (std::abs(q) > 0.0) {
        s.rho1 = q;
        s.rho2 = (s.c2 - 2.0) / q;
    } else {
        s.rho1 = s.rho2 = Complex(0.0, 0.0);
    }
    if (s.rho1.real() > s.rho2.real()) std::swap(s.rho1, s.rho2);

    int idx = 0;
    for (const Complex& rho : {s.rho1, s.rho2}) {
        const Complex w = std::sqrt(rho * rho - 4.0);
        s.multipliers[idx++] = 0.5 * (rho + w);
        s.multipliers[idx++] = 0.5 * (rho - w);
    }
    return s;
}

std::size_t essential_steps(double e) { return static_cast<std::size_t>(std::ceil(4000.0 / (1.0 - e))); }

EssentialMonodromy fundamental_solution(double beta, double e, std::size_t steps) {
    const EssentialSystem sys(beta, e);
    if (steps == 0) steps = essential_steps(e);
    auto rhs = [&sys](double theta, const Mat4& y) -> Mat4 { return sys.apply_generator(theta, y); };

    EssentialMonodromy mon;
    mon.beta = beta;
    mon.e = e;
    mon.steps = steps;
    mon.gamma = rk8::integrate(rhs, Mat4(Mat4::Identity()), 0.0, 2.0 * pi, steps);
    if (!mon.gamma.allFinite()) {
        throw IntegrationError("essential system integration produced non-finite values");
    }
    mon.symplectic_defect = symplectic_defect(mon.gamma);
    if (scaled_symplectic_defect(mon.gamma) > kSymplecticTolerance) {
        throw IntegrationError("essential monodromy lost symplecticity");
    }
    mon.split = multiplier_split(mon.gamma);
    return mon;
}

std::vector<Mat4> fundamental_solution_at(double beta, double e, std::span<const double> thetas,
                                          std::size_t steps) {
    const EssentialSystem sys(beta, e);
    if (steps == 0) steps = essential_steps(e);
    auto rhs = [&sys](double theta, const Mat4& y) -> Mat4 { return sys.apply_generator(theta, y); };

    std::vector<Mat4> out;
    out.reserve(thetas.size());
    Mat4 y = Mat4::Identity();
    double t = 0.0;
    const double h_max = 2.0 * pi / static_cast<double>(steps);
    for (double target : thetas) {
        if (target < t) throw std::invalid_argument("checkpoint angles must be ascending");
        const auto n = static_cast<std::size_t>(std::ceil((target - t) / h_max));
        if (n > 0) y = rk8::integrate(rhs, y, t, target, n);
        t = target;
        out.push_back(y);
    }
    return out;
}

const char* to_string(StabilityKind kind) {
    switch (kind) {
        case StabilityKind::EE: return "EE";
        case StabilityKind::EH: return "EH";
        case StabilityKind::HH: return "HH";
        case StabilityKind::CS: return "CS";
        case StabilityKind::Boundary: return "BOUNDARY";
    }
    return "BOUNDARY";
}

StabilityKind stability_kind_from_string(const std::string& name) {
    for (auto kind : {StabilityKind::EE, StabilityKind::EH, StabilityKind::HH, StabilityKind::CS,
                      StabilityKind::Boundary}) {
        if (name == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown stability class '" + name + "'");
}

StabilityClass classify(const MultiplierSplit& split, double tolerance) {
    const double scale = std::max(1.0, split.c3 * split.c3);
    if (split.discriminant < -tolerance * scale) return {StabilityKind::CS, {}};
    if (std::abs(split.discriminant) <= tolerance * scale) {
        const double rho = -0.5 * split.c3;
        if (std::abs(rho) < 2.0 - tolerance) return {StabilityKind::Boundary, "Krein collision on the unit circle"};
        if (std::abs(rho) > 2.0 + tolerance) return {StabilityKind::HH, "double real multiplier pairs"};
        return {StabilityKind::Boundary, rho > 0.0 ? "quadruple multiplier at +1" : "quadruple multiplier at -1"};
    }

    int elliptic = 0, hyperbolic = 0;
    std::string detail;
    for (const Complex& rho : {split.rho1, split.rho2}) {
        const double r = rho.real();
        if (std::abs(r) < 2.0 - tolerance) {
            ++elliptic;
        } else if (std::abs(r) > 2.0 + tolerance) {
            ++hyperbolic;
        } else {
            if (!detail.empty()) detail += "; ";
            detail += r > 0.0 ? "double multiplier at +1" : "double multiplier at -1";
        }
    }
    if (!detail.empty()) return {StabilityKind::Boundary, detail};
    if (elliptic == 2) return {StabilityKind::EE, {}};
    if (hyperbolic == 2) return {StabilityKind::HH, {}};
    return {StabilityKind::EH, {}};
}

StabilityClass classify(const EssentialMonodromy& mon) { return classify(mon.split); }

StabilityClass classify(double beta, double e) { return classify(fundamental_solution(beta, e)); }

int nullity(const Mat4& gamma) {
    const Mat4 shifted = gamma - Mat4::Identity();
    const double scale = shifted.cwiseAbs().maxCoeff();
    if (scale < 1e-6) return 4;
    Eigen::FullPivLU<Mat4> lu(shifted);
    lu.setThreshold(1e-6);
    return 4 - static_cast<int>(lu.rank());
}

int nullity(const EssentialMonodromy& mon) { return nullity(mon.gamma); }

}  // namespace c3b
