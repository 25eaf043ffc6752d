// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "c3b/beta_range.hpp"
#include "c3b/central_config.hpp"
#include "c3b/dynamics.hpp"
#include "c3b/kepler.hpp"
#include "c3b/monodromy.hpp"
#include "c3b/reduction.hpp"
#include "c3b/scan.hpp"

using namespace c3b;
using std::numbers::pi;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) passed = false;
        notes.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
    }
    void note(const std::string& what) { notes.push_back("        " + what); }
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

struct Sample {
    BodySetup setup;
    CentralConfiguration config;
};

std::vector<Sample> admissible_setups(std::size_t count, std::uint64_t seed, bool charged) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mass(0.1, 1.0), ratio(-0.6, 0.6);
    std::vector<Sample> out;
    while (out.size() < count) {
        std::array<double, 3> m{mass(rng), mass(rng), mass(rng)};
        std::array<double, 3> q{};
        if (charged) {
            for (int i = 0; i < 3; ++i) q[i] = ratio(rng) * m[i];
        }
        const BodySetup setup(m, q);
        try {
            out.push_back({setup, build_configuration(setup)});
        } catch (const InadmissibleSetup&) {
        }
    }
    return out;
}

std::string setup_label(const BodySetup& s) {
    return fmt("m=(%.3f,%.3f,%.3f) e=(%.3f,%.3f,%.3f)", s.mass(0), s.mass(1), s.mass(2), s.charge(0), s.charge(1),
               s.charge(2));
}

std::vector<double> uniform_thetas(int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = 2 * pi * i / n;
    return t;
}

// 1. Stability along e = 0.
Outcome circular_line() {
    Outcome o;
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.99}) {
        const auto c = classify(beta, 0.0);
        o.require(c.kind == StabilityKind::EE, fmt("beta=%.2f: %s (want EE)", beta, to_string(c.kind)));
    }
    for (double beta : {0.75, 1.0}) {
        const auto c = classify(beta, 0.0);
        o.require(c.kind == StabilityKind::Boundary,
                  fmt("beta=%.2f: %s (want BOUNDARY) %s", beta, to_string(c.kind), c.detail.c_str()));
        const double located = transition_bisect(0.0, beta - 0.05, beta + 0.05);
        o.require(std::abs(located - beta) < 1e-9, fmt("bisection near %.2f -> %.12f", beta, located));
    }
    for (double beta : {1.5, 3.0, 6.0, 9.0}) {
        const auto c = classify(beta, 0.0);
        std::string extra = c.detail.empty() ? "" : " (" + c.detail + ")";
        o.require(c.kind == StabilityKind::CS, fmt("beta=%.2f: %s%s (want CS)", beta, to_string(c.kind), extra.c_str()));
        if (c.kind != StabilityKind::CS) {
            const auto mon = fundamental_solution(beta, 0.0);
            for (const auto& z : mon.split.multipliers) o.note(fmt("multiplier %.12g %+.3g i", z.real(), z.imag()));
        }
    }
    return o;
}

// det(x I - J B) at e = 0, expanded by hand: x^4 + (l1 + l2 + 2) x^2 + (l1 - 1)(l2 - 1).
std::array<double, 5> expanded_polynomial(double l1, double l2) {
    return {1.0, 0.0, l1 + l2 + 2.0, 0.0, (l1 - 1.0) * (l2 - 1.0)};
}

// 2. Constant-coefficient oracle.
Outcome exponential_oracle() {
    Outcome o;
    for (double beta : {0.0, 0.25, 0.75, 1.0, 4.0, 9.0}) {
        const EssentialSystem sys(beta, 0.0);
        const auto poly = expanded_polynomial(sys.lambda1(), sys.lambda2());
        const double poly_err = std::max(std::abs(poly[2] - 1.0), std::abs(poly[4] - beta / 4.0));
        const Mat4 generator = sys.generator(0.0);
        double root_err = 0.0;
        const Eigen::EigenSolver<Mat4> eig(generator);
        for (int i = 0; i < 4; ++i) {
            const Complex x = eig.eigenvalues()(i);
            root_err = std::max(root_err, std::abs(x * x * x * x + x * x + beta / 4.0));
        }
        const double diff = (fundamental_solution(beta, 0.0).gamma - (2 * pi * generator).exp()).cwiseAbs().maxCoeff();
        o.require(poly_err < 1e-12 && root_err < 1e-10 && diff < 1e-9,
                  fmt("beta=%.2f: |gamma - expm| = %.2e, quartic coefficient error %.1e, eigenvalue residual %.1e",
                      beta, diff, poly_err, root_err));
    }
    return o;
}

// 3. Curve feet and tangents.
Outcome curve_feet() {
    Outcome o;
    const std::vector<double> eccs{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
    const double tangent = std::sqrt(33.0) / 4.0;
    double slopes[2] = {0.0, 0.0};
    int n = 0;
    for (auto label : {CurveLabel::s, CurveLabel::m, CurveLabel::k}) {
        const Curve curve = trace_curve(label, eccs);
        Curve tail{label, {curve.points.begin() + 1, curve.points.end()}};
        const LineFit fit = fit_line(tail);
        const double target = (label == CurveLabel::k) ? 1.0 : 0.75;
        o.require(std::abs(fit.foot - target) <= 0.005,
                  fmt("curve %s: extrapolated foot %.6f (traced e=0 point %.10f), want %.3f +- 0.005",
                      to_string(label), fit.foot, curve.points[0].beta, target));
        if (label != CurveLabel::k) {
            slopes[n++] = fit.slope;
            o.require(std::abs(std::abs(fit.slope) - tangent) <= 0.1 * tangent,
                      fmt("curve %s: fitted dbeta/de = %+.4f, |.| vs %.4f within 10%%", to_string(label), fit.slope,
                          tangent));
        } else {
            o.note(fmt("curve k: fitted dbeta/de = %+.4f", fit.slope));
        }
    }
    o.require(slopes[0] * slopes[1] < 0.0, fmt("opposite tangent signs (s %+.4f, m %+.4f)", slopes[0], slopes[1]));
    return o;
}

// 4. Region map topology.
Outcome region_topology() {
    Outcome o;
    const auto map = grid_scan(parse_range("0:9:0.02"), parse_range("0:0.9:0.02"));
    const std::vector<StabilityKind> wanted{StabilityKind::EE, StabilityKind::EH, StabilityKind::EE, StabilityKind::HH};
    int good_rows = 0;
    for (std::size_t r = 0; r < map.eccentricities.size(); ++r) {
        const auto row = map.row(r);
        std::vector<StabilityKind> runs;
        std::string pattern;
        bool boundary_ok = true;
        std::size_t i = 0;
        while (i < row.size()) {
            if (row[i] == StabilityKind::Boundary) {
                std::size_t j = i;
                while (j < row.size() && row[j] == StabilityKind::Boundary) ++j;
                // Leading cells sit on the beta = 0 edge.
                if (i > 0 && j < row.size()) {
                    if (row[i - 1] == row[j]) boundary_ok = false;
                }
                pattern += fmt("[B x%zu]", j - i);
                i = j;
                continue;
            }
            const StabilityKind folded = (row[i] == StabilityKind::CS) ? StabilityKind::HH : row[i];
            if (runs.empty() || runs.back() != folded) runs.push_back(folded);
            std::size_t j = i;
            while (j < row.size() && row[j] == row[i]) ++j;
            pattern += fmt("%s(%.2f-%.2f) ", to_string(row[i]), map.betas[i], map.betas[j - 1]);
            i = j;
        }
        const bool ok = runs == wanted && boundary_ok;
        if (ok) {
            ++good_rows;
        } else {
            o.require(false, fmt("e=%.2f: %s", map.eccentricities[r], pattern.c_str()));
        }
    }
    o.note(fmt("%d of %zu rows show EE -> EH -> EE -> {HH|CS}", good_rows, map.eccentricities.size()));
    return o;
}

// 5. Degeneracy at beta = 0.
Outcome degeneracy() {
    Outcome o;
    for (double e : {0.0, 0.3, 0.6}) {
        const int k = nullity(fundamental_solution(0.0, e));
        o.require(k == 3, fmt("beta=0 e=%.1f: nullity %d (want 3)", e, k));
    }
    for (double beta : {0.5, 5.0}) {
        for (double e : {0.0, 0.5}) {
            const int k = nullity(fundamental_solution(beta, e));
            o.require(k == 0, fmt("beta=%.1f e=%.1f: nullity %d (want 0)", beta, e, k));
        }
    }
    return o;
}

// 6. Essential multipliers inside the full 12x12 spectrum.
Outcome full_embedding() {
    Outcome o;
    for (const auto& [setup, config] : admissible_setups(5, 2024, true)) {
        const auto start = std::chrono::steady_clock::now();
        for (double e : {0.0, 0.3, 0.6}) {
            const auto params = orbit_params(config.mu, e);
            const auto report = theorem1_check(full_monodromy(config, setup, params), fundamental_solution(config.beta, e));
            const double det_worst = *std::max_element(report.det_residuals.begin(), report.det_residuals.end());
            const double backward = *std::max_element(report.residuals.begin(), report.residuals.end());
            o.require(det_worst < kEmbeddingTolerance,
                      fmt("%s beta=%.4f e=%.1f: |det(M - l I)|/||M||_1^2 max %.2e", setup_label(setup).c_str(),
                          config.beta, e, det_worst));
            o.note(fmt("backward error sigma_min(M - l I)/||M||_2 max %.2e; largest |l| %.3g", backward,
                       std::abs(report.multipliers_essential[0]) > 1 ? std::abs(report.multipliers_essential[0])
                                                                     : 1 / std::abs(report.multipliers_essential[0])));
            o.require(report.unit_multiplier_count == kUnitMultipliers,
                      fmt("unit multipliers %d (contour %.6f), want 8", report.unit_multiplier_count, report.unit_count));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(seconds < 120.0, fmt("setup runtime %.1f s (< 120 s)", seconds));
    }
    return o;
}

// 7. Reduction identities.
Outcome reduction_identities() {
    Outcome o;
    double basis = 0.0, d23 = 0.0, d14 = 0.0, trace = 0.0, det = 0.0, hzw = 0.0, diag = 0.0;
    const double eccs[4] = {0.0, 0.3, 0.6, 0.9};
    int n = 0;
    for (const auto& [setup, config] : admissible_setups(100, 7, true)) {
        const double e = eccs[n++ % 4];
        const auto params = orbit_params(config.mu, e);
        const Mat6 a = meyer_schmidt_basis(config, setup).matrix();
        basis = std::max(basis, (a.transpose() * mass_matrix(setup) * a - Mat6::Identity()).cwiseAbs().maxCoeff());
        const auto d = shape_coefficients(config, setup);
        d23 = std::max(d23, std::abs(d.d2 - d.d3));
        d14 = std::max(d14, std::abs(d.d1 + d.d4 - 1.0));
        const Mat2 dt = d_tilde(config, setup);
        trace = std::max(trace, std::abs(dt.trace() + 1.0));
        det = std::max(det, std::abs(dt.determinant() - (config.beta / 4.0 - 2.0)));
        for (double theta : {0.0, 1.0, 2.5}) {
            hzw = std::max(hzw, hessian_blocks(config, setup, params, theta).zw.cwiseAbs().maxCoeff());
        }
        diag = std::max(diag, diagonalization_check(config, setup, params, uniform_thetas(64)));
    }
    const double tol = 1e-10;
    o.require(basis < tol, fmt("A^T M A = I: %.2e", basis));
    o.require(d23 < tol, fmt("d2 = d3: %.2e", d23));
    o.require(d14 < tol, fmt("d1 + d4 = 1: %.2e", d14));
    o.require(trace < tol, fmt("trace D~ = -1: %.2e", trace));
    o.require(det < tol, fmt("det D~ = beta/4 - 2: %.2e", det));
    o.require(hzw < tol, fmt("H_zw = 0: %.2e", hzw));
    o.require(diag < tol, fmt("rotated B2 = essential B2 at 64 angles: %.2e", diag));
    return o;
}

// 8. Finite-difference Hessian.
Outcome hessian_oracle() {
    Outcome o;
    HessianResidual worst;
    for (const auto& [setup, config] : admissible_setups(20, 99, true)) {
        const auto r = hessian_fd_check(config, setup, orbit_params(config.mu, 0.3));
        worst.zz = std::max(worst.zz, r.zz);
        worst.zw = std::max(worst.zw, r.zw);
        worst.ww = std::max(worst.ww, r.ww);
    }
    o.require(worst.zz < 1e-6, fmt("U_zz vs (mu/sigma^3) K: %.2e", worst.zz));
    o.require(worst.zw < 1e-6, fmt("U_zw vs 0: %.2e", worst.zw));
    o.require(worst.ww < 1e-6, fmt("U_ww closed form: %.2e", worst.ww));
    return o;
}

// 9. Action identity.
Outcome action_identity() {
    Outcome o;
    std::vector<Sample> setups;
    const BodySetup eq({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    setups.push_back({eq, build_configuration(eq)});
    const BodySetup charged({0.5, 0.3, 0.2}, {0.1, -0.2, 0.05});
    setups.push_back({charged, build_configuration(charged)});
    for (const auto& s : admissible_setups(1, 5, true)) setups.push_back(s);
    for (const auto& [setup, config] : setups) {
        double first = 0.0, spread = 0.0, worst = 0.0;
        for (double e : {0.0, 0.2, 0.5}) {
            const auto r = action_check(config, setup, orbit_params(config.mu, e));
            worst = std::max(worst, r.rel_diff);
            if (e == 0.0) first = r.action_numeric;
            spread = std::max(spread, std::abs(r.action_numeric - first) / std::abs(first));
        }
        o.require(worst < 1e-7, fmt("%s: numeric vs formula rel diff %.2e", setup_label(setup).c_str(), worst));
        o.require(spread < 1e-7, fmt("%s: spread over e in {0, 0.2, 0.5} %.2e", setup_label(setup).c_str(), spread));
    }
    return o;
}

// 10. Range of beta.
Outcome beta_range() {
    Outcome o;
    const auto bm = brute_max(1e-3, 10000);
    o.require(std::abs(bm.max_beta - 9.0) <= 5e-3 && bm.max_beta <= 9.0 + 1e-9, fmt("brute max %.9f", bm.max_beta));
    o.require(bm.boundary_max_beta <= 9.0 + 1e-9, fmt("one-mass-zero max %.9f", bm.boundary_max_beta));
    const auto ids = identity_suite(1000);
    o.require(ids.acute_triangles == 1000 && ids.worst_critical_f < 1e-12,
              fmt("f(m*) = 1/4 on %zu acute triangles: %.2e", ids.acute_triangles, ids.worst_critical_f));
    o.require(ids.min_S > 0.0, fmt("min S %.3e", ids.min_S));
    o.require(ids.worst_heron < 1e-12, fmt("Heron factorization relative error %.2e", ids.worst_heron));
    o.require(ids.worst_product < 1e-12, fmt("l1 l2 l3 - S/4: %.2e", ids.worst_product));
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "e=0 stability line", 5.0, circular_line},
        {2, "constant-coefficient exponential oracle", 0.0, exponential_oracle},
        {3, "curve feet and tangents", 120.0, curve_feet},
        {4, "region map topology at 0.02 resolution", 600.0, region_topology},
        {5, "nullity at beta = 0", 0.0, degeneracy},
        {6, "essential multipliers in the full monodromy", 0.0, full_embedding},
        {7, "reduction identities", 0.0, reduction_identities},
        {8, "finite-difference Hessian", 0.0, hessian_oracle},
        {9, "action identity", 0.0, action_identity},
        {10, "range of beta", 60.0, beta_range},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& ex) {
            out.require(false, std::string("exception: ") + ex.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0) {
            out.require(seconds < c.budget_seconds, fmt("runtime %.1f s (budget %.0f s)", seconds, c.budget_seconds));
        }
        if (!out.passed) ++failed;
        std::printf("[%s] %2d %s (%.1f s)\n", out.passed ? "PASS" : "FAIL", c.id, c.name, seconds);
        for (const auto& line : out.notes) std::printf("        %s\n", line.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
