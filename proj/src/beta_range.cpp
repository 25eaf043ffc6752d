#include "c3b/beta_range.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "c3b/parallel.hpp"

namespace c3b {

using std::numbers::pi;

namespace {

// Angles without validation, for the collinear end of the beta path.
TriangleAngles raw_angles(double t1, double t2, double t3) {
    TriangleAngles a;
    a.theta = {t1, t2, t3};
    for (int i = 0; i < 3; ++i) a.lambda[i] = std::sin(a.theta[i]) * std::sin(a.theta[i]);
    return a;
}

struct EdgeBest {
    double value = -1.0;
    double m1 = 0.0, m2 = 0.0;
};

}  // namespace

SimplexPoint SimplexPoint::make(double m1, double m2, double m3) {
    for (double x : {m1, m2, m3}) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("simplex coordinates must lie in [0, 1]");
    }
    if (std::abs(m1 + m2 + m3 - 1.0) > 1e-14) throw std::invalid_argument("simplex coordinates must sum to 1");
    return SimplexPoint{{m1, m2, m3}};
}

TriangleAngles TriangleAngles::make(double t1, double t2, double t3) {
    for (double t : {t1, t2, t3}) {
        if (!(t > 0.0 && t < pi)) throw std::invalid_argument("triangle angles must lie in (0, pi)");
    }
    if (std::abs(t1 + t2 + t3 - pi) > 1e-12) throw std::invalid_argument("triangle angles must sum to pi");
    return raw_angles(t1, t2, t3);
}

double f_value(const SimplexPoint& m, const TriangleAngles& angles) {
    const auto& l = angles.lambda;
    return l[0] * m.m[1] * m.m[2] + l[1] * m.m[2] * m.m[0] + l[2] * m.m[0] * m.m[1];
}

double heron_S(const TriangleAngles& angles) {
    const auto& l = angles.lambda;
    return 2.0 * (l[0] * l[1] + l[1] * l[2] + l[2] * l[0]) - (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
}

double heron_factorized(const TriangleAngles& angles) {
    const double a = 2.0 * std::sin(angles.theta[0]);
    const double b = 2.0 * std::sin(angles.theta[1]);
    const double c = 2.0 * std::sin(angles.theta[2]);
    return (a + b + c) * (a + b - c) * (a + c - b) * (b + c - a) / 16.0;
}

CriticalMasses critical_masses(const TriangleAngles& angles) {
    CriticalMasses out;
    const auto& l = angles.lambda;
    out.S = heron_S(angles);
    if (!(out.S > 0.0)) {
        out.rejection = "degenerate triangle (S <= 0)";
        return out;
    }
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        out.raw[i] = l[i] * (l[j] + l[k] - l[i]) / out.S;
    }
    for (int i = 0; i < 3; ++i) {
        if (out.raw[i] <= 1e-12) {
            if (!out.rejection.empty()) out.rejection += "; ";
            out.rejection += "m" + std::to_string(i + 1) + "* <= 0 (angle " + std::to_string(i + 1) + " not acute)";
        }
    }
    if (out.rejection.empty()) {
        // Renormalize away the last-bit rounding of the closed form.
        const double sum = out.raw[0] + out.raw[1] + out.raw[2];
        SimplexPoint m;
        m.m = {out.raw[0] / sum, out.raw[1] / sum, out.raw[2] / sum};
        out.masses = m;
    }
    return out;
}

std::vector<TriangleAngles> sample_angles(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> unit(1.0);
    std::vector<TriangleAngles> out;
    out.reserve(count);
    while (out.size() < count) {
        const double x = unit(rng), y = unit(rng), z = unit(rng);
        const double sum = x + y + z;
        const double t1 = pi * x / sum, t2 = pi * y / sum;
        const double t3 = pi - t1 - t2;
        if (t1 <= 0.0 || t2 <= 0.0 || t3 <= 0.0) continue;
        out.push_back(raw_angles(t1, t2, t3));
    }
    return out;
}

BruteMax brute_max(double grid_step, std::size_t angle_samples, std::uint64_t seed, unsigned jobs) {
    if (!(grid_step > 0.0 && grid_step <= 1e-2)) throw std::invalid_argument("grid step must lie in (0, 1e-2]");
    if (angle_samples == 0) throw std::invalid_argument("need at least one angle sample");
    const auto cells = static_cast<long>(std::llround(1.0 / grid_step));
    const std::vector<TriangleAngles> angles = sample_angles(angle_samples, seed);

    struct Best {
        double f = -1.0;
        double m1 = 0.0, m2 = 0.0;
        EdgeBest edge;
    };
    std::vector<Best> best(angles.size());

    parallel_for(angles.size(), jobs, [&](std::size_t s) {
        const auto& l = angles[s].lambda;
        Best b;
        for (long i = 0; i <= cells; ++i) {
            const double m1 = static_cast<double>(i) / static_cast<double>(cells);
            const double rest = 1.0 - m1;
            // f as a quadratic in m2 with m3 = rest - m2.
            const double qa = -l[0];
            const double qb = l[0] * rest - l[1] * m1 + l[2] * m1;
            const double qc = l[1] * rest * m1;
            double row_best = -1.0;
            long row_arg = 0;
            for (long j = 0; j <= cells - i; ++j) {
                const double m2 = static_cast<double>(j) / static_cast<double>(cells);
                const double v = (qa * m2 + qb) * m2 + qc;
                if (v > row_best) {
                    row_best = v;
                    row_arg = j;
                }
            }
            if (row_best > b.f) {
                b.f = row_best;
                b.m1 = m1;
                b.m2 = static_cast<double>(row_arg) / static_cast<double>(cells);
            }
        }
        // One vanishing mass: f = lambda_k m (1 - m) on the opposite edge.
        for (int k = 0; k < 3; ++k) {
            for (long i = 0; i <= cells; ++i) {
                const double m = static_cast<double>(i) / static_cast<double>(cells);
                const double v = l[k] * m * (1.0 - m);
                if (v > b.edge.value) {
                    b.edge.value = v;
                    std::array<double, 3> ms{};
                    ms[(k + 1) % 3] = m;
                    ms[(k + 2) % 3] = 1.0 - m;
                    b.edge.m1 = ms[0];
                    b.edge.m2 = ms[1];
                }
            }
        }
        best[s] = b;
    });

    BruteMax out;
    std::size_t arg = 0, edge_arg = 0;
    for (std::size_t s = 1; s < best.size(); ++s) {
        if (best[s].f > best[arg].f) arg = s;
        if (best[s].edge.value > best[edge_arg].edge.value) edge_arg = s;
    }
    auto simplex = [](double m1, double m2) {
        SimplexPoint p;
        p.m = {m1, m2, std::max(0.0, 1.0 - m1 - m2)};
        return p;
    };
    out.max_beta = 36.0 * best[arg].f;
    out.argmax_masses = simplex(best[arg].m1, best[arg].m2);
    out.argmax_angles = angles[arg];
    out.boundary_max_beta = 36.0 * best[edge_arg].edge.value;
    out.boundary_argmax_masses = simplex(best[edge_arg].edge.m1, best[edge_arg].edge.m2);
    out.boundary_argmax_angles = angles[edge_arg];
    return out;
}

std::vector<BetaSample> beta_path(std::size_t points) {
    if (points < 2) throw std::invalid_argument("beta path needs at least two points");
    std::vector<BetaSample> out;
    out.reserve(points);
    const SimplexPoint equal{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    for (std::size_t i = 0; i < points; ++i) {
        const double u = (pi / 3.0) * static_cast<double>(i) / static_cast<double>(points - 1);
        BetaSample s;
        s.angles = raw_angles(pi - 2.0 * u, u, u);
        s.masses = equal;
        s.beta = 36.0 * f_value(equal, s.angles);
        out.push_back(s);
    }
    return out;
}

void write_beta_csv(std::ostream& out, const std::vector<BetaSample>& samples) {
    out << "theta1,theta2,theta3,m1,m2,m3,beta\n";
    char buf[256];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.angles.theta[0],
                      s.angles.theta[1], s.angles.theta[2], s.masses.m[0], s.masses.m[1], s.masses.m[2], s.beta);
        out << buf;
    }
}

IdentityReport identity_suite(std::size_t count, std::uint64_t seed) {
    IdentityReport r;
    r.min_S = std::numeric_limits<double>::infinity();
    std::uint64_t draw_seed = seed;
    while (r.acute_triangles < count) {
        for (const auto& angles : sample_angles(count, draw_seed++)) {
            if (r.acute_triangles == count) break;
            const CriticalMasses cm = critical_masses(angles);
            r.min_S = std::min(r.min_S, cm.S);
            const auto& l = angles.lambda;
            r.worst_product = std::max(r.worst_product, std::abs(l[0] * l[1] * l[2] - cm.S / 4.0));
            if (!cm.masses) continue;
            ++r.acute_triangles;
            const double factorized = heron_factorized(angles);
            r.worst_heron = std::max(r.worst_heron, std::abs(cm.S - factorized) / factorized);
            r.worst_critical_f = std::max(r.worst_critical_f, std::abs(f_value(*cm.masses, angles) - 0.25));
        }
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::exponential_distribution<double> unit(1.0);
    const auto angles = sample_angles(count, seed + 1000003);
    r.min_random_beta = std::numeric_limits<double>::infinity();
    r.max_random_beta = -std::numeric_limits<double>::infinity();
    for (const auto& a : angles) {
        const double x = unit(rng), y = unit(rng), z = unit(rng);
        const double sum = x + y + z;
        SimplexPoint m;
        m.m = {x / sum, y / sum, z / sum};
        const double beta = 36.0 * f_value(m, a);
        r.min_random_beta = std::min(r.min_random_beta, beta);
        r.max_random_beta = std::max(r.max_random_beta, beta);
    }
    return r;
}

}  // namespace c3b
