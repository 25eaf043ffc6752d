#include "c3b/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace c3b {

namespace {

std::string fmt_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

bool is_hyperbolic(StabilityKind k) { return k == StabilityKind::HH || k == StabilityKind::CS; }

// Largest |rho| among the two traces; both are real inside an EE run.
double peak_trace(double beta, double e) {
    const MultiplierSplit s = fundamental_solution(beta, e).split;
    return std::max(std::abs(s.rho1.real()), std::abs(s.rho2.real()));
}

// Fourth-order central difference of peak_trace.
double peak_slope(double beta, double e, double h) {
    const double d1 = peak_trace(beta + h, e) - peak_trace(beta - h, e);
    const double d2 = peak_trace(beta + 2.0 * h, e) - peak_trace(beta - 2.0 * h, e);
    return (8.0 * d1 - d2) / (12.0 * h);
}

double locate_touch(double e, double lo, double hi) {
    constexpr int kSamples = 33;
    std::vector<double> betas(kSamples), peaks(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        betas[i] = lo + (hi - lo) * i / (kSamples - 1);
        peaks[i] = peak_trace(betas[i], e);
    }
    const auto top = std::max_element(peaks.begin(), peaks.end()) - peaks.begin();
    if (top == 0 || top == kSamples - 1 || peaks[top] < 2.0 - 1e-3) {
        throw std::invalid_argument("bracket ends share one class and contain no tangential touch of +-1");
    }

    double a = betas[top - 1], b = betas[top + 1];
    const double h = std::min(1e-3, 0.25 * (b - a));
    while (b - a >= kBisectWidth) {
        const double mid = 0.5 * (a + b);
        if (peak_slope(mid, e, h) > 0.0) a = mid; else b = mid;
    }
    const double beta = 0.5 * (a + b);
    if (std::abs(peak_trace(beta, e) - 2.0) > 1e-6) {
        throw std::invalid_argument("bracket ends share one class and contain no tangential touch of +-1");
    }
    return beta;
}

struct RowSample {
    std::vector<double> betas;
    std::vector<StabilityKind> kinds;
    std::vector<double> peaks;
};

RowSample sample_row(double e, double lo, double hi, double step, unsigned jobs) {
    RowSample row;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
    row.betas.resize(n);
    for (std::size_t i = 0; i < n; ++i) row.betas[i] = std::min(hi, lo + static_cast<double>(i) * step);
    row.kinds.resize(n);
    row.peaks.resize(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const EssentialMonodromy mon = fundamental_solution(row.betas[i], e);
        row.kinds[i] = classify(mon).kind;
        row.peaks[i] = std::max(std::abs(mon.split.rho1.real()), std::abs(mon.split.rho2.real()));
    });
    return row;
}

bool wanted(CurveLabel label, StabilityKind left, StabilityKind right) {
    switch (label) {
        case CurveLabel::s: return left == StabilityKind::EE && right == StabilityKind::EH;
        case CurveLabel::m: return left == StabilityKind::EH && right == StabilityKind::EE;
        case CurveLabel::k: return left == StabilityKind::EE && is_hyperbolic(right);
    }
    return false;
}

// Transition of the requested type inside the sampled window, if any.
std::optional<double> find_transition(CurveLabel label, double e, const RowSample& row) {
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < row.betas.size(); ++i) {
        if (row.kinds[i] == StabilityKind::Boundary) continue;
        if (prev && wanted(label, row.kinds[*prev], row.kinds[i])) {
            return transition_bisect(e, row.betas[*prev], row.betas[i]);
        }
        prev = i;
    }
    if (label == CurveLabel::k) return std::nullopt;

    // The EH band can shrink to a single point (e = 0); look for a touch
    // inside an EE run instead.
    for (std::size_t i = 1; i + 1 < row.betas.size(); ++i) {
        if (row.kinds[i - 1] != StabilityKind::EE || row.kinds[i + 1] != StabilityKind::EE) continue;
        if (row.peaks[i] >= row.peaks[i - 1] && row.peaks[i] >= row.peaks[i + 1] && row.peaks[i] > 2.0 - 1e-3) {
            try {
                return transition_bisect(e, row.betas[i - 1], row.betas[i + 1]);
            } catch (const std::invalid_argument&) {
            }
        }
    }
    return std::nullopt;
}

}  // namespace

double GridAxis::at(std::size_t i) const {
    if (count <= 1) return lo;
    if (i + 1 == count) return hi;
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(count - 1);
}

std::vector<double> GridAxis::nodes() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
    return out;
}

GridAxis parse_range(const std::string& text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        const std::string piece = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(piece, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad range '" + text + "', expected lo:hi:step");
        }
        if (used != piece.size()) throw std::invalid_argument("bad range '" + text + "', expected lo:hi:step");
        parts.push_back(value);
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() == 1) return {parts[0], parts[0], 1};
    if (parts.size() != 3) throw std::invalid_argument("bad range '" + text + "', expected lo:hi:step");

    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(hi >= lo)) throw std::invalid_argument("range '" + text + "' has hi < lo");
    if (hi == lo) return {lo, hi, 1};
    if (!(step > 0.0)) throw std::invalid_argument("range '" + text + "' needs a positive step");
    const double intervals = (hi - lo) / step;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-6 || rounded < 1.0) {
        throw std::invalid_argument("range '" + text + "' is not a whole number of steps");
    }
    return {lo, hi, static_cast<std::size_t>(rounded) + 1};
}

std::vector<StabilityKind> RegionMap::row(std::size_t r) const {
    const auto first = classes.begin() + static_cast<std::ptrdiff_t>(r * betas.size());
    return {first, first + static_cast<std::ptrdiff_t>(betas.size())};
}

ScanError::ScanError(const std::string& what, double beta, double e)
    : std::runtime_error(what + " at (beta, e) = (" + fmt_number(beta) + ", " + fmt_number(e) + ")"),
      beta_(beta),
      e_(e) {}

RegionMap grid_scan(const GridAxis& betas, const GridAxis& eccentricities, unsigned jobs) {
    auto check_axis = [](const GridAxis& axis, double lo, double hi, const char* name) {
        if (!(axis.lo >= lo && axis.hi <= hi && axis.lo <= axis.hi)) {
            throw std::invalid_argument(std::string(name) + " range must lie in [" + fmt_number(lo) + ", " +
                                        fmt_number(hi) + "]");
        }
        if (axis.count < 2 && axis.lo != axis.hi) {
            throw std::invalid_argument(std::string(name) + " axis needs at least two nodes");
        }
        if (axis.count == 0) throw std::invalid_argument(std::string(name) + " axis is empty");
    };
    check_axis(betas, 0.0, 9.0, "beta");
    check_axis(eccentricities, 0.0, 0.99, "eccentricity");

    RegionMap map;
    map.betas = betas.nodes();
    map.eccentricities = eccentricities.nodes();
    const std::size_t nb = map.betas.size();
    map.classes.assign(nb * map.eccentricities.size(), StabilityKind::Boundary);

    parallel_for(map.classes.size(), jobs, [&](std::size_t idx) {
        const double beta = map.betas[idx % nb];
        const double e = map.eccentricities[idx / nb];
        try {
            map.classes[idx] = classify(beta, e).kind;
        } catch (const std::exception& ex) {
            throw ScanError(ex.what(), beta, e);
        }
    });
    return map;
}

void write_region_csv(std::ostream& out, const RegionMap& map) {
    out << "beta,e,class\n";
    for (std::size_t r = 0; r < map.eccentricities.size(); ++r) {
        for (std::size_t c = 0; c < map.betas.size(); ++c) {
            out << fmt_number(map.betas[c]) << ',' << fmt_number(map.eccentricities[r]) << ','
                << to_string(map.at(r, c)) << '\n';
        }
    }
}

double transition_bisect(double e, double beta_lo, double beta_hi) {
    if (!(beta_lo < beta_hi)) throw std::invalid_argument("bracket needs beta_lo < beta_hi");
    const StabilityKind lo_kind = classify(beta_lo, e).kind;
    const StabilityKind hi_kind = classify(beta_hi, e).kind;
    if (lo_kind == StabilityKind::Boundary || hi_kind == StabilityKind::Boundary) {
        throw std::invalid_argument("bracket ends must not be BOUNDARY");
    }
    if (lo_kind == hi_kind) return locate_touch(e, beta_lo, beta_hi);

    double lo = beta_lo, hi = beta_hi;
    while (hi - lo >= kBisectWidth) {
        const double mid = 0.5 * (lo + hi);
        if (classify(mid, e).kind == lo_kind) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

CurveLabel curve_label_from_string(const std::string& name) {
    if (name == "s") return CurveLabel::s;
    if (name == "m") return CurveLabel::m;
    if (name == "k") return CurveLabel::k;
    throw std::invalid_argument("unknown curve label '" + name + "', expected s, m or k");
}

const char* to_string(CurveLabel label) {
    switch (label) {
        case CurveLabel::s: return "s";
        case CurveLabel::m: return "m";
        case CurveLabel::k: return "k";
    }
    return "?";
}

CurveLoss::CurveLoss(const std::string& what, double e)
    : std::runtime_error(what + " at e = " + fmt_number(e)), e_(e) {}

Curve trace_curve(CurveLabel label, const std::vector<double>& eccentricities, unsigned jobs) {
    for (std::size_t i = 0; i < eccentricities.size(); ++i) {
        const double e = eccentricities[i];
        if (!(e >= 0.0 && e <= 0.95)) throw std::invalid_argument("tracing eccentricities must lie in [0, 0.95]");
        if (i > 0 && !(e > eccentricities[i - 1])) throw std::invalid_argument("eccentricities must increase");
    }

    Curve curve;
    curve.label = label;
    constexpr double kFullLo = 0.0, kFullHi = 3.0, kFullStep = 0.005;

    for (const double e : eccentricities) {
        const auto& pts = curve.points;
        std::optional<double> found;
        double predicted_step = 0.0;

        if (!pts.empty()) {
            double slope = 0.0;
            if (pts.size() >= 2) {
                const auto& a = pts[pts.size() - 2];
                const auto& b = pts.back();
                slope = (b.beta - a.beta) / (b.e - a.e);
            }
            predicted_step = slope * (e - pts.back().e);
            const double centre = pts.back().beta + predicted_step;
            double half = std::max(0.02, 4.0 * std::abs(predicted_step));
            for (int attempt = 0; attempt < 3 && !found; ++attempt, half *= 2.0) {
                const double lo = std::max(0.0, centre - half), hi = std::min(9.0, centre + half);
                found = find_transition(label, e, sample_row(e, lo, hi, half / 10.0, jobs));
            }
        }
        if (!found) found = find_transition(label, e, sample_row(e, kFullLo, kFullHi, kFullStep, jobs));
        if (!found) {
            throw CurveLoss(std::string("no ") + to_string(label) + "-type transition on the row", e);
        }

        if (pts.size() >= 2) {
            const double jump = std::abs(*found - pts.back().beta);
            if (jump > std::max(10.0 * std::abs(predicted_step), 0.02)) {
                throw CurveLoss(std::string("curve ") + to_string(label) + " jumps by " + fmt_number(jump), e);
            }
        }
        curve.points.push_back({e, *found});
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const Curve& curve) {
    out << "e,beta\n";
    for (const auto& p : curve.points) out << fmt_number(p.e) << ',' << fmt_number(p.beta) << '\n';
}

LineFit fit_line(const Curve& curve) {
    const auto n = static_cast<double>(curve.points.size());
    if (curve.points.size() < 2) throw std::invalid_argument("line fit needs at least two points");
    double se = 0.0, sb = 0.0, see = 0.0, seb = 0.0;
    for (const auto& p : curve.points) {
        se += p.e;
        sb += p.beta;
        see += p.e * p.e;
        seb += p.e * p.beta;
    }
    LineFit fit;
    fit.slope = (n * seb - se * sb) / (n * see - se * se);
    fit.foot = (sb - fit.slope * se) / n;
    for (const auto& p : curve.points) {
        fit.max_residual = std::max(fit.max_residual, std::abs(p.beta - (fit.foot + fit.slope * p.e)));
    }
    return fit;
}

}  // namespace c3b
