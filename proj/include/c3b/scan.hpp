#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "c3b/monodromy.hpp"
#include "c3b/parallel.hpp"

namespace c3b {

/// Inclusive parameter range sampled at `count` evenly spaced nodes.
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 1;

    double at(std::size_t i) const;
    std::vector<double> nodes() const;
};

/// Parses "lo:hi:step" into a GridAxis. The node count is
/// round((hi - lo) / step) + 1; the last node is exactly hi.
GridAxis parse_range(const std::string& text);

struct RegionMap {
    std::vector<double> betas;
    std::vector<double> eccentricities;
    std::vector<StabilityKind> classes;  ///< row-major: classes[row * betas.size() + col], row = e index

    StabilityKind at(std::size_t row, std::size_t col) const { return classes[row * betas.size() + col]; }
    std::vector<StabilityKind> row(std::size_t r) const;
};

class ScanError : public std::runtime_error {
public:
    ScanError(const std::string& what, double beta, double e);
    double beta() const { return beta_; }
    double e() const { return e_; }

private:
    double beta_;
    double e_;
};

/// Classifies every node of the grid. Ranges must lie in [0,9] x [0,0.99];
/// each axis needs at least two nodes unless lo == hi.
RegionMap grid_scan(const GridAxis& betas, const GridAxis& eccentricities, unsigned jobs = 0);

void write_region_csv(std::ostream& out, const RegionMap& map);

inline constexpr double kBisectWidth = 1e-10;

/// Locates the class change in [beta_lo, beta_hi] on the row e. When both
/// ends carry the same class the bracket must contain a tangential touch of a
/// multiplier pair with +-1 (the e = 0 foot of the EH band); that point is
/// found from the sign change of the derivative of the largest |rho|.
/// Throws std::invalid_argument when neither applies.
double transition_bisect(double e, double beta_lo, double beta_hi);

enum class CurveLabel { s, m, k };

CurveLabel curve_label_from_string(const std::string& name);
const char* to_string(CurveLabel label);

struct CurvePoint {
    double e = 0.0;
    double beta = 0.0;
};

struct Curve {
    CurveLabel label = CurveLabel::s;
    std::vector<CurvePoint> points;
};

class CurveLoss : public std::runtime_error {
public:
    CurveLoss(const std::string& what, double e);
    double e() const { return e_; }

private:
    double e_;
};

/// Follows one transition curve across the given ascending eccentricities
/// (each in [0, 0.95]). s: EE to EH, m: EH to EE, k: EE to HH/CS.
Curve trace_curve(CurveLabel label, const std::vector<double>& eccentricities, unsigned jobs = 0);

void write_curve_csv(std::ostream& out, const Curve& curve);

/// Least-squares line beta = foot + slope * e through the curve points.
struct LineFit {
    double foot = 0.0;
    double slope = 0.0;
    double max_residual = 0.0;
};

LineFit fit_line(const Curve& curve);

}  // namespace c3b
