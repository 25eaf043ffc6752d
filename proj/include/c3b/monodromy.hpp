#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "c3b/reduction.hpp"

namespace c3b {

using Complex = std::complex<double>;

/// Standard 4x4 symplectic unit [[0, -I], [I, 0]].
Mat4 symplectic_unit4();

/// Trace pair of a palindromic quartic: each multiplier pair {l, 1/l}
/// solves l^2 - rho l + 1 = 0.
struct MultiplierSplit {
    double c3 = 0.0;  ///< -trace
    double c2 = 0.0;  ///< sum of principal 2x2 minors
    double discriminant = 0.0;  ///< of rho^2 + c3 rho + (c2 - 2)
    Complex rho1;
    Complex rho2;
    std::array<Complex, 4> multipliers;
};

MultiplierSplit multiplier_split(const Mat4& gamma);

/// Period map of the essential system over theta in [0, 2 pi].
struct EssentialMonodromy {
    Mat4 gamma;
    double beta = 0.0;
    double e = 0.0;
    std::size_t steps = 0;
    double symplectic_defect = 0.0;  ///< ||gamma^T J gamma - J||_max
    MultiplierSplit split;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step count used for the essential system: ceil(4000 / (1 - e)).
std::size_t essential_steps(double e);

/// Bound on ||gamma^T J gamma - J||_max / max(1, ||gamma||_max^2).
inline constexpr double kSymplecticTolerance = 1e-9;

/// Integrates zeta' = J B2bar(theta) zeta, zeta(0) = I. `steps == 0` selects
/// essential_steps(e). Throws IntegrationError on a non-finite result or a
/// scaled symplectic defect above kSymplecticTolerance.
EssentialMonodromy fundamental_solution(double beta, double e, std::size_t steps = 0);

/// Fundamental solution sampled at the given ascending angles in (0, 2 pi].
std::vector<Mat4> fundamental_solution_at(double beta, double e, std::span<const double> thetas,
                                          std::size_t steps = 0);

double symplectic_defect(const Mat4& gamma);

/// symplectic_defect scaled by max(1, ||gamma||_max^2); rounding in
/// gamma^T J gamma grows with the square of the entries.
double scaled_symplectic_defect(const Mat4& gamma);

enum class StabilityKind { EE, EH, HH, CS, Boundary };

/// Multiplier pattern of the period map. Boundary covers multipliers at
/// +-1 and collisions of the two multiplier pairs.
struct StabilityClass {
    StabilityKind kind = StabilityKind::Boundary;
    std::string detail;

    bool operator==(const StabilityClass& other) const { return kind == other.kind; }
};

inline constexpr double kClassifyTolerance = 1e-8;

const char* to_string(StabilityKind kind);
StabilityKind stability_kind_from_string(const std::string& name);

StabilityClass classify(const MultiplierSplit& split, double tolerance = kClassifyTolerance);
StabilityClass classify(const EssentialMonodromy& mon);
StabilityClass classify(double beta, double e);

/// dim ker(gamma - I) via complete-pivoting elimination with rank tolerance
/// 1e-6 * ||gamma - I||_max.
int nullity(const Mat4& gamma);
int nullity(const EssentialMonodromy& mon);

}  // namespace c3b
