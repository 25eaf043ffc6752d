#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace c3b {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Masses and charges of the three bodies. Masses are rescaled to sum to one
/// on construction; charges are kept as given.
class BodySetup {
public:
    /// Throws std::invalid_argument on a non-positive or non-finite mass.
    BodySetup(const std::array<double, 3>& masses, const std::array<double, 3>& charges);

    const std::array<double, 3>& masses() const { return masses_; }
    const std::array<double, 3>& charges() const { return charges_; }
    double mass(int i) const { return masses_[i]; }
    double charge(int i) const { return charges_[i]; }

    /// Charge-to-mass ratio e_i / m_i.
    double specific_charge(int i) const { return charges_[i] / masses_[i]; }

    bool operator==(const BodySetup&) const = default;

private:
    std::array<double, 3> masses_;
    std::array<double, 3> charges_;
};

/// Charge-modified couplings delta_ij = 1 - (e_i/m_i)(e_j/m_j).
struct DeltaMatrix {
    double d12 = 1.0;
    double d23 = 1.0;
    double d31 = 1.0;

    /// Symmetric access with 0-based body indices, i != j.
    double operator()(int i, int j) const;
};

DeltaMatrix delta_matrix(const BodySetup& setup);

enum class AdmissibilityFailure {
    none,
    non_positive_delta,
    degenerate_triangle,
    near_collinear,
    non_positive_mu,
};

struct AdmissibilityVerdict {
    AdmissibilityFailure failure = AdmissibilityFailure::none;
    std::string message;

    bool accepted() const { return failure == AdmissibilityFailure::none; }
    explicit operator bool() const { return accepted(); }
};

/// Accepts iff all deltas are positive and their cube roots form a
/// non-degenerate triangle.
AdmissibilityVerdict admissible(const DeltaMatrix& deltas);

class InadmissibleSetup : public std::runtime_error {
public:
    explicit InadmissibleSetup(AdmissibilityVerdict verdict)
        : std::runtime_error(verdict.message), verdict_(std::move(verdict)) {}
    const AdmissibilityVerdict& verdict() const { return verdict_; }

private:
    AdmissibilityVerdict verdict_;
};

/// Non-collinear central configuration in barycentric coordinates with unit
/// moment of inertia. Body 1 sits above the axis through bodies 2 and 3.
struct CentralConfiguration {
    std::array<double, 3> angles{};  ///< inner angle at body i, radians
    std::array<Vec2, 3> positions{};
    double alpha = 0.0;
    double beta = 0.0;  ///< 36 alpha^2, in [0, 9]
    double mu = 0.0;    ///< Kepler parameter of the homographic motion
    double k = 0.0;     ///< side scale: |a_i - a_j| = delta_ij^{1/3} / k
};

/// Angles below this are treated as a collinear configuration.
inline constexpr double kMinAngle = 1e-6;

/// Throws InadmissibleSetup when the setup admits no triangle configuration.
CentralConfiguration build_configuration(const BodySetup& setup);

/// Positions, beta and mu for prescribed inner angles (summing to pi). Only
/// the angles chosen by build_configuration give a central configuration.
CentralConfiguration configuration_from_angles(const std::array<double, 3>& angles, const BodySetup& setup);

/// Max-norm of lambda*M*a + grad U(a) with lambda = U(a) / (Ma . a).
double cc_residual(const CentralConfiguration& config, const BodySetup& setup);

/// Potential U(q) = sum m_i m_j delta_ij / |q_i - q_j|.
double potential(const std::array<Vec2, 3>& q, const BodySetup& setup);

const char* to_string(AdmissibilityFailure failure);

void to_json(nlohmann::json& j, const BodySetup& setup);
void to_json(nlohmann::json& j, const CentralConfiguration& config);
void from_json(const nlohmann::json& j, CentralConfiguration& config);

}  // namespace c3b

namespace nlohmann {
template <>
struct adl_serializer<c3b::BodySetup> {
    static c3b::BodySetup from_json(const json& j);
    static void to_json(json& j, const c3b::BodySetup& setup) { c3b::to_json(j, setup); }
};
}  // namespace nlohmann
