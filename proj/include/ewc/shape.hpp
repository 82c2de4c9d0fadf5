#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ewc/core.hpp"

namespace ewc {

struct SymmetryResult {
  bool symmetric;
  std::optional<CircAngle> axis;
};

/// Symmetric iff rho1 = rho2, some rho_j = 0, mu1 = mu2 or mu1 = mu2 + pi
/// (each within 1e-12). Returns a symmetry axis when symmetric.
SymmetryResult is_symmetric(const EwcParams& p);

/// Coefficients of the stationary-point equation
///   a0 + a1 cos t + a2 sin t + a3 cos t sin t + a4 cos^2 t = 0
/// in the frame rotated so that mu2 = 0 (t = theta - shift).
struct StationaryCoeffs {
  double a0, a1, a2, a3, a4;
  double shift;

  /// Left-hand side at the unrotated angle theta.
  [[nodiscard]] double residual(double theta) const;
  /// d/dtheta of residual().
  [[nodiscard]] double residual_derivative(double theta) const;
};

StationaryCoeffs stationary_coeffs(const EwcParams& p);

/// Coefficients c4 x^4 + ... + c0 of the stationary equation after x = tan(t/2),
/// highest degree first.
std::array<double, 5> tan_half_quartic(const StationaryCoeffs& c);

/// Discriminant of c[0] x^4 + c[1] x^3 + c[2] x^2 + c[3] x + c[4].
double quartic_discriminant(const std::array<double, 5>& c);

enum class Modality { unimodal, bimodal, boundary };

struct StationaryPoint {
  CircAngle theta;
  double density;
};

struct ModalityReport {
  double discriminant;  // of the quartic scaled so that max |c_k| = 1
  Modality classification;
  std::vector<StationaryPoint> modes;
  std::vector<StationaryPoint> antimodes;
};

/// |discriminant| below this (after coefficient scaling) is reported as boundary.
inline constexpr double kBoundaryTolerance = 1e-10;

/// Classifies the density by the sign of the quartic discriminant and locates
/// every stationary point. Throws DomainError for the uniform case.
ModalityReport modality(const EwcParams& p);

/// Density of the symmetric submodel with common centre mu, rho1 in (-1, 1),
/// rho2 in [0, 1). Negative rho1 places the first factor at mu + pi.
double symmetric1_density(CircAngle theta, CircAngle mu, double rho1, double rho2);

/// p WC(mu, rho1) + (1 - p) WC(mu, rho2) representation of the symmetric
/// submodel for rho1 <= 0. WC(mu, rho1) with rho1 < 0 is WC(mu + pi, |rho1|).
struct MixtureDecomposition {
  double weight;
  WcParams first;
  WcParams second;
};

MixtureDecomposition mixture_decomposition(CircAngle mu, double rho1, double rho2);

/// 2 arccos(2 rho / (1 + rho^2)) - |dmu|: nonnegative exactly when the
/// rho1 = rho2 = rho submodel is unimodal.
double symmetric2_unimodality_margin(double rho, CircAngle dmu);

bool symmetric2_unimodality(double rho, CircAngle dmu);

}  // namespace ewc
