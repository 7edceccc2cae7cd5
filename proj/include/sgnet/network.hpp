#pragma once

namespace sgnet {

/// Physical scenario of a single-tier Poisson cellular network.
struct NetworkParams {
  double lambda_bs = 1.27e-6;  ///< BS density (BS/m^2)
  double lambda_ue = 0.0;      ///< UE density (UE/m^2)
  double beta = 4.0;           ///< path-loss exponent, (2, 5]
  double kappa = 1.0;          ///< path loss at 1 m (linear)
  double p_tx = 1.0;           ///< transmit power (W)
  double sigma_n2 = 0.0;       ///< noise power (W)

  /// Throws DomainError naming the first field that violates its range.
  void validate() const;
};

/// Throws DomainError unless 2 < beta <= 5. Both Gamma(1 - 2/beta) and the
/// 1/(beta - 2) coefficients blow up at beta = 2, so the interval is open.
void check_beta(double beta);

/// delta = 2 / beta, the exponent that appears throughout.
inline double delta_of(double beta) { return 2.0 / beta; }

}  // namespace sgnet
