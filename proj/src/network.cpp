#include "sgnet/network.hpp"

#include <cmath>
#include <string>

#include "sgnet/errors.hpp"

namespace sgnet {

void check_beta(double beta) {
  if (!(beta > 2.0 && beta <= 5.0)) {
    throw DomainError("beta must lie in the open-closed interval (2, 5], got " + std::to_string(beta));
  }
}

void NetworkParams::validate() const {
  if (!(lambda_bs > 0.0 && std::isfinite(lambda_bs))) throw DomainError("lambda_bs must be > 0");
  if (!(lambda_ue >= 0.0 && std::isfinite(lambda_ue))) throw DomainError("lambda_ue must be >= 0");
  check_beta(beta);
  if (!(kappa > 0.0 && std::isfinite(kappa))) throw DomainError("kappa must be > 0");
  if (!(p_tx > 0.0 && std::isfinite(p_tx))) throw DomainError("p_tx must be > 0");
  if (!(sigma_n2 >= 0.0 && std::isfinite(sigma_n2))) throw DomainError("sigma_n2 must be >= 0");
}

}  // namespace sgnet
