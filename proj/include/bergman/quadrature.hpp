#pragma once

#include <vector>

namespace bergman {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Gauss-Hermite rule for the weight exp(-t^2) on the real line.
QuadratureRule gauss_hermite(int n);

}  // namespace bergman
