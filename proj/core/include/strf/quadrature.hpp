#pragma once

#include <vector>

namespace strf {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

// Gauss-Legendre on [-1, 1] by Newton iteration on the three-term recurrence.
Rule gauss_legendre(int n);
// Gauss-Legendre mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// Gauss-Jacobi for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1 (Golub-Welsch).
Rule gauss_jacobi(int n, double a, double b);

// Gauss-Hermite for the standard normal density; weights sum to 1.
Rule gauss_hermite(int n);

}  // namespace strf
