// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_HERGLOTZ_HPP
#define TWOWEIGHT_HERGLOTZ_HPP

#include <functional>
#include <vector>
#include "twoweight/weights.hpp"

namespace twoweight
{

// Which side of the circle a radial limit is taken from. `inner` (r → 1−)
// is the "+" boundary value throughout: D0^+, Y_+, P_+.
enum class Side
{
  inner,
  outer
};

enum class BoundaryMethod
{
  series,        // exact finite Fourier sum at r = 1
  radial_ladder  // Richardson extrapolation over r_j = 1 ∓ 2^{-j}, j = 6..14
};

struct BoundaryValue
{
  Matrix value;
  double error_estimate = 0.0;
  bool converged = true;
};

// Richardson extrapolation of r ↦ f(r) to r = 1 along the ladder
// h_j = 2^{-j}, j = 6..14, r = 1 ∓ h_j. Each table column removes one more
// power of h. Divergence (raw successive differences growing at the end of
// the ladder) sets converged = false and returns the last finite iterate.
BoundaryValue radial_limit(const std::function<Matrix(double)> &f, Side side);

// ψ(z) = i ∫ (e^{it} + z)/(e^{it} - z) w(e^{it}) dt/2π, evaluated from the
// weight's Fourier coefficients:
//   |z| < 1:  i [Ŵ(0) + 2 Σ_{n≥1} Ŵ(n) z^n]
//   |z| > 1: -i [Ŵ(0) + 2 Σ_{n≥1} Ŵ(n)* z^{-n}]
class HerglotzEvaluator
{
public:
  explicit HerglotzEvaluator(const MatrixWeight &w, double delta_min = 1e-8);
  HerglotzEvaluator(std::vector<Matrix> coefficients, double delta_min = 1e-8);

  int dim() const { return static_cast<int>(coeff_.front().rows()); }
  int degree() const { return static_cast<int>(coeff_.size()) - 1; }
  double delta_min() const { return delta_min_; }
  const std::vector<Matrix> &coefficients() const { return coeff_; }

  // Throws DomainError when ||z| - 1| < delta_min.
  Matrix psi(Complex z) const;

  BoundaryValue boundary(double theta, Side side,
                         BoundaryMethod method = BoundaryMethod::series) const;

  // (1/2i)(ψ^+ - ψ^-): recovers the weight.
  Matrix jump(double theta, BoundaryMethod method = BoundaryMethod::series) const;

private:
  Matrix series_inner(Complex z) const;

  std::vector<Matrix> coeff_;
  double delta_min_;
};

}  // namespace twoweight

#endif  // TWOWEIGHT_HERGLOTZ_HPP
