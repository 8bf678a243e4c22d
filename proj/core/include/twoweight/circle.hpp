// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_CIRCLE_HPP
#define TWOWEIGHT_CIRCLE_HPP

#include <vector>
#include "twoweight/linalg.hpp"

namespace twoweight
{

// Uniform grid θ_m = 2πm/M on the unit circle. M is a power of two, M ≥ 16.
class CircleGrid
{
public:
  explicit CircleGrid(int size);

  int size() const { return size_; }
  double spacing() const { return 2.0 * kPi / size_; }
  double node(int m) const { return spacing() * m; }
  Complex point(int m) const;
  std::vector<double> nodes() const;

  // Index of the node closest to θ (θ reduced mod 2π).
  int nearest_node(double theta) const;

  friend bool operator==(const CircleGrid &a, const CircleGrid &b) { return a.size_ == b.size_; }

private:
  int size_;
};

bool is_power_of_two(int n);

// Reduces an angle to [0, 2π).
double reduce_angle(double theta);

// Per-node k×k complex matrices on a CircleGrid.
struct MatrixSampleField
{
  CircleGrid grid;
  std::vector<Matrix> values;

  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }

  // Throws ValidationError unless the field has one finite square k×k value
  // per node, k ≥ 1.
  void validate() const;
};

// Coefficients Ŵ(n) = (1/M) Σ_m W(θ_m) e^{-inθ_m}, n = -M/2 .. M/2-1.
class FourierCoefficients
{
public:
  FourierCoefficients(int size, std::vector<Matrix> by_index);

  int size() const { return size_; }
  int min_index() const { return -size_ / 2; }
  int max_index() const { return size_ / 2 - 1; }
  const Matrix &operator()(int n) const;

private:
  int size_;
  std::vector<Matrix> coeff_;  // stored for n = -M/2 .. M/2-1
};

// P_r(θ) = (1 - r²) / (1 + r² - 2r cos θ). Throws DomainError for r = 1 or r < 0.
double poisson_kernel(double r, double theta);

FourierCoefficients fourier_coefficients(const MatrixSampleField &field);

// Inverse of fourier_coefficients on the same grid.
MatrixSampleField inverse_fourier(const FourierCoefficients &coeff);

// Trapezoid rule for ∫ W dt/2π.
Matrix circle_mean(const MatrixSampleField &field);

}  // namespace twoweight

#endif  // TWOWEIGHT_CIRCLE_HPP
