// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_WEIGHTS_HPP
#define TWOWEIGHT_WEIGHTS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>
#include "twoweight/circle.hpp"

namespace twoweight
{

// Hermitian positive semidefinite k×k matrix-valued function on the circle.
//
// Every weight is carried as a trigonometric polynomial
//   w(θ) = Ŵ(0) + Σ_{n=1}^{N} (Ŵ(n) e^{inθ} + Ŵ(n)* e^{-inθ})
// together with its samples on a CircleGrid. Fourier-form weights keep the
// coefficients they were given (N = degree); sample-form weights use the
// symmetric trigonometric interpolant of the samples (N = M/2, Nyquist
// coefficient split evenly between ±M/2). Samples are stored after the PSD
// clamp.
class MatrixWeight
{
public:
  static MatrixWeight from_samples(MatrixSampleField field, double schatten_p = 1.0);

  // coefficients[n] = Ŵ(n) for n = 0..d; Ŵ(-n) = Ŵ(n)* is implied. The grid
  // size defaults to the smallest power of two ≥ max(64, 8(d+1)).
  static MatrixWeight from_fourier(std::vector<Matrix> coefficients, double schatten_p = 1.0,
                                   int grid_size = 0);

  static int minimal_grid_size(int degree);

  int dim() const { return field_.dim(); }
  double schatten_p() const { return schatten_p_; }
  const CircleGrid &grid() const { return field_.grid; }
  const MatrixSampleField &field() const { return field_; }
  const std::vector<Matrix> &samples() const { return field_.values; }
  const Matrix &sample(int m) const { return field_.values[static_cast<std::size_t>(m)]; }

  bool is_fourier() const { return fourier_; }
  const std::vector<Matrix> &coefficients() const { return coeff_; }
  int degree() const { return static_cast<int>(coeff_.size()) - 1; }

  // Value of the trigonometric polynomial at θ (not clamped).
  Matrix evaluate(double theta) const;

  MatrixWeight scaled(double factor) const;

  // Same trigonometric polynomial sampled on a different grid. For sample-form
  // weights this is trigonometric interpolation.
  MatrixWeight on_grid(int grid_size) const;

private:
  MatrixWeight(MatrixSampleField field, std::vector<Matrix> coeff, double p, bool fourier);

  MatrixSampleField field_;
  std::vector<Matrix> coeff_;
  double schatten_p_;
  bool fourier_;
};

// Strictly positive scalar weight given by samples; +inf is allowed (the
// reciprocal vanishes there), zero and NaN are not.
struct ScalarWeight
{
  CircleGrid grid;
  std::vector<double> values;

  void validate() const;
};

// (Σ σ_i^p)^{1/p}. Throws DomainError for p < 1.
double schatten_norm(const Matrix &a, double p);

// Mean of ‖w(θ_m)‖_p over the grid.
double mean_schatten_norm(const MatrixWeight &w);

bool is_normalized(const MatrixWeight &w, double tol = 1e-10);

// c·w with (1/M) Σ ‖c·w(θ_m)‖_p = 1. Throws ValidationError for a zero weight.
MatrixWeight normalize(const MatrixWeight &w);

// GG* = ν₀(𝕋) = circle mean of w, clamped to 0 ≤ GG* ≤ 1. Throws
// NumericalError when ‖GG*‖ exceeds 1 + 1e-6.
Matrix moment_zero(const MatrixWeight &w);

struct KoosisForward
{
  MatrixWeight w0;       // normalize(v0^{-1})
  double normalization;  // w0 = normalization · v0^{-1}
};

// v0 ↦ w0 = normalize(v0^{-1}). Throws ValidationError when a sample of v0
// is ≤ 1e-14.
KoosisForward koosis_forward(const ScalarWeight &v0, double schatten_p = 1.0);

// Pointwise inverse back: v(θ) = normalization / w(θ) (k = 1; zero ↦ +inf).
ScalarWeight koosis_backward(const MatrixWeight &w, double normalization = 1.0);

// max over aligned dyadic blocks of 2^j nodes (j = 2..log₂M) of
// avg_Δ(v)·avg_Δ(1/v). A lower bound for the Muckenhoupt A₂ supremum; +inf
// when a block contains an infinite sample.
double muckenhoupt_sup(const ScalarWeight &v0);

// Canonical fixtures (all normalized).
namespace fixtures
{
MatrixWeight constant(int grid_size = 64);  // k=1, w ≡ 1
MatrixWeight cosine(int grid_size = 64);    // k=1, w = 1 + cos θ
MatrixWeight diagonal(int grid_size = 64);  // k=2, w ≡ diag(0.6, 0.8), p = 2
MatrixWeight rank_one(int grid_size = 64);  // k=2, w = (1 + cos θ) diag(1, 0)

std::vector<std::string> names();
MatrixWeight by_name(const std::string &name, int grid_size = 64);
}  // namespace fixtures

// W(θ) = Q(θ)*Q(θ) with Q a random k×k matrix polynomial of the given degree
// (standard complex Gaussian coefficients), normalized with the given p. The
// result is a Fourier-form weight of degree `degree`.
MatrixWeight random_trig_weight(std::mt19937_64 &rng, int dim, int degree,
                                double schatten_p = 1.0, int grid_size = 0);

}  // namespace twoweight

#endif  // TWOWEIGHT_WEIGHTS_HPP
