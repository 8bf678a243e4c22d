// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_MODEL_HPP
#define TWOWEIGHT_MODEL_HPP

#include <string>
#include <vector>
#include "twoweight/weights.hpp"

namespace twoweight
{

enum class SolveMode
{
  automatic,
  dense,
  structured
};

struct SpectralAtom
{
  double omega = 0.0;  // in [0, 2π)
  Matrix mass;         // G Π G*, PSD
  double trace = 0.0;
};

// Atoms sorted by angle.
struct SpectralMeasure
{
  std::vector<SpectralAtom> atoms;

  Matrix total() const;
  double total_trace() const;
  // Trace mass with circular distance |ω - center| ≤ radius.
  double trace_within(double center, double radius) const;
  // Trace mass with ω ≤ omega.
  double cumulative_trace(double omega) const;
};

// omega,trace rows.
std::string spectral_csv(const SpectralMeasure &measure);

// Quadrature realization of (ℋ, U0, G, Θ, U1) on M nodes:
//   ℋ = ℂ^{Mk} with block m at node θ_m, U0 = diag(e^{iθ_m} I_k),
//   G_m = w0(θ_m)^{1/2}/√M, Θ = 2 arcsin(G*G), U1 = e^{iΘ/2} U0 e^{iΘ/2}.
// Only the thin SVD G = U S Q* is stored; Θ, e^{iΘ/2} and β act on span Q.
class TruncatedModel
{
public:
  static constexpr int kMaxSize = 8192;
  static constexpr int kMaxDenseSize = 4096;

  // Throws ResourceError when Mk > kMaxSize, ValidationError when w0 is not
  // normalized.
  TruncatedModel(const MatrixWeight &w0, int modes);

  int modes() const { return grid_.size(); }
  int dim() const { return dim_; }
  int size() const { return modes() * dim_; }
  const CircleGrid &grid() const { return grid_; }

  const Matrix &g() const { return g_; }
  const Matrix &gg_star() const { return gg_star_; }
  const Matrix &alpha() const { return alpha_; }
  // Eigenvalues of G*G on span Q, clamped to [0, 1] and snapped to 1 within 1e-12.
  const RealVector &gram_spectrum() const { return s2_; }

  // Dense materializations; throw ResourceError above kMaxDenseSize.
  Matrix u0() const;
  Matrix u1() const;
  Matrix theta() const;
  Matrix exp_half_theta() const;
  Matrix beta() const;

  // ψ_j(z) = iG(U_j + z)(U_j - z)^{-1}G*. Requires |1 - |z|| ≥ 0.05.
  Matrix psi(int j, Complex z, SolveMode mode = SolveMode::automatic) const;

  // max of both orderings of ‖(α + ψ0)(α - ψ1) - I‖ with model quantities.
  double identity_residual(Complex z) const;
  // ‖αG - Gβ‖
  double b5_residual() const;
  // ‖U1*U1 - I‖, exact through the rank-2r form of the defect.
  double unitarity_drift() const;

  // Eigendecomposition of U1; throws ResourceError above kMaxDenseSize.
  SpectralMeasure spectral_nu1() const;

private:
  void require_dense() const;

  CircleGrid grid_;
  int dim_;
  Matrix g_;        // k × Mk
  Matrix u_;        // k × r
  RealVector s_;    // r
  Matrix q_;        // Mk × r
  RealVector s2_;   // clamped s²
  RealVector half_; // arcsin(s²) = Θ/2 eigenvalues
  Matrix gg_star_;
  Matrix alpha_;
};

struct CrossValidationRow
{
  Complex z;
  int modes = 0;
  double error = 0.0;
  // log2(err(M)/err(next M)) for the same z; NaN on the last row of a z.
  double order = 0.0;
};

// ‖ψ1^{model}(z; M) - ψ1^{debranges}(z)‖ for every (z, M).
std::vector<CrossValidationRow> cross_validate(const MatrixWeight &w0,
                                               const std::vector<Complex> &zs,
                                               const std::vector<int> &modes);

std::string cross_validation_csv(const std::vector<CrossValidationRow> &rows);

}  // namespace twoweight

#endif  // TWOWEIGHT_MODEL_HPP
