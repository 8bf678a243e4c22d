// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_DEBRANGES_HPP
#define TWOWEIGHT_DEBRANGES_HPP

#include <optional>
#include <string>
#include <vector>
#include "twoweight/herglotz.hpp"

namespace twoweight
{

// Per-node output of the companion-weight extraction.
struct CompanionWeightResult
{
  CircleGrid grid;
  std::vector<Matrix> w1;           // Hermitian PSD per node
  std::vector<bool> singular_flags;  // radial limit failed or D0^+ beyond the cutoff
  std::vector<double> cond_profile;  // normalized condition of D0^+ per node
  double deficit = 0.0;              // Tr(GG*) - (1/M) Σ_unflagged Tr w1
  double gg_trace = 0.0;

  int flagged_count() const;
  // (1/M) Σ_unflagged Tr w1(θ_m)
  double integrated_trace() const;
  // w1 as a sampled weight (flagged nodes carry their reporting value).
  MatrixWeight as_weight() const;
};

// Scattering data of the de Branges construction for a normalized weight w0:
//   GG* = ν0(𝕋),  α = (I - (GG*)²)^{1/2},  D0 = α + ψ0,  ψ1 = α - D0^{-1},
//   D1 = -α + ψ1 = -D0^{-1}.
class DeBrangesSystem
{
public:
  explicit DeBrangesSystem(const MatrixWeight &w0, double cond_cutoff = 1e8);

  const MatrixWeight &weight() const { return w0_; }
  const HerglotzEvaluator &psi0() const { return psi0_; }
  const Matrix &gg_star() const { return gg_star_; }
  const Matrix &alpha() const { return alpha_; }
  double cond_cutoff() const { return cond_cutoff_; }
  int dim() const { return w0_.dim(); }

  Matrix d0(Complex z) const;

  // Throws NumericalError when D0(z) is numerically singular.
  Matrix d1(Complex z) const;
  Matrix psi1(Complex z) const;

  // max(‖(α+ψ0)(α-ψ1) - I‖, ‖(α-ψ1)(α+ψ0) - I‖)
  double identity_residual(Complex z) const;

  struct Boundary
  {
    Matrix d0;
    double cond = 0.0;
    std::optional<Matrix> d1;  // present only when cond ≤ cond_cutoff
    bool converged = true;
    double error_estimate = 0.0;
  };

  Boundary d0_boundary(double theta, Side side,
                       BoundaryMethod method = BoundaryMethod::series) const;

  // w1(θ) = lim_{r→1-} (1/2i)(ψ1(re^{iθ}) - ψ1(re^{iθ})*).
  //
  // series: ψ1^+ = α - (D0^+)^{-1} from the exact boundary value of D0;
  // nodes with cond(D0^+) above the cutoff are flagged.
  // radial_ladder: Richardson over the r-ladder applied to the Poisson
  // average of ν1 directly; divergent nodes are flagged.
  // Flagged nodes carry the last finite ladder iterate and are excluded
  // from the deficit.
  CompanionWeightResult companion_weight(const CircleGrid &grid,
                                         BoundaryMethod method = BoundaryMethod::series) const;

  // (D0^+)^{-*} w0(θ) (D0^+)^{-1}. Throws NumericalError above the cutoff.
  Matrix companion_weight_reconstructed(double theta) const;

  // Poisson average (P_r * ν_j)(θ) = (ψ_j(re^{iθ}) - ψ_j(re^{iθ})*)/2i for r < 1.
  Matrix poisson_average(int j, double r, double theta) const;

  // sup_θ λ_max((P_r*w0)^{1/2}(P_r*w1)(P_r*w0)^{1/2}) over the grid.
  double poisson_sandwich_sup(double r, const CircleGrid &grid) const;

private:
  MatrixWeight w0_;
  HerglotzEvaluator psi0_;
  Matrix gg_star_;
  Matrix alpha_;
  double cond_cutoff_;
};

// θ, w1 entries (re/im, row-major), flag, cond as comma-separated rows.
std::string companion_weight_csv(const CompanionWeightResult &result);

}  // namespace twoweight

#endif  // TWOWEIGHT_DEBRANGES_HPP
