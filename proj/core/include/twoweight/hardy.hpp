// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_HARDY_HPP
#define TWOWEIGHT_HARDY_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>
#include "twoweight/debranges.hpp"

namespace twoweight
{

// f(μ) = Σ_i (μ - z_i)^{-1} χ_i with finitely many poles off the circle.
class RationalTestFunction
{
public:
  struct Term
  {
    Complex pole;
    Vector coefficient;
  };

  static constexpr double kDefaultStandoff = 1e-3;

  explicit RationalTestFunction(int dim = 1, double min_standoff = kDefaultStandoff);
  RationalTestFunction(int dim, std::vector<Term> terms, double min_standoff = kDefaultStandoff);

  static RationalTestFunction single(Complex pole, Vector coefficient,
                                     double min_standoff = kDefaultStandoff);

  // Throws DomainError when ||z| - 1| < min_standoff.
  void add_term(Complex pole, Vector coefficient);

  int dim() const { return dim_; }
  const std::vector<Term> &terms() const { return terms_; }

  // Smallest ||z_i| - 1|; +inf without terms.
  double standoff() const;

  Vector operator()(Complex mu) const;

  RationalTestFunction operator+(const RationalTestFunction &other) const;
  friend RationalTestFunction operator*(Complex a, const RationalTestFunction &f);

private:
  int dim_;
  double min_standoff_;
  std::vector<Term> terms_;
};

// k-vector values at grid nodes; `valid` marks nodes in the output support.
struct VectorField
{
  CircleGrid grid;
  std::vector<Vector> values;
  std::vector<bool> valid;

  static VectorField zeros(const CircleGrid &grid, int dim);
  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
};

VectorField sample(const RationalTestFunction &f, const CircleGrid &grid);

// a·f + b·g, valid where both are.
VectorField combine(Complex a, const VectorField &f, Complex b, const VectorField &g);

// max over nodes valid in both of ‖f(θ) - g(θ)‖.
double sup_distance(const VectorField &f, const VectorField &g);

// (1/M) Σ_{valid m} (w(θ_m) f_m, g_m) = g_m* w_m f_m.
Complex field_inner(const VectorField &f, const VectorField &g, const std::vector<Matrix> &w);

// (f, g)_{L²(w)} by the trapezoid rule on w's grid. Throws DomainError when
// the grid is too coarse for the poles (M < 8/standoff).
Complex weighted_inner(const RationalTestFunction &f, const RationalTestFunction &g,
                       const MatrixWeight &w);

enum class HardyOperator
{
  X,
  Y_plus,
  Y_minus,
  P_plus,
  P_minus,
  hilbert,
  multiply_w0
};

const char *to_string(HardyOperator op);

struct GramData
{
  std::vector<RationalTestFunction> basis;
  Matrix gram0;  // (f_j, f_i)_{L²(w0)}
  Matrix gram1;  // (T f_j, T f_i)_{L²(w1)}, flagged nodes excluded
};

// Largest generalized eigenvalue of (gram1, gram0) on the numerical range of
// gram0 (eigenvalues above 1e-10·λ_max). Lower bound for ‖T‖² on the span.
// Throws NumericalError when gram0 is numerically zero.
double generalized_max_eigenvalue(const Matrix &gram1, const Matrix &gram0);

// Operators of the de Branges model on a fixed grid: X, Y±, the weighted
// Hardy projections P±^{(w0)} = ±(i/2)(X - Y±), the weighted Hilbert
// transform, and their Gram-matrix norm estimates from L²(w0) to L²(w1).
class WeightedHardy
{
public:
  WeightedHardy(const DeBrangesSystem &system, const CircleGrid &grid,
                BoundaryMethod method = BoundaryMethod::series);

  const DeBrangesSystem &system() const { return system_; }
  const CircleGrid &grid() const { return grid_; }
  const CompanionWeightResult &companion() const { return companion_; }
  const MatrixWeight &w0() const { return w0_; }
  const std::vector<Matrix> &d0_boundary(Side side) const
  {
    return side == Side::inner ? d0_plus_ : d0_minus_;
  }

  // Σ (μ - z_i)^{-1} D0(z_i) χ_i. Throws NumericalError when D0 is singular
  // at a pole.
  RationalTestFunction apply_X(const RationalTestFunction &f) const;

  // D0^±(θ) f(e^{iθ}) at unflagged nodes.
  VectorField apply_Y(const RationalTestFunction &f, Side side) const;

  // P_+ for Side::inner, P_- for Side::outer, via ±(i/2)(Xf - Y±f).
  VectorField projection(const RationalTestFunction &f, Side side) const;

  // ±∫ w0 f / (1 - r e^{i(θ-t)}) dt/2π at r = 1 ∓ 10/M with the trapezoid
  // rule on `oversample`·M nodes. Converges only at first order in 1/M.
  VectorField projection_quadrature(const RationalTestFunction &f, Side side,
                                    int oversample = 16) const;

  // -i(P_+ f - P_- f) + i·mean(w0 f).
  VectorField hilbert(const RationalTestFunction &f) const;

  // ∫ w0(t) 2 sin(θ-t)/(1 + r² - 2r cos(θ-t)) f(t) dt/2π at r = 1 - 10/M.
  VectorField hilbert_quadrature(const RationalTestFunction &f, int oversample = 16) const;

  VectorField multiply_w0(const RationalTestFunction &f) const;

  // max over unflagged nodes of ‖(P_+ f + P_- f)(θ) - w0(θ) f(θ)‖.
  double multiplication_residual(const RationalTestFunction &f) const;

  VectorField apply(HardyOperator op, const RationalTestFunction &f) const;

  Complex inner_w0(const RationalTestFunction &f, const RationalTestFunction &g) const;
  Complex inner_w1(const VectorField &f, const VectorField &g) const;

  GramData gram(HardyOperator op, const std::vector<RationalTestFunction> &basis) const;
  double norm_estimate(HardyOperator op, const std::vector<RationalTestFunction> &basis) const;

private:
  std::vector<Matrix> quadrature_weight_samples(int nodes) const;

  DeBrangesSystem system_;
  CircleGrid grid_;
  MatrixWeight w0_;
  CompanionWeightResult companion_;
  std::vector<Matrix> d0_plus_;
  std::vector<Matrix> d0_minus_;
};

// Both sides of
//   ∫ dν0 / ((e^{-it} - z̄2)(e^{it} - z1)) = D0(z2)* [∫ dν1 / (...)] D0(z1),
// the ν0 side by trapezoid quadrature of w0, the ν1 side through ψ1 values.
class GramIdentity
{
public:
  // quadrature_nodes = 0 picks the node count per call from the standoff of
  // the points.
  explicit GramIdentity(const DeBrangesSystem &system, int quadrature_nodes = 0);

  Matrix nu0_side(Complex z1, Complex z2) const;
  Matrix nu1_side(Complex z1, Complex z2) const;
  double residual(Complex z1, Complex z2) const;

  static int nodes_for(Complex z1, Complex z2);

private:
  Matrix nu1_integral(Complex z1, Complex z2) const;
  const std::vector<Matrix> &weight_samples(int nodes) const;

  DeBrangesSystem system_;
  int fixed_nodes_;
  mutable std::vector<std::pair<int, std::vector<Matrix>>> cache_;
};

double b9_residual(const DeBrangesSystem &system, Complex z1, Complex z2);

// Random test functions: pole standoff |1 - |z|| log-uniform in
// [min_standoff, max_standoff], inside or outside with equal probability,
// uniform angle; coefficients standard complex Gaussian.
struct TestFunctionSampler
{
  double min_standoff = 1e-2;
  double max_standoff = 0.9;
  int max_poles = 5;

  Complex pole(std::mt19937_64 &rng) const;
  Vector coefficient(std::mt19937_64 &rng, int dim) const;
  RationalTestFunction function(std::mt19937_64 &rng, int dim) const;
  RationalTestFunction single_pole(std::mt19937_64 &rng, int dim) const;
};

struct TestFunctionCorpus
{
  std::uint64_t seed = 0;
  std::vector<RationalTestFunction> functions;
};

TestFunctionCorpus random_corpus(std::uint64_t seed, int count, int dim,
                                 const TestFunctionSampler &sampler = {});
std::string dump_corpus(const TestFunctionCorpus &corpus);
TestFunctionCorpus parse_corpus(const std::string &text);

}  // namespace twoweight

#endif  // TWOWEIGHT_HARDY_HPP
