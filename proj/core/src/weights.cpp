// SPDX-License-Identifier: Apache-2.0

#include "twoweight/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

constexpr double kHermitianTol = 1e-10;
constexpr double kVanishTol = 1e-14;

Matrix evaluate_series(const std::vector<Matrix> &coeff, double theta)
{
  Matrix acc = coeff.front();
  for (std::size_t n = 1; n < coeff.size(); n++)
  {
    const Complex e = std::polar(1.0, static_cast<double>(n) * theta);
    acc += e * coeff[n] + std::conj(e) * coeff[n].adjoint();
  }
  return acc;
}

MatrixSampleField sample_series(const std::vector<Matrix> &coeff, const CircleGrid &grid)
{
  MatrixSampleField field{grid, {}};
  field.values.reserve(static_cast<std::size_t>(grid.size()));
  for (int m = 0; m < grid.size(); m++)
  {
    field.values.push_back(linalg::hermitian_part(evaluate_series(coeff, grid.node(m))));
  }
  return field;
}

void clamp_field(MatrixSampleField &field)
{
  for (auto &v : field.values)
  {
    v = linalg::clamp_psd(v, "weight sample");
  }
}

int next_power_of_two(int n)
{
  int p = 1;
  while (p < n)
  {
    p <<= 1;
  }
  return p;
}

}  // namespace

MatrixWeight::MatrixWeight(MatrixSampleField field, std::vector<Matrix> coeff, double p,
                           bool fourier)
  : field_(std::move(field)), coeff_(std::move(coeff)), schatten_p_(p), fourier_(fourier)
{
}

int MatrixWeight::minimal_grid_size(int degree)
{
  return next_power_of_two(std::max(64, 8 * (degree + 1)));
}

MatrixWeight MatrixWeight::from_samples(MatrixSampleField field, double schatten_p)
{
  if (!(schatten_p >= 1.0) || !std::isfinite(schatten_p))
  {
    throw ValidationError("schatten_p must lie in [1, inf)");
  }
  field.validate();
  for (auto &v : field.values)
  {
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    if (linalg::hermitian_defect(v) > kHermitianTol * scale)
    {
      throw ValidationError("weight sample is not Hermitian");
    }
    v = linalg::hermitian_part(v);
  }
  clamp_field(field);

  const FourierCoefficients f = fourier_coefficients(field);
  const int half = field.grid.size() / 2;
  std::vector<Matrix> coeff;
  coeff.reserve(static_cast<std::size_t>(half) + 1);
  coeff.push_back(linalg::hermitian_part(f(0)));
  for (int n = 1; n < half; n++)
  {
    coeff.push_back(f(n));
  }
  coeff.push_back(0.5 * linalg::hermitian_part(f(-half)));
  return MatrixWeight(std::move(field), std::move(coeff), schatten_p, false);
}

MatrixWeight MatrixWeight::from_fourier(std::vector<Matrix> coefficients, double schatten_p,
                                        int grid_size)
{
  if (!(schatten_p >= 1.0) || !std::isfinite(schatten_p))
  {
    throw ValidationError("schatten_p must lie in [1, inf)");
  }
  if (coefficients.empty())
  {
    throw ValidationError("Fourier weight needs at least the n = 0 coefficient");
  }
  const Eigen::Index k = coefficients.front().rows();
  if (k < 1)
  {
    throw ValidationError("matrix dimension must be at least 1");
  }
  for (const auto &c : coefficients)
  {
    if (c.rows() != k || c.cols() != k || !c.allFinite())
    {
      throw ValidationError("Fourier coefficients must be finite k×k matrices");
    }
  }
  const double scale0 = std::max(1.0, coefficients.front().cwiseAbs().maxCoeff());
  if (linalg::hermitian_defect(coefficients.front()) > kHermitianTol * scale0)
  {
    throw ValidationError("the n = 0 Fourier coefficient must be Hermitian");
  }
  coefficients.front() = linalg::hermitian_part(coefficients.front());
  const int degree = static_cast<int>(coefficients.size()) - 1;
  const int minimal = minimal_grid_size(degree);
  if (grid_size == 0)
  {
    grid_size = minimal;
  }
  if (grid_size < minimal)
  {
    throw ValidationError("grid size " + std::to_string(grid_size) +
                          " too small for a degree-" + std::to_string(degree) +
                          " weight (need >= " + std::to_string(minimal) + ")");
  }
  MatrixSampleField field = sample_series(coefficients, CircleGrid(grid_size));
  clamp_field(field);
  return MatrixWeight(std::move(field), std::move(coefficients), schatten_p, true);
}

Matrix MatrixWeight::evaluate(double theta) const
{
  return linalg::hermitian_part(evaluate_series(coeff_, theta));
}

MatrixWeight MatrixWeight::scaled(double factor) const
{
  MatrixWeight out = *this;
  for (auto &v : out.field_.values)
  {
    v *= factor;
  }
  for (auto &c : out.coeff_)
  {
    c *= factor;
  }
  return out;
}

MatrixWeight MatrixWeight::on_grid(int grid_size) const
{
  if (grid_size == grid().size())
  {
    return *this;
  }
  if (fourier_)
  {
    return from_fourier(coeff_, schatten_p_, grid_size);
  }
  MatrixSampleField field = sample_series(coeff_, CircleGrid(grid_size));
  // Interpolating onto a coarser grid aliases; keep the exact coefficient set
  // only when refining.
  if (grid_size > grid().size())
  {
    clamp_field(field);
    std::vector<Matrix> coeff = coeff_;
    return MatrixWeight(std::move(field), std::move(coeff), schatten_p_, false);
  }
  return from_samples(std::move(field), schatten_p_);
}

void ScalarWeight::validate() const
{
  if (static_cast<int>(values.size()) != grid.size())
  {
    throw ValidationError("scalar weight sample count does not match grid size");
  }
  for (double v : values)
  {
    if (std::isnan(v) || v <= kVanishTol)
    {
      throw ValidationError("weight vanishes on a grid point");
    }
  }
}

double schatten_norm(const Matrix &a, double p)
{
  if (!(p >= 1.0))
  {
    throw DomainError("Schatten norm requires p >= 1");
  }
  if (a.size() == 0)
  {
    return 0.0;
  }
  const RealVector s = linalg::singular_values(a);
  const double smax = s(0);
  if (smax == 0.0)
  {
    return 0.0;
  }
  if (std::isinf(p))
  {
    return smax;
  }
  // Scale by σ_max to avoid overflow for large p.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); i++)
  {
    acc += std::pow(s(i) / smax, p);
  }
  return smax * std::pow(acc, 1.0 / p);
}

double mean_schatten_norm(const MatrixWeight &w)
{
  double acc = 0.0;
  for (const auto &v : w.samples())
  {
    acc += schatten_norm(v, w.schatten_p());
  }
  return acc / static_cast<double>(w.grid().size());
}

bool is_normalized(const MatrixWeight &w, double tol)
{
  return std::abs(mean_schatten_norm(w) - 1.0) <= tol;
}

MatrixWeight normalize(const MatrixWeight &w)
{
  const double mean = mean_schatten_norm(w);
  if (!(mean > 0.0))
  {
    throw ValidationError("degenerate weight: identically zero on the grid");
  }
  return w.scaled(1.0 / mean);
}

Matrix moment_zero(const MatrixWeight &w)
{
  const Matrix mean = linalg::hermitian_part(circle_mean(w.field()));
  const double norm = linalg::operator_norm(mean);
  if (norm > 1.0 + 1e-6)
  {
    throw NumericalError("normalization violated: ‖GG*‖ = " + std::to_string(norm));
  }
  return linalg::hermitian_function(mean, [](double x) { return std::clamp(x, 0.0, 1.0); });
}

KoosisForward koosis_forward(const ScalarWeight &v0, double schatten_p)
{
  v0.validate();
  MatrixSampleField field{v0.grid, {}};
  field.values.reserve(v0.values.size());
  for (double v : v0.values)
  {
    field.values.push_back(Matrix::Constant(1, 1, Complex(1.0 / v, 0.0)));
  }
  const MatrixWeight raw = MatrixWeight::from_samples(std::move(field), schatten_p);
  const double mean = mean_schatten_norm(raw);
  if (!(mean > 0.0) || !std::isfinite(mean))
  {
    throw ValidationError("reciprocal weight is not integrable on the grid");
  }
  return {raw.scaled(1.0 / mean), 1.0 / mean};
}

ScalarWeight koosis_backward(const MatrixWeight &w, double normalization)
{
  if (w.dim() != 1)
  {
    throw ValidationError("the Koosis transform is defined for scalar weights only");
  }
  ScalarWeight v{w.grid(), {}};
  v.values.reserve(static_cast<std::size_t>(w.grid().size()));
  for (const auto &s : w.samples())
  {
    const double x = s(0, 0).real();
    v.values.push_back(x > 0.0 ? normalization / x : std::numeric_limits<double>::infinity());
  }
  return v;
}

double muckenhoupt_sup(const ScalarWeight &v0)
{
  v0.validate();
  const int m_size = v0.grid.size();
  double best = 0.0;
  for (int len = 4; len <= m_size; len <<= 1)
  {
    for (int start = 0; start < m_size; start += len)
    {
      double sv = 0.0, sinv = 0.0;
      for (int m = start; m < start + len; m++)
      {
        sv += v0.values[static_cast<std::size_t>(m)];
        sinv += 1.0 / v0.values[static_cast<std::size_t>(m)];
      }
      best = std::max(best, (sv / len) * (sinv / len));
    }
  }
  return best;
}

namespace fixtures
{

namespace
{
Matrix scalar(double x)
{
  return Matrix::Constant(1, 1, Complex(x, 0.0));
}
}  // namespace

MatrixWeight constant(int grid_size)
{
  return MatrixWeight::from_fourier({scalar(1.0)}, 1.0, grid_size);
}

MatrixWeight cosine(int grid_size)
{
  return MatrixWeight::from_fourier({scalar(1.0), scalar(0.5)}, 1.0, grid_size);
}

MatrixWeight diagonal(int grid_size)
{
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.6;
  d(1, 1) = 0.8;
  return MatrixWeight::from_fourier({d}, 2.0, grid_size);
}

MatrixWeight rank_one(int grid_size)
{
  Matrix c0 = Matrix::Zero(2, 2), c1 = Matrix::Zero(2, 2);
  c0(0, 0) = 1.0;
  c1(0, 0) = 0.5;
  return MatrixWeight::from_fourier({c0, c1}, 1.0, grid_size);
}

std::vector<std::string> names()
{
  return {"const", "cos", "diag", "rank1"};
}

MatrixWeight by_name(const std::string &name, int grid_size)
{
  if (name == "const")
  {
    return constant(grid_size);
  }
  if (name == "cos")
  {
    return cosine(grid_size);
  }
  if (name == "diag")
  {
    return diagonal(grid_size);
  }
  if (name == "rank1")
  {
    return rank_one(grid_size);
  }
  throw ValidationError("unknown fixture '" + name + "'");
}

}  // namespace fixtures

MatrixWeight random_trig_weight(std::mt19937_64 &rng, int dim, int degree, double schatten_p,
                                int grid_size)
{
  if (dim < 1 || degree < 0)
  {
    throw ValidationError("random weight needs dim >= 1 and degree >= 0");
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Matrix> q(static_cast<std::size_t>(degree) + 1, Matrix(dim, dim));
  for (auto &a : q)
  {
    for (int i = 0; i < dim; i++)
    {
      for (int j = 0; j < dim; j++)
      {
        const double re = normal(rng);
        const double im = normal(rng);
        a(i, j) = Complex(re, im);
      }
    }
  }
  // Q(θ) = Σ_j A_j e^{ijθ}  ⇒  (Q*Q)^(n) = Σ_i A_i* A_{i+n}.
  std::vector<Matrix> coeff(static_cast<std::size_t>(degree) + 1, Matrix::Zero(dim, dim));
  for (int n = 0; n <= degree; n++)
  {
    for (int i = 0; i + n <= degree; i++)
    {
      coeff[static_cast<std::size_t>(n)] +=
          q[static_cast<std::size_t>(i)].adjoint() * q[static_cast<std::size_t>(i + n)];
    }
  }
  return normalize(MatrixWeight::from_fourier(std::move(coeff), schatten_p, grid_size));
}

}  // namespace twoweight
