// SPDX-License-Identifier: Apache-2.0

#include "twoweight/herglotz.hpp"

#include <array>
#include <cmath>
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

constexpr int kLadderFirst = 6;
constexpr int kLadderLast = 14;

double max_abs(const Matrix &a)
{
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace

BoundaryValue radial_limit(const std::function<Matrix(double)> &f, Side side)
{
  constexpr int n = kLadderLast - kLadderFirst + 1;
  std::vector<Matrix> raw;
  raw.reserve(n);
  for (int j = kLadderFirst; j <= kLadderLast; j++)
  {
    const double h = std::ldexp(1.0, -j);
    Matrix v = f(side == Side::inner ? 1.0 - h : 1.0 + h);
    if (!v.allFinite())
    {
      break;
    }
    raw.push_back(std::move(v));
  }
  BoundaryValue out;
  if (raw.size() < 3)
  {
    out.value = raw.empty() ? Matrix() : raw.back();
    out.converged = false;
    out.error_estimate = std::numeric_limits<double>::infinity();
    return out;
  }

  const std::size_t m = raw.size();
  const double d_last = max_abs(raw[m - 1] - raw[m - 2]);
  const double d_prev = max_abs(raw[m - 2] - raw[m - 3]);
  const double scale = 1.0 + max_abs(raw[m - 1]);
  if (d_last > d_prev && d_last > 1e-12 * scale)
  {
    out.value = raw.back();
    out.converged = false;
    out.error_estimate = d_last;
    return out;
  }

  // Neville/Richardson table with step ratio 2.
  std::vector<Matrix> row = raw;
  Matrix prev_diag = row.back();
  double est = d_last;
  for (std::size_t level = 1; level < m; level++)
  {
    const double factor = std::ldexp(1.0, static_cast<int>(level)) - 1.0;
    std::vector<Matrix> next;
    next.reserve(row.size() - 1);
    for (std::size_t i = 1; i < row.size(); i++)
    {
      next.push_back(row[i] + (row[i] - row[i - 1]) / factor);
    }
    est = max_abs(next.back() - prev_diag);
    prev_diag = next.back();
    row = std::move(next);
  }
  out.value = prev_diag;
  out.error_estimate = est;
  return out;
}

HerglotzEvaluator::HerglotzEvaluator(const MatrixWeight &w, double delta_min)
  : HerglotzEvaluator(w.coefficients(), delta_min)
{
}

HerglotzEvaluator::HerglotzEvaluator(std::vector<Matrix> coefficients, double delta_min)
  : coeff_(std::move(coefficients)), delta_min_(delta_min)
{
  if (coeff_.empty())
  {
    throw ValidationError("Herglotz evaluator needs at least one coefficient");
  }
  coeff_.front() = linalg::hermitian_part(coeff_.front());
}

Matrix HerglotzEvaluator::series_inner(Complex z) const
{
  // Horner on Σ_{n≥1} Ŵ(n) z^n.
  const int k = dim();
  Matrix acc = Matrix::Zero(k, k);
  for (std::size_t n = coeff_.size() - 1; n >= 1; n--)
  {
    acc = (acc + coeff_[n]) * z;
  }
  return kI * (coeff_.front() + 2.0 * acc);
}

Matrix HerglotzEvaluator::psi(Complex z) const
{
  const double r = std::abs(z);
  if (std::abs(r - 1.0) < delta_min_)
  {
    throw DomainError("too close to the circle; use boundary ops");
  }
  if (r < 1.0)
  {
    return series_inner(z);
  }
  // ψ(z) = ψ(1/z̄)*.
  return series_inner(1.0 / std::conj(z)).adjoint();
}

BoundaryValue HerglotzEvaluator::boundary(double theta, Side side, BoundaryMethod method) const
{
  if (method == BoundaryMethod::series)
  {
    const Matrix inner = series_inner(std::polar(1.0, theta));
    return {side == Side::inner ? inner : Matrix(inner.adjoint()), 0.0, true};
  }
  return radial_limit([&](double r) { return psi(std::polar(r, theta)); }, side);
}

Matrix HerglotzEvaluator::jump(double theta, BoundaryMethod method) const
{
  const BoundaryValue plus = boundary(theta, Side::inner, method);
  const BoundaryValue minus = boundary(theta, Side::outer, method);
  if (!plus.converged || !minus.converged)
  {
    throw NumericalError("no radial limit at θ = " + std::to_string(theta));
  }
  return (plus.value - minus.value) / (2.0 * kI);
}

}  // namespace twoweight
