// SPDX-License-Identifier: Apache-2.0

#include "twoweight/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

// Eigenvalues of GG* this close to 1 are taken to be exactly 1, so that α
// does not pick up a spurious O(1e-8) square root of roundoff.
constexpr double kUnitClamp = 1e-12;

double trace_real(const Matrix &a)
{
  return a.trace().real();
}

}  // namespace

int CompanionWeightResult::flagged_count() const
{
  return static_cast<int>(std::count(singular_flags.begin(), singular_flags.end(), true));
}

double CompanionWeightResult::integrated_trace() const
{
  double acc = 0.0;
  for (std::size_t m = 0; m < w1.size(); m++)
  {
    if (!singular_flags[m])
    {
      acc += trace_real(w1[m]);
    }
  }
  return acc / static_cast<double>(grid.size());
}

MatrixWeight CompanionWeightResult::as_weight() const
{
  return MatrixWeight::from_samples(MatrixSampleField{grid, w1}, 1.0);
}

DeBrangesSystem::DeBrangesSystem(const MatrixWeight &w0, double cond_cutoff)
  : w0_(w0), psi0_(w0), cond_cutoff_(cond_cutoff)
{
  const Matrix mean = linalg::hermitian_part(circle_mean(w0.field()));
  const RealVector lam = linalg::hermitian_eigenvalues(mean);
  if (lam.maxCoeff() > 1.0 + 1e-6)
  {
    throw NumericalError("normalization violated: λ_max(GG*) = " +
                         std::to_string(lam.maxCoeff()));
  }
  const auto unit = [](double x)
  {
    x = std::clamp(x, 0.0, 1.0);
    return 1.0 - x <= kUnitClamp ? 1.0 : x;
  };
  gg_star_ = linalg::hermitian_function(mean, unit);
  alpha_ = linalg::hermitian_function(
      mean,
      [&](double x)
      {
        const double g = unit(x);
        return std::sqrt(std::clamp(1.0 - g * g, 0.0, 1.0));
      });
}

Matrix DeBrangesSystem::d0(Complex z) const
{
  return alpha_ + psi0_.psi(z);
}

Matrix DeBrangesSystem::d1(Complex z) const
{
  const Matrix d = d0(z);
  const double cond = linalg::normalized_condition(d);
  if (!(cond <= cond_cutoff_))
  {
    throw NumericalError("D0 numerically singular at z (cond " + std::to_string(cond) + ")");
  }
  return -linalg::inverse(d);
}

Matrix DeBrangesSystem::psi1(Complex z) const
{
  return alpha_ + d1(z);
}

double DeBrangesSystem::identity_residual(Complex z) const
{
  const Matrix a = alpha_ + psi0_.psi(z);
  const Matrix b = alpha_ - psi1(z);
  const Matrix id = Matrix::Identity(dim(), dim());
  return std::max(linalg::operator_norm(a * b - id), linalg::operator_norm(b * a - id));
}

DeBrangesSystem::Boundary DeBrangesSystem::d0_boundary(double theta, Side side,
                                                       BoundaryMethod method) const
{
  const BoundaryValue psi = psi0_.boundary(theta, side, method);
  Boundary out;
  out.d0 = alpha_ + psi.value;
  out.converged = psi.converged;
  out.error_estimate = psi.error_estimate;
  out.cond = linalg::normalized_condition(out.d0);
  if (out.converged && out.cond <= cond_cutoff_)
  {
    out.d1 = -linalg::inverse(out.d0);
  }
  return out;
}

Matrix DeBrangesSystem::poisson_average(int j, double r, double theta) const
{
  if (j != 0 && j != 1)
  {
    throw ValidationError("measure index must be 0 or 1");
  }
  if (!(r < 1.0))
  {
    throw DomainError("Poisson average needs r < 1");
  }
  const Complex z = std::polar(r, theta);
  const Matrix psi = j == 0 ? psi0_.psi(z) : psi1(z);
  return linalg::hermitian_part((psi - psi.adjoint()) / (2.0 * kI));
}

CompanionWeightResult DeBrangesSystem::companion_weight(const CircleGrid &grid,
                                                        BoundaryMethod method) const
{
  CompanionWeightResult res{grid, {}, {}, {}, 0.0, trace_real(gg_star_)};
  const int m_size = grid.size();
  res.w1.resize(static_cast<std::size_t>(m_size));
  res.singular_flags.assign(static_cast<std::size_t>(m_size), false);
  res.cond_profile.assign(static_cast<std::size_t>(m_size), 0.0);

  const double r_last = 1.0 - std::ldexp(1.0, -14);
  for (int m = 0; m < m_size; m++)
  {
    const double theta = grid.node(m);
    const auto idx = static_cast<std::size_t>(m);
    const Boundary b = d0_boundary(theta, Side::inner, method);
    res.cond_profile[idx] = b.cond;

    bool flagged = false;
    Matrix w1;
    if (method == BoundaryMethod::series)
    {
      if (b.d1)
      {
        const Matrix psi1_plus = alpha_ + *b.d1;
        w1 = (psi1_plus - psi1_plus.adjoint()) / (2.0 * kI);
      }
      else
      {
        flagged = true;
      }
    }
    else
    {
      const BoundaryValue lim = radial_limit(
          [&](double r)
          {
            try
            {
              return poisson_average(1, r, theta);
            }
            catch (const NumericalError &)
            {
              return Matrix(Matrix::Constant(dim(), dim(),
                                             std::numeric_limits<double>::quiet_NaN()));
            }
          },
          Side::inner);
      flagged = !lim.converged || !b.d1;
      w1 = lim.value;
    }
    if (flagged || w1.size() == 0 || !w1.allFinite())
    {
      flagged = true;
      w1 = poisson_average(1, r_last, theta);
    }
    res.singular_flags[idx] = flagged;
    res.w1[idx] = linalg::hermitian_function(linalg::hermitian_part(w1),
                                             [](double x) { return std::max(x, 0.0); });
  }
  res.deficit = res.gg_trace - res.integrated_trace();
  return res;
}

Matrix DeBrangesSystem::companion_weight_reconstructed(double theta) const
{
  const Boundary b = d0_boundary(theta, Side::inner, BoundaryMethod::series);
  if (!b.d1)
  {
    throw NumericalError("D0^+ numerically singular at θ = " + std::to_string(theta));
  }
  const Matrix dinv = -*b.d1;
  const Matrix w0 = linalg::clamp_psd(w0_.evaluate(theta), "w0");
  return linalg::hermitian_part(dinv.adjoint() * w0 * dinv);
}

double DeBrangesSystem::poisson_sandwich_sup(double r, const CircleGrid &grid) const
{
  double best = 0.0;
  for (int m = 0; m < grid.size(); m++)
  {
    const Matrix p0 = linalg::psd_sqrt(poisson_average(0, r, grid.node(m)));
    const Matrix p1 = linalg::clamp_psd(poisson_average(1, r, grid.node(m)), "P_r*w1");
    best = std::max(best, linalg::hermitian_eigenvalues(p0 * p1 * p0).maxCoeff());
  }
  return best;
}

std::string companion_weight_csv(const CompanionWeightResult &result)
{
  std::ostringstream out;
  out << std::setprecision(17);
  const int k = result.w1.empty() ? 0 : static_cast<int>(result.w1.front().rows());
  out << "theta";
  for (int i = 0; i < k; i++)
  {
    for (int j = 0; j < k; j++)
    {
      out << ",w1_" << i << j << "_re,w1_" << i << j << "_im";
    }
  }
  out << ",flag,cond\n";
  for (int m = 0; m < result.grid.size(); m++)
  {
    const auto idx = static_cast<std::size_t>(m);
    out << result.grid.node(m);
    for (int i = 0; i < k; i++)
    {
      for (int j = 0; j < k; j++)
      {
        out << ',' << result.w1[idx](i, j).real() << ',' << result.w1[idx](i, j).imag();
      }
    }
    out << ',' << (result.singular_flags[idx] ? 1 : 0) << ',' << result.cond_profile[idx] << '\n';
  }
  return out.str();
}

}  // namespace twoweight
