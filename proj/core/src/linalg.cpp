// SPDX-License-Identifier: Apache-2.0

#include "twoweight/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include "twoweight/error.hpp"

namespace twoweight::linalg
{

Matrix hermitian_part(const Matrix &a)
{
  return 0.5 * (a + a.adjoint());
}

double hermitian_defect(const Matrix &a)
{
  if (a.size() == 0)
  {
    return 0.0;
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

RealVector hermitian_eigenvalues(const Matrix &a)
{
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(a), Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

Matrix hermitian_function(const Matrix &a, const std::function<double(double)> &f)
{
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(a));
  RealVector lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); i++)
  {
    lam(i) = f(lam(i));
  }
  const Matrix &v = eig.eigenvectors();
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix hermitian_function_complex(const Matrix &a,
                                  const std::function<Complex(double)> &f)
{
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(a));
  const RealVector &lam = eig.eigenvalues();
  Vector d(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); i++)
  {
    d(i) = f(lam(i));
  }
  const Matrix &v = eig.eigenvectors();
  return v * d.asDiagonal() * v.adjoint();
}

Matrix clamp_psd(const Matrix &a, const char *what)
{
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(a));
  RealVector lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.size() > 0 && lam.minCoeff() < -kPsdClamp * scale)
  {
    throw ValidationError(std::string(what) + " is not positive semidefinite (eigenvalue " +
                          std::to_string(lam.minCoeff()) + ")");
  }
  bool clamped = false;
  for (Eigen::Index i = 0; i < lam.size(); i++)
  {
    if (lam(i) < 0.0)
    {
      lam(i) = 0.0;
      clamped = true;
    }
  }
  if (!clamped)
  {
    return hermitian_part(a);
  }
  const Matrix &v = eig.eigenvectors();
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix psd_sqrt(const Matrix &a)
{
  return hermitian_function(clamp_psd(a), [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

RealVector singular_values(const Matrix &a)
{
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double operator_norm(const Matrix &a)
{
  if (a.size() == 0)
  {
    return 0.0;
  }
  return singular_values(a)(0);
}

double smallest_singular_value(const Matrix &a)
{
  const RealVector s = singular_values(a);
  return s(s.size() - 1);
}

double normalized_condition(const Matrix &a)
{
  const RealVector s = singular_values(a);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0))
  {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(1.0, s(0)) / smin;
}

Matrix inverse(const Matrix &a)
{
  return a.fullPivLu().inverse();
}

int numerical_rank(const Matrix &a, double threshold)
{
  const RealVector lam = hermitian_eigenvalues(a);
  return static_cast<int>((lam.array() > threshold).count());
}

}  // namespace twoweight::linalg
