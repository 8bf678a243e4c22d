// SPDX-License-Identifier: Apache-2.0

#include "twoweight/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include "twoweight/debranges.hpp"
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

constexpr double kUnitClamp = 1e-12;

double unit_clamp(double x)
{
  x = std::clamp(x, 0.0, 1.0);
  return 1.0 - x <= kUnitClamp ? 1.0 : x;
}

double wrap_angle(double omega)
{
  double w = std::fmod(omega, 2.0 * kPi);
  if (w < 0.0)
  {
    w += 2.0 * kPi;
  }
  return w >= 2.0 * kPi ? 0.0 : w;
}

Vector diag_phase(const RealVector &angle, double sign)
{
  Vector out(angle.size());
  for (Eigen::Index i = 0; i < angle.size(); i++)
  {
    out(i) = std::polar(1.0, sign * angle(i));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix SpectralMeasure::total() const
{
  if (atoms.empty())
  {
    return Matrix();
  }
  Matrix acc = Matrix::Zero(atoms.front().mass.rows(), atoms.front().mass.cols());
  for (const auto &a : atoms)
  {
    acc += a.mass;
  }
  return acc;
}

double SpectralMeasure::total_trace() const
{
  double acc = 0.0;
  for (const auto &a : atoms)
  {
    acc += a.trace;
  }
  return acc;
}

double SpectralMeasure::trace_within(double center, double radius) const
{
  double acc = 0.0;
  for (const auto &a : atoms)
  {
    const double d = std::abs(reduce_angle(a.omega - center));
    if (d <= radius)
    {
      acc += a.trace;
    }
  }
  return acc;
}

double SpectralMeasure::cumulative_trace(double omega) const
{
  double acc = 0.0;
  for (const auto &a : atoms)
  {
    if (a.omega <= omega)
    {
      acc += a.trace;
    }
  }
  return acc;
}

std::string spectral_csv(const SpectralMeasure &measure)
{
  std::ostringstream out;
  out << std::setprecision(17) << "omega,trace\n";
  for (const auto &a : measure.atoms)
  {
    out << a.omega << ',' << a.trace << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

TruncatedModel::TruncatedModel(const MatrixWeight &w0, int modes)
  : grid_(modes), dim_(w0.dim())
{
  if (static_cast<long long>(modes) * dim_ > kMaxSize)
  {
    throw ResourceError("model size M·k = " + std::to_string(modes * dim_) +
                        " exceeds the cap " + std::to_string(kMaxSize));
  }
  if (!is_normalized(w0, 1e-8))
  {
    throw ValidationError("model requires a normalized weight");
  }
  // Fourier-form weights are evaluated directly so that M may sit below the
  // sampling grid of the weight.
  const MatrixWeight w = w0.is_fourier() ? w0 : w0.on_grid(modes);
  const int n = size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(modes));
  g_.resize(dim_, n);
  for (int m = 0; m < modes; m++)
  {
    const Matrix wm =
        w.is_fourier() ? linalg::clamp_psd(w.evaluate(grid_.node(m)), "w0") : w.sample(m);
    g_.middleCols(static_cast<Eigen::Index>(m) * dim_, dim_) = linalg::psd_sqrt(wm) * scale;
  }

  // G* = Q S U*.
  Eigen::JacobiSVD<Matrix> svd(g_.adjoint(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  q_ = svd.matrixU();
  u_ = svd.matrixV();
  s_ = svd.singularValues();
  const Eigen::Index r = s_.size();
  s2_.resize(r);
  half_.resize(r);
  for (Eigen::Index i = 0; i < r; i++)
  {
    const double raw = s_(i) * s_(i);
    if (raw > 1.0 + 1e-6)
    {
      throw NumericalError("G*G has an eigenvalue above 1");
    }
    s2_(i) = unit_clamp(raw);
    half_(i) = std::asin(s2_(i));
  }
  gg_star_ = u_ * s2_.cast<Complex>().asDiagonal() * u_.adjoint();
  RealVector beta_diag(r);
  for (Eigen::Index i = 0; i < r; i++)
  {
    beta_diag(i) = std::sqrt(std::max(0.0, 1.0 - s2_(i) * s2_(i)));
  }
  alpha_ = u_ * beta_diag.cast<Complex>().asDiagonal() * u_.adjoint();
}

void TruncatedModel::require_dense() const
{
  if (size() > kMaxDenseSize)
  {
    throw ResourceError("dense model operations require M·k ≤ " + std::to_string(kMaxDenseSize));
  }
}

Matrix TruncatedModel::u0() const
{
  require_dense();
  Vector d(size());
  for (int m = 0; m < modes(); m++)
  {
    d.segment(static_cast<Eigen::Index>(m) * dim_, dim_).setConstant(grid_.point(m));
  }
  return d.asDiagonal();
}

Matrix TruncatedModel::exp_half_theta() const
{
  require_dense();
  const Vector c = diag_phase(half_, 1.0).array() - 1.0;
  return Matrix::Identity(size(), size()) + q_ * c.asDiagonal() * q_.adjoint();
}

Matrix TruncatedModel::u1() const
{
  const Matrix e = exp_half_theta();
  return e * u0() * e;
}

Matrix TruncatedModel::theta() const
{
  require_dense();
  return q_ * (2.0 * half_).cast<Complex>().asDiagonal() * q_.adjoint();
}

Matrix TruncatedModel::beta() const
{
  require_dense();
  Vector c(s2_.size());
  for (Eigen::Index i = 0; i < s2_.size(); i++)
  {
    c(i) = std::sqrt(std::max(0.0, 1.0 - s2_(i) * s2_(i))) - 1.0;
  }
  return Matrix::Identity(size(), size()) + q_ * c.asDiagonal() * q_.adjoint();
}

Matrix TruncatedModel::psi(int j, Complex z, SolveMode mode) const
{
  if (j != 0 && j != 1)
  {
    throw ValidationError("model index must be 0 or 1");
  }
  if (!(std::abs(1.0 - std::abs(z)) >= 0.05))
  {
    throw DomainError("model evaluation requires |1 - |z|| ≥ 0.05");
  }
  if (mode == SolveMode::automatic)
  {
    mode = SolveMode::structured;
  }
  // (U + z)(U - z)^{-1} = I + 2z(U - z)^{-1}
  if (mode == SolveMode::dense)
  {
    const Matrix u = j == 0 ? u0() : u1();
    const Matrix shifted = u - z * Matrix::Identity(size(), size());
    const Eigen::PartialPivLU<Matrix> lu(shifted);
    const Matrix x = lu.solve(Matrix(g_.adjoint()));
    return kI * (gg_star_ + 2.0 * z * g_ * x);
  }

  // K = Q*(U0 - z)^{-1}Q. For U1, (U1 - z)^{-1} = E*(U0 - zE*²)^{-1}E* with
  // E*² = I + QCQ*, and GE* = U S e^{-iΘ/2}|_Q Q*, which reduces
  // G(U1 - z)^{-1}G* to U S e^{-ia} K (I + BK)^{-1} e^{-ia} S U*, B = -zC.
  const Eigen::Index r = s_.size();
  Matrix k = Matrix::Zero(r, r);
  for (int m = 0; m < modes(); m++)
  {
    const Complex inv = 1.0 / (grid_.point(m) - z);
    const auto block = q_.middleRows(static_cast<Eigen::Index>(m) * dim_, dim_);
    k.noalias() += inv * (block.adjoint() * block);
  }
  const Matrix us = u_ * s_.cast<Complex>().asDiagonal();
  Matrix inner;
  if (j == 0)
  {
    inner = k;
  }
  else
  {
    const Vector phase = diag_phase(half_, -1.0);
    Vector b(r);
    for (Eigen::Index i = 0; i < r; i++)
    {
      b(i) = -z * (phase(i) * phase(i) - 1.0);
    }
    const Matrix system = Matrix::Identity(r, r) + b.asDiagonal() * k;
    inner = phase.asDiagonal() * (k * system.fullPivLu().inverse()) * phase.asDiagonal();
  }
  return kI * (gg_star_ + 2.0 * z * us * inner * us.adjoint());
}

double TruncatedModel::identity_residual(Complex z) const
{
  const Matrix d0 = alpha_ + psi(0, z);
  const Matrix d1 = alpha_ - psi(1, z);
  const Matrix id = Matrix::Identity(dim_, dim_);
  return std::max(linalg::operator_norm(d0 * d1 - id), linalg::operator_norm(d1 * d0 - id));
}

double TruncatedModel::b5_residual() const
{
  Vector c(s2_.size());
  for (Eigen::Index i = 0; i < s2_.size(); i++)
  {
    c(i) = std::sqrt(std::max(0.0, 1.0 - s2_(i) * s2_(i))) - 1.0;
  }
  const Matrix g_beta = g_ + ((g_ * q_) * c.asDiagonal()) * q_.adjoint();
  return linalg::operator_norm(alpha_ * g_ - g_beta);
}

double TruncatedModel::unitarity_drift() const
{
  // E = I + QcQ*, E*E - I = QXQ*, X = c̄ + c + c̄ (Q*Q) c; with P = U0*Q,
  // U1*U1 - I = QXQ* + (E*P) X (E*P)*.
  const Eigen::Index r = s_.size();
  const Vector c = diag_phase(half_, 1.0).array() - 1.0;
  const Matrix gram = q_.adjoint() * q_;
  const Matrix x = Matrix(c.conjugate().asDiagonal()) + Matrix(c.asDiagonal()) +
                   c.conjugate().asDiagonal() * gram * c.asDiagonal();
  Matrix p = q_;
  for (int m = 0; m < modes(); m++)
  {
    p.middleRows(static_cast<Eigen::Index>(m) * dim_, dim_) *= std::conj(grid_.point(m));
  }
  const Matrix ep = p + q_ * (c.conjugate().asDiagonal() * (q_.adjoint() * p));
  Matrix a(size(), 2 * r);
  a << q_, ep;
  Matrix y = Matrix::Zero(2 * r, 2 * r);
  y.topLeftCorner(r, r) = x;
  y.bottomRightCorner(r, r) = x;
  const Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix rr = qr.matrixQR().topRows(2 * r).triangularView<Eigen::Upper>();
  return linalg::operator_norm(rr * y * rr.adjoint());
}

SpectralMeasure TruncatedModel::spectral_nu1() const
{
  require_dense();
  const Eigen::ComplexSchur<Matrix> schur(u1());
  if (schur.info() != Eigen::Success)
  {
    throw NumericalError("Schur decomposition of U1 failed");
  }
  const Matrix &t = schur.matrixT();
  const Matrix gz = g_ * schur.matrixU();
  SpectralMeasure out;
  out.atoms.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index l = 0; l < t.rows(); l++)
  {
    SpectralAtom atom;
    atom.omega = wrap_angle(std::arg(t(l, l)));
    atom.mass = gz.col(l) * gz.col(l).adjoint();
    atom.trace = atom.mass.trace().real();
    out.atoms.push_back(std::move(atom));
  }
  std::stable_sort(out.atoms.begin(), out.atoms.end(),
                   [](const SpectralAtom &a, const SpectralAtom &b) { return a.omega < b.omega; });
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CrossValidationRow> cross_validate(const MatrixWeight &w0,
                                               const std::vector<Complex> &zs,
                                               const std::vector<int> &modes)
{
  const DeBrangesSystem system(w0);
  std::vector<Matrix> reference;
  reference.reserve(zs.size());
  for (const Complex z : zs)
  {
    if (!(std::abs(1.0 - std::abs(z)) >= 0.05))
    {
      throw DomainError("cross validation requires |1 - |z|| ≥ 0.05");
    }
    reference.push_back(system.psi1(z));
  }
  std::vector<CrossValidationRow> rows;
  std::vector<std::vector<double>> errors(zs.size());
  for (const int m : modes)
  {
    const TruncatedModel model(w0, m);
    for (std::size_t i = 0; i < zs.size(); i++)
    {
      errors[i].push_back(linalg::operator_norm(model.psi(1, zs[i]) - reference[i]));
    }
  }
  for (std::size_t i = 0; i < zs.size(); i++)
  {
    for (std::size_t j = 0; j < modes.size(); j++)
    {
      const double order = j + 1 < modes.size()
                               ? std::log2(errors[i][j] / errors[i][j + 1])
                               : std::numeric_limits<double>::quiet_NaN();
      rows.push_back({zs[i], modes[j], errors[i][j], order});
    }
  }
  return rows;
}

std::string cross_validation_csv(const std::vector<CrossValidationRow> &rows)
{
  std::ostringstream out;
  out << std::setprecision(17) << "z_re,z_im,M,error,order\n";
  for (const auto &r : rows)
  {
    out << r.z.real() << ',' << r.z.imag() << ',' << r.modes << ',' << r.error << ',';
    if (std::isnan(r.order))
    {
      out << "nan";
    }
    else
    {
      out << r.order;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace twoweight
