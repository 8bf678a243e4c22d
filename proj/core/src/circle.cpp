// SPDX-License-Identifier: Apache-2.0

#include "twoweight/circle.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/FFT>
#include "twoweight/error.hpp"

namespace twoweight
{

bool is_power_of_two(int n)
{
  return n > 0 && (n & (n - 1)) == 0;
}

double reduce_angle(double theta)
{
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0)
  {
    t += 2.0 * kPi;
  }
  if (t >= 2.0 * kPi)
  {
    t = 0.0;
  }
  return t;
}

CircleGrid::CircleGrid(int size) : size_(size)
{
  if (size < 16 || !is_power_of_two(size))
  {
    throw ValidationError("grid size must be a power of two >= 16, got " +
                          std::to_string(size));
  }
}

Complex CircleGrid::point(int m) const
{
  return std::polar(1.0, node(m));
}

std::vector<double> CircleGrid::nodes() const
{
  std::vector<double> t(size_);
  for (int m = 0; m < size_; m++)
  {
    t[m] = node(m);
  }
  return t;
}

int CircleGrid::nearest_node(double theta) const
{
  const double t = reduce_angle(theta);
  const int m = static_cast<int>(std::lround(t / spacing()));
  return m % size_;
}

void MatrixSampleField::validate() const
{
  if (static_cast<int>(values.size()) != grid.size())
  {
    throw ValidationError("sample count " + std::to_string(values.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
  const Eigen::Index k = values.front().rows();
  if (k < 1)
  {
    throw ValidationError("matrix dimension must be at least 1");
  }
  for (const auto &v : values)
  {
    if (v.rows() != k || v.cols() != k)
    {
      throw ValidationError("samples must all be square with the same dimension");
    }
    if (!v.allFinite())
    {
      throw ValidationError("sample field contains non-finite values");
    }
  }
}

FourierCoefficients::FourierCoefficients(int size, std::vector<Matrix> by_index)
  : size_(size), coeff_(std::move(by_index))
{
}

const Matrix &FourierCoefficients::operator()(int n) const
{
  if (n < min_index() || n > max_index())
  {
    throw DomainError("Fourier index " + std::to_string(n) + " out of range");
  }
  return coeff_[static_cast<std::size_t>(n - min_index())];
}

double poisson_kernel(double r, double theta)
{
  if (r < 0.0 || r == 1.0 || !std::isfinite(r))
  {
    throw DomainError("Poisson kernel requires r in [0,1) or (1,inf)");
  }
  return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * std::cos(theta));
}

FourierCoefficients fourier_coefficients(const MatrixSampleField &field)
{
  field.validate();
  const int m_size = field.grid.size();
  const int k = field.dim();
  std::vector<Matrix> out(m_size, Matrix::Zero(k, k));
  Eigen::FFT<double> fft;
  std::vector<Complex> in(m_size), spec(m_size);
  for (int i = 0; i < k; i++)
  {
    for (int j = 0; j < k; j++)
    {
      for (int m = 0; m < m_size; m++)
      {
        in[m] = field.values[m](i, j);
      }
      fft.fwd(spec, in);
      // spec[q] = Σ x_m e^{-2πi qm/M}; index n ↔ q = n mod M.
      for (int n = -m_size / 2; n < m_size / 2; n++)
      {
        const int q = (n + m_size) % m_size;
        out[n + m_size / 2](i, j) = spec[q] / static_cast<double>(m_size);
      }
    }
  }
  return FourierCoefficients(m_size, std::move(out));
}

MatrixSampleField inverse_fourier(const FourierCoefficients &coeff)
{
  const int m_size = coeff.size();
  const int k = static_cast<int>(coeff(0).rows());
  MatrixSampleField field{CircleGrid(m_size), std::vector<Matrix>(m_size, Matrix::Zero(k, k))};
  Eigen::FFT<double> fft;
  std::vector<Complex> spec(m_size), out(m_size);
  for (int i = 0; i < k; i++)
  {
    for (int j = 0; j < k; j++)
    {
      for (int n = -m_size / 2; n < m_size / 2; n++)
      {
        spec[(n + m_size) % m_size] = coeff(n)(i, j);
      }
      // Eigen's inverse FFT divides by M; undo it since Ŵ already carries 1/M.
      fft.inv(out, spec);
      for (int m = 0; m < m_size; m++)
      {
        field.values[m](i, j) = out[m] * static_cast<double>(m_size);
      }
    }
  }
  return field;
}

Matrix circle_mean(const MatrixSampleField &field)
{
  field.validate();
  Matrix acc = Matrix::Zero(field.dim(), field.dim());
  for (const auto &v : field.values)
  {
    acc += v;
  }
  return acc / static_cast<double>(field.grid.size());
}

}  // namespace twoweight
