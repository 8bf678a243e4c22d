// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <random>
#include "oracles.hpp"
#include "twoweight/circle.hpp"
#include "twoweight/error.hpp"

using namespace twoweight;

namespace
{

MatrixSampleField scalar_field(int m_size, double (*f)(double))
{
  const CircleGrid grid(m_size);
  MatrixSampleField field{grid, {}};
  for (int m = 0; m < m_size; m++)
  {
    field.values.push_back(Matrix::Constant(1, 1, f(grid.node(m))));
  }
  return field;
}

MatrixSampleField random_hermitian_field(std::mt19937_64 &rng, int m_size, int k)
{
  std::normal_distribution<double> normal;
  MatrixSampleField field{CircleGrid(m_size), {}};
  for (int m = 0; m < m_size; m++)
  {
    Matrix a(k, k);
    for (int i = 0; i < k; i++)
    {
      for (int j = 0; j < k; j++)
      {
        a(i, j) = Complex(normal(rng), normal(rng));
      }
    }
    field.values.push_back(a + a.adjoint());
  }
  return field;
}

}  // namespace

TEST_SUITE("circle")
{
  TEST_CASE("grid sizes must be powers of two of at least 16")
  {
    CHECK_NOTHROW(CircleGrid(16));
    CHECK_NOTHROW(CircleGrid(1024));
    CHECK_THROWS_AS(CircleGrid(8), ValidationError);
    CHECK_THROWS_AS(CircleGrid(48), ValidationError);
    CHECK_THROWS_AS(CircleGrid(0), ValidationError);
  }

  TEST_CASE("nodes are strictly increasing in [0, 2π)")
  {
    const CircleGrid grid(64);
    const auto nodes = grid.nodes();
    REQUIRE(nodes.size() == 64);
    CHECK(nodes.front() == 0.0);
    for (std::size_t i = 1; i < nodes.size(); i++)
    {
      CHECK(nodes[i] > nodes[i - 1]);
    }
    CHECK(nodes.back() < 2.0 * oracle::pi);
    CHECK(grid.nearest_node(oracle::pi) == 32);
    CHECK(grid.nearest_node(2.0 * oracle::pi - 1e-9) == 0);
  }

  TEST_CASE("Poisson kernel values")
  {
    CHECK(poisson_kernel(0.0, 1.234) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poisson_kernel(0.5, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(poisson_kernel(0.5, oracle::pi) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(poisson_kernel(2.0, 0.3) < 0.0);
    CHECK_THROWS_AS(poisson_kernel(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(poisson_kernel(-0.1, 0.0), DomainError);
  }

  TEST_CASE("Poisson kernel circle mean matches the closed-form trapezoid sum")
  {
    // (1/M) Σ P_r(θ_m) = (1 + r^M)/(1 - r^M) exactly.
    for (const int m_size : {64, 256, 1024})
    {
      const CircleGrid grid(m_size);
      for (const double r : {0.0, 0.3, 0.6, 1.0 - 16.0 / m_size})
      {
        double acc = 0.0;
        for (int m = 0; m < m_size; m++)
        {
          acc += poisson_kernel(r, grid.node(m));
        }
        acc /= m_size;
        const double rm = std::pow(r, m_size);
        CHECK(acc == doctest::Approx((1.0 + rm) / (1.0 - rm)).epsilon(1e-13));
        if (rm < 1e-14)
        {
          CHECK(std::abs(acc - 1.0) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("Fourier coefficients of simple fields")
  {
    const auto one = fourier_coefficients(scalar_field(16, [](double) { return 1.0; }));
    CHECK(std::abs(one(0)(0, 0) - 1.0) < 1e-15);
    for (int n = one.min_index(); n <= one.max_index(); n++)
    {
      if (n != 0)
      {
        CHECK(std::abs(one(n)(0, 0)) < 1e-15);
      }
    }
    const auto cosine =
        fourier_coefficients(scalar_field(16, [](double t) { return 1.0 + std::cos(t); }));
    CHECK(std::abs(cosine(0)(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(cosine(1)(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(cosine(-1)(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(cosine(2)(0, 0)) < 1e-15);
  }

  TEST_CASE("FFT agrees with the direct DFT and has Hermitian symmetry")
  {
    std::mt19937_64 rng(7);
    const MatrixSampleField field = random_hermitian_field(rng, 32, 3);
    const FourierCoefficients c = fourier_coefficients(field);
    for (int n = c.min_index(); n <= c.max_index(); n++)
    {
      CHECK((c(n) - oracle::dft(field.values, n)).norm() < 1e-13);
      if (n > c.min_index())
      {
        CHECK((c(-n) - c(n).adjoint()).norm() < 1e-13);
      }
    }
  }

  TEST_CASE("inverse transform and Parseval")
  {
    std::mt19937_64 rng(11);
    const MatrixSampleField field = random_hermitian_field(rng, 128, 2);
    const FourierCoefficients c = fourier_coefficients(field);
    const MatrixSampleField back = inverse_fourier(c);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t m = 0; m < field.values.size(); m++)
    {
      CHECK((back.values[m] - field.values[m]).cwiseAbs().maxCoeff() < 1e-12);
      lhs += field.values[m].squaredNorm();
    }
    lhs /= 128.0;
    for (int n = c.min_index(); n <= c.max_index(); n++)
    {
      rhs += c(n).squaredNorm();
    }
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  TEST_CASE("circle mean")
  {
    CHECK(std::abs(circle_mean(scalar_field(64, [](double) { return 1.0; }))(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(circle_mean(scalar_field(64, [](double t) { return 1.0 + std::cos(t); }))(0, 0) -
                   1.0) < 1e-14);
    MatrixSampleField diag{CircleGrid(16), {}};
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.6;
    d(1, 1) = 0.8;
    diag.values.assign(16, d);
    CHECK((circle_mean(diag) - d).norm() < 1e-15);
  }

  TEST_CASE("sample fields reject non-finite values")
  {
    MatrixSampleField field{CircleGrid(16), std::vector<Matrix>(16, Matrix::Identity(1, 1))};
    CHECK_NOTHROW(field.validate());
    field.values[3](0, 0) = std::nan("");
    CHECK_THROWS_AS(field.validate(), ValidationError);
    MatrixSampleField short_field{CircleGrid(16), std::vector<Matrix>(15, Matrix::Identity(1, 1))};
    CHECK_THROWS_AS(short_field.validate(), ValidationError);
  }
}
