// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <random>
#include "oracles.hpp"
#include "twoweight/error.hpp"
#include "twoweight/herglotz.hpp"

using namespace twoweight;

namespace
{

Complex random_off_circle(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng) < 0.5 ? 0.9 * u(rng) : 1.1 + 2.0 * u(rng);
  return std::polar(r, 2.0 * oracle::pi * u(rng));
}

}  // namespace

TEST_SUITE("herglotz")
{
  TEST_CASE("closed forms for the constant and cosine weights")
  {
    const HerglotzEvaluator one(fixtures::constant());
    const HerglotzEvaluator cosine(fixtures::cosine());
    for (const Complex z : {Complex(0.3), Complex(0, 0.4), Complex(-0.5, 0.2)})
    {
      CHECK(std::abs(one.psi(z)(0, 0) - kI) < 1e-15);
      CHECK(std::abs(one.psi(1.0 / z)(0, 0) + kI) < 1e-15);
      CHECK(std::abs(cosine.psi(z)(0, 0) - kI * (1.0 + z)) < 1e-15);
      CHECK(std::abs(cosine.psi(1.0 / z)(0, 0) + kI * (1.0 + z)) < 1e-14);
    }
  }

  TEST_CASE("series agrees with quadrature of the defining integral")
  {
    std::mt19937_64 rng(5);
    const MatrixWeight w = random_trig_weight(rng, 3, 4);
    const HerglotzEvaluator psi(w);
    for (int i = 0; i < 10; i++)
    {
      const Complex z = random_off_circle(rng);
      const Matrix q = oracle::herglotz_quadrature([&](double t) { return w.evaluate(t); }, z, 4096);
      CHECK((psi.psi(z) - q).norm() < 1e-10 * std::max(1.0, q.norm()));
    }
  }

  TEST_CASE("reflection symmetry and positivity")
  {
    std::mt19937_64 rng(9);
    const MatrixWeight w = random_trig_weight(rng, 2, 3);
    const HerglotzEvaluator psi(w);
    for (int i = 0; i < 100; i++)
    {
      const Complex z = random_off_circle(rng);
      CHECK((psi.psi(z).adjoint() - psi.psi(1.0 / std::conj(z))).norm() <= 1e-12);
      if (std::abs(z) < 1.0)
      {
        const Matrix p = psi.psi(z);
        CHECK(linalg::hermitian_eigenvalues((p - p.adjoint()) / (2.0 * kI)).minCoeff() >= -1e-10);
      }
    }
  }

  TEST_CASE("jump recovers the weight on the grid")
  {
    std::mt19937_64 rng(13);
    const MatrixWeight w = random_trig_weight(rng, 2, 4);
    const HerglotzEvaluator psi(w);
    for (int m = 0; m < w.grid().size(); m++)
    {
      CHECK((psi.jump(w.grid().node(m)) - w.sample(m)).norm() < 1e-9);
    }
  }

  TEST_CASE("radial ladder agrees with the exact boundary series")
  {
    const HerglotzEvaluator psi(fixtures::cosine());
    for (const double t : {0.0, 1.0, 2.5})
    {
      for (const Side side : {Side::inner, Side::outer})
      {
        const BoundaryValue exact = psi.boundary(t, side, BoundaryMethod::series);
        const BoundaryValue ladder = psi.boundary(t, side, BoundaryMethod::radial_ladder);
        CHECK(ladder.converged);
        CHECK((exact.value - ladder.value).norm() < 1e-8);
      }
    }
  }

  TEST_CASE("radial limit extrapolation and divergence detection")
  {
    const auto smooth = radial_limit(
        [](double r) { return Matrix::Constant(1, 1, Complex(r * r + std::sin(r))); }, Side::inner);
    CHECK(smooth.converged);
    CHECK(std::abs(smooth.value(0, 0) - (1.0 + std::sin(1.0))) < 1e-10);
    const auto blowup = radial_limit(
        [](double r) { return Matrix::Constant(1, 1, Complex(1.0 / std::abs(1.0 - r))); },
        Side::inner);
    CHECK_FALSE(blowup.converged);
  }

  TEST_CASE("evaluation on the circle is refused")
  {
    const HerglotzEvaluator psi(fixtures::constant());
    CHECK_THROWS_AS(psi.psi(Complex(1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(psi.psi(std::polar(1.0 + 1e-10, 0.3)), DomainError);
    CHECK_NOTHROW(psi.psi(std::polar(1.0 - 1e-6, 0.3)));
  }

  TEST_CASE("Cauchy-type identity for pairs of points")
  {
    std::mt19937_64 rng(21);
    const MatrixWeight w = random_trig_weight(rng, 2, 3);
    const HerglotzEvaluator psi(w);
    for (int i = 0; i < 20; i++)
    {
      const Complex z1 = random_off_circle(rng);
      const Complex z2 = random_off_circle(rng);
      const Complex refl = 1.0 / std::conj(z2);
      if (std::abs(z1 - refl) < 0.05)
      {
        continue;
      }
      const Matrix lhs = (psi.psi(z1) - psi.psi(z2).adjoint()) / (z1 - refl);
      const int n = 8192;
      Matrix acc = Matrix::Zero(2, 2);
      for (int m = 0; m < n; m++)
      {
        const double t = 2.0 * oracle::pi * m / n;
        const Complex e = std::exp(Complex(0.0, t));
        acc += w.evaluate(t) * (e / ((e - z1) * (e - refl)));
      }
      const Matrix rhs = 2.0 * kI * acc / static_cast<double>(n);
      CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, lhs.norm()));
    }
  }
}
