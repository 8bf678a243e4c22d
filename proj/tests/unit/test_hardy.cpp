// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <random>
#include "oracles.hpp"
#include "twoweight/error.hpp"
#include "twoweight/hardy.hpp"

using namespace twoweight;

namespace
{

Vector vec(std::initializer_list<Complex> xs)
{
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Complex x : xs)
  {
    v(i++) = x;
  }
  return v;
}

// ∫ (e^{it} - a)^{-1} conj((e^{it} - b)^{-1}) dt/2π.
Complex cauchy_pair(Complex a, Complex b)
{
  const bool ai = std::abs(a) < 1.0, bi = std::abs(b) < 1.0;
  if (ai != bi)
  {
    return 0.0;
  }
  return ai ? 1.0 / (1.0 - a * std::conj(b)) : 1.0 / (a * std::conj(b) - 1.0);
}

}  // namespace

TEST_SUITE("hardy")
{
  TEST_CASE("rational test functions")
  {
    RationalTestFunction f(2);
    f.add_term(0.5, vec({1.0, 0.0}));
    f.add_term(Complex(0.0, 2.0), vec({0.0, kI}));
    const Complex mu(0.3, -0.4);
    const Vector v = f(mu);
    CHECK(std::abs(v(0) - 1.0 / (mu - 0.5)) < 1e-15);
    CHECK(std::abs(v(1) - kI / (mu - Complex(0.0, 2.0))) < 1e-15);
    CHECK(f.standoff() == doctest::Approx(0.5));
    CHECK_THROWS_AS(f.add_term(std::polar(1.0 + 1e-4, 1.0), vec({1.0, 1.0})), DomainError);
    CHECK_THROWS_AS(f.add_term(0.1, vec({1.0})), ValidationError);
    const RationalTestFunction g = Complex(2.0) * f + f;
    CHECK((g(mu) - 3.0 * v).norm() < 1e-14);
  }

  TEST_CASE("weighted inner products against closed forms")
  {
    const MatrixWeight one = fixtures::constant(1024);
    for (const auto &[a, b] : std::vector<std::pair<Complex, Complex>>{
             {0.5, Complex(0.1, 0.7)}, {2.0, Complex(-1.5, 0.5)}, {0.5, 3.0}})
    {
      const auto f = RationalTestFunction::single(a, vec({1.0}));
      const auto g = RationalTestFunction::single(b, vec({1.0}));
      CHECK(std::abs(weighted_inner(f, g, one) - cauchy_pair(a, b)) < 1e-12);
    }
    const auto near = RationalTestFunction::single(std::polar(1.002, 0.2), vec({1.0}));
    CHECK_THROWS_AS(weighted_inner(near, near, one), DomainError);
  }

  TEST_CASE("constant weight: P± are the classical Hardy projections")
  {
    const DeBrangesSystem s(fixtures::constant());
    const WeightedHardy h(s, CircleGrid(256));
    const auto outside = RationalTestFunction::single(Complex(1.5, 0.5), vec({1.0}));
    const auto inside = RationalTestFunction::single(Complex(0.2, -0.3), vec({1.0}));
    const VectorField fo = sample(outside, h.grid());
    const VectorField fi = sample(inside, h.grid());
    CHECK(sup_distance(h.projection(outside, Side::inner), fo) < 1e-14);
    CHECK(sup_distance(h.projection(outside, Side::outer), VectorField::zeros(h.grid(), 1)) < 1e-14);
    CHECK(sup_distance(h.projection(inside, Side::outer), fi) < 1e-14);
    CHECK(sup_distance(h.projection(inside, Side::inner), VectorField::zeros(h.grid(), 1)) < 1e-14);
  }

  TEST_CASE("projections sum to multiplication by w0")
  {
    std::mt19937_64 rng(41);
    const DeBrangesSystem s(random_trig_weight(rng, 2, 3));
    const WeightedHardy h(s, CircleGrid(512));
    const TestFunctionSampler sampler;
    for (int i = 0; i < 10; i++)
    {
      CHECK(h.multiplication_residual(sampler.function(rng, 2)) < 1e-9);
    }
  }

  TEST_CASE("quadrature route converges at first order")
  {
    const DeBrangesSystem s(fixtures::cosine());
    const auto f = RationalTestFunction::single(2.0, vec({1.0}));
    double err[2];
    for (int i = 0; i < 2; i++)
    {
      const WeightedHardy h(s, CircleGrid(256 << i));
      err[i] = sup_distance(h.projection(f, Side::inner), h.projection_quadrature(f, Side::inner));
    }
    CHECK(err[0] / err[1] > 1.8);
    CHECK(err[0] / err[1] < 2.2);
    CHECK(err[0] * 256 == doctest::Approx(22.4).epsilon(0.1));
  }

  TEST_CASE("weighted Hilbert transform: identity route against quadrature")
  {
    const DeBrangesSystem s(fixtures::constant());
    const WeightedHardy h(s, CircleGrid(1024));
    const auto f = RationalTestFunction::single(Complex(0.0, 2.0), vec({1.0}));
    CHECK(sup_distance(h.hilbert(f), h.hilbert_quadrature(f)) < 0.1);
    // For w0 = 1 and f analytic inside, Hf = -i f + i f(0).
    const VectorField hf = h.hilbert(f);
    const Complex f0 = f(0.0)(0);
    for (int m = 0; m < 1024; m += 97)
    {
      const Complex mu = h.grid().point(m);
      CHECK(std::abs(hf.values[static_cast<std::size_t>(m)](0) - (-kI * f(mu)(0) + kI * f0)) < 1e-12);
    }
  }

  TEST_CASE("contraction of the weighted projections")
  {
    for (const auto &name : fixtures::names())
    {
      const DeBrangesSystem s(fixtures::by_name(name));
      const WeightedHardy h(s, CircleGrid(4096));
      const auto corpus = random_corpus(77, 20, s.dim());
      for (const auto &f : corpus.functions)
      {
        const double n0 = h.inner_w0(f, f).real();
        for (const Side side : {Side::inner, Side::outer})
        {
          const VectorField pf = h.projection(f, side);
          CHECK(h.inner_w1(pf, pf).real() <= (1.0 + 1e-6) * n0);
        }
      }
    }
  }

  TEST_CASE("Y is isometric and X preserves Gram matrices for purely a.c. ν1")
  {
    for (const char *name : {"const", "diag"})
    {
      const DeBrangesSystem s(fixtures::by_name(name));
      const WeightedHardy h(s, CircleGrid(4096));
      std::mt19937_64 rng(5);
      std::vector<RationalTestFunction> basis;
      for (int i = 0; i < 10; i++)
      {
        basis.push_back(TestFunctionSampler{}.function(rng, s.dim()));
      }
      CHECK(h.norm_estimate(HardyOperator::Y_plus, basis) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(h.norm_estimate(HardyOperator::Y_minus, basis) == doctest::Approx(1.0).epsilon(1e-6));
      const GramData g = h.gram(HardyOperator::X, basis);
      CHECK((g.gram1 - g.gram0).norm() <= 1e-9 * std::max(1.0, g.gram0.norm()));
    }
  }

  TEST_CASE("X loses exactly the singular part for the cosine weight")
  {
    const DeBrangesSystem s(fixtures::cosine());
    const WeightedHardy h(s, CircleGrid(4096));
    const auto f = RationalTestFunction::single(0.5, vec({1.0})) +
                   RationalTestFunction::single(Complex(0.0, -1.7), vec({0.3}));
    const double n0 = h.inner_w0(f, f).real();
    const VectorField xf = h.apply(HardyOperator::X, f);
    const double n1 = h.inner_w1(xf, xf).real();
    // ν1 = (1/2)dt/2π + (1/2)δ_π and the flagged node at π is excluded.
    const double atom = std::norm(xf.values[2048](0));
    CHECK(n0 - n1 == doctest::Approx(0.5 * atom * (1.0 + 1.0 / 4096)).epsilon(1e-9));
  }

  TEST_CASE("linearity of the operators")
  {
    std::mt19937_64 rng(43);
    const DeBrangesSystem s(random_trig_weight(rng, 2, 2));
    const WeightedHardy h(s, CircleGrid(1024));
    const TestFunctionSampler sampler;
    const auto f = sampler.function(rng, 2);
    const auto g = sampler.function(rng, 2);
    const Complex a(0.3, -1.2), b(-0.7, 0.4);
    for (const HardyOperator op : {HardyOperator::X, HardyOperator::Y_plus, HardyOperator::Y_minus,
                                   HardyOperator::P_plus, HardyOperator::P_minus,
                                   HardyOperator::hilbert, HardyOperator::multiply_w0})
    {
      const VectorField lhs = h.apply(op, a * f + b * g);
      const VectorField rhs = combine(a, h.apply(op, f), b, h.apply(op, g));
      double scale = 1.0;
      for (const auto &v : rhs.values)
      {
        scale = std::max(scale, v.norm());
      }
      CHECK(sup_distance(lhs, rhs) <= 1e-12 * scale);
    }
  }

  TEST_CASE("Gram identity for pairs of points")
  {
    std::mt19937_64 rng(47);
    const DeBrangesSystem s(random_trig_weight(rng, 3, 4));
    const GramIdentity gi(s);
    const TestFunctionSampler sampler;
    for (int i = 0; i < 20; i++)
    {
      const Complex z1 = sampler.pole(rng), z2 = sampler.pole(rng);
      if (std::abs(z1 - 1.0 / std::conj(z2)) < 1e-2)
      {
        continue;
      }
      const Matrix lhs = gi.nu0_side(z1, z2);
      CHECK((lhs - gi.nu1_side(z1, z2)).norm() <= 1e-9 * std::max(1.0, lhs.norm()));
    }
    CHECK(gi.residual(0.0, 0.0) < 1e-12);
    CHECK(gi.residual(0.0, Complex(0.3, 0.2)) < 1e-12);
    CHECK(b9_residual(s, Complex(0.5, 0.1), Complex(-2.0, 0.4)) < 1e-9);
  }

  TEST_CASE("generalized eigenvalue estimator")
  {
    Matrix g0 = Matrix::Identity(3, 3);
    Matrix g1 = Matrix::Zero(3, 3);
    g1(0, 0) = 0.25;
    g1(1, 1) = 0.5;
    CHECK(generalized_max_eigenvalue(g1, g0) == doctest::Approx(0.5));
    g0(2, 2) = 0.0;  // dropped direction
    g1(2, 2) = 100.0;
    CHECK(generalized_max_eigenvalue(g1, g0) == doctest::Approx(0.5));
    g0(0, 0) = 4.0;
    CHECK(generalized_max_eigenvalue(g1, g0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(generalized_max_eigenvalue(g1, Matrix::Zero(3, 3)), NumericalError);
  }

  TEST_CASE("random corpora are reproducible and serializable")
  {
    const auto a = random_corpus(123, 8, 2);
    const auto b = random_corpus(123, 8, 2);
    const auto c = parse_corpus(dump_corpus(a));
    CHECK(dump_corpus(a) == dump_corpus(b));
    CHECK(dump_corpus(c) == dump_corpus(a));
    REQUIRE(c.functions.size() == 8);
    for (const auto &f : a.functions)
    {
      CHECK(f.terms().size() >= 1);
      CHECK(f.terms().size() <= 5);
      CHECK(f.standoff() >= 1e-2 * (1.0 - 1e-12));
      CHECK(f.standoff() <= 0.9 + 1e-12);
    }
    CHECK_THROWS_AS(parse_corpus("{}"), ValidationError);
  }
}
