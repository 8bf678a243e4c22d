// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include "oracles.hpp"
#include "twoweight/debranges.hpp"
#include "twoweight/error.hpp"
#include "twoweight/linalg.hpp"
#include "twoweight/model.hpp"

using namespace twoweight;

TEST_SUITE("model")
{
  TEST_CASE("U0 is the diagonal of grid points")
  {
    const TruncatedModel model(fixtures::constant(), 16);
    const Matrix u0 = model.u0();
    CHECK(std::abs(u0(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(u0(4, 4) - kI) < 1e-15);
    CHECK(std::abs(u0(8, 8) + 1.0) < 1e-15);
    CHECK(std::abs(u0(12, 12) + kI) < 1e-15);
    CHECK((u0 - Matrix(u0.diagonal().asDiagonal())).norm() == 0.0);
  }

  TEST_CASE("constant weight: G*G is a projector and Θ = πP")
  {
    const TruncatedModel model(fixtures::constant(), 32);
    const Matrix p = model.g().adjoint() * model.g();
    CHECK((p * p - p).norm() < 1e-14);
    CHECK((model.theta() - oracle::pi * p).norm() < 1e-12);
    CHECK(model.gram_spectrum().size() == 1);
    CHECK(model.gram_spectrum()(0) == 1.0);
    CHECK(model.alpha().norm() == 0.0);
  }

  TEST_CASE("GG* matches the zeroth moment")
  {
    const TruncatedModel model(fixtures::diagonal(), 64);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 0.6;
    expected(1, 1) = 0.8;
    CHECK((model.gg_star() - expected).norm() < 1e-12);
    CHECK((model.alpha() - Matrix(Vector::Constant(2, 0.0).asDiagonal())).norm() > 0.5);
    CHECK(std::abs(model.alpha()(0, 0) - 0.8) < 1e-12);
    CHECK(std::abs(model.alpha()(1, 1) - 0.6) < 1e-12);
  }

  TEST_CASE("ψ0 of the constant weight is the trapezoid sum")
  {
    const int m = 64;
    const TruncatedModel model(fixtures::constant(), m);
    for (const Complex z : {Complex(0.3, 0.0), Complex(-0.2, 0.6), Complex(1.5, -0.4)})
    {
      const Complex zm = std::pow(z, m);
      const Complex exact = kI * (1.0 + zm) / (1.0 - zm);
      CHECK(std::abs(model.psi(0, z)(0, 0) - exact) < 1e-13);
    }
    CHECK(std::abs(model.psi(0, 0.3)(0, 0) - kI) < 1e-13);
  }

  TEST_CASE("structured and dense solves agree")
  {
    std::mt19937_64 rng(61);
    const MatrixWeight w = random_trig_weight(rng, 2, 3, 1.0, 64);
    const TruncatedModel model(w, 64);
    for (const Complex z : {Complex(0.3, 0.2), Complex(-0.7, 0.1), Complex(0.0, 1.4), Complex(-3.0, 0.5)})
    {
      for (int j : {0, 1})
      {
        const Matrix a = model.psi(j, z, SolveMode::dense);
        const Matrix b = model.psi(j, z, SolveMode::structured);
        CHECK((a - b).norm() <= 1e-10 * std::max(1.0, a.norm()));
      }
    }
  }

  TEST_CASE("ψ1 of the model reproduces the continuum ψ1")
  {
    const TruncatedModel model(fixtures::diagonal(), 64);
    const Matrix psi1 = model.psi(1, Complex(0.3, -0.2));
    CHECK(std::abs(psi1(0, 0) - Complex(0.0, 0.6)) < 1e-10);
    CHECK(std::abs(psi1(1, 1) - Complex(0.0, 0.8)) < 1e-10);
    CHECK(std::abs(psi1(0, 1)) < 1e-10);

    const auto cos_rows = cross_validate(fixtures::cosine(), {Complex(0.0, 0.4)}, {128});
    CHECK(cos_rows.front().error <= 1e-2);
    const auto diag_rows = cross_validate(fixtures::diagonal(), {Complex(0.5, 0.0)}, {128});
    CHECK(diag_rows.front().error <= 1e-2);
  }

  TEST_CASE("cross-validation table layout")
  {
    const auto rows = cross_validate(fixtures::cosine(), {0.3, Complex(0.0, -0.5)}, {64, 128});
    REQUIRE(rows.size() == 4);
    CHECK(std::isfinite(rows[0].order));
    CHECK(std::isnan(rows[1].order));
    CHECK(rows[2].z == Complex(0.0, -0.5));
    const std::string csv = cross_validation_csv(rows);
    CHECK(csv.rfind("z_re,z_im,M,error,order\n", 0) == 0);
  }

  TEST_CASE("model identities")
  {
    for (const auto &name : fixtures::names())
    {
      const TruncatedModel model(fixtures::by_name(name, 256), 256);
      CHECK(model.b5_residual() <= 1e-10);
      CHECK(model.unitarity_drift() <= 1e-10);
      for (const Complex z : {Complex(0.4, 0.1), Complex(-0.5, 0.5), Complex(2.0, -1.0)})
      {
        CHECK(model.identity_residual(z) <= 1e-10);
      }
    }
  }

  TEST_CASE("structured operators match the dense materializations")
  {
    std::mt19937_64 rng(67);
    const TruncatedModel model(random_trig_weight(rng, 2, 2, 1.0, 64), 64);
    const Matrix g = model.g();
    const Matrix gs_g = g.adjoint() * g;
    const Matrix theta = 2.0 * linalg::hermitian_function(gs_g, [](double x)
                                                          { return std::asin(std::clamp(x, 0.0, 1.0)); });
    CHECK((model.theta() - theta).norm() < 1e-10);
    const Matrix e = linalg::hermitian_function_complex(theta, [](double x)
                                                        { return std::exp(Complex(0.0, x / 2.0)); });
    CHECK((model.exp_half_theta() - e).norm() < 1e-10);
    const Matrix u1 = model.u1();
    CHECK((u1 - e * model.u0() * e).norm() < 1e-10);
    const Matrix drift = u1.adjoint() * u1 - Matrix::Identity(u1.rows(), u1.cols());
    CHECK(std::abs(model.unitarity_drift() - oracle::opnorm(drift)) < 1e-12);
    CHECK((model.alpha() * g - g * model.beta()).norm() < 1e-10);
  }

  TEST_CASE("spectral measure of U1")
  {
    SUBCASE("constant weight carries unit mass")
    {
      const auto nu = TruncatedModel(fixtures::constant(128), 128).spectral_nu1();
      CHECK(nu.total_trace() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(nu.atoms.size() == 128);
      for (std::size_t i = 1; i < nu.atoms.size(); i++)
      {
        CHECK(nu.atoms[i - 1].omega <= nu.atoms[i].omega);
      }
    }
    SUBCASE("cosine weight concentrates half of the mass at π")
    {
      const auto nu = TruncatedModel(fixtures::cosine(256), 256).spectral_nu1();
      CHECK(nu.total_trace() == doctest::Approx(1.0).epsilon(1e-10));
      const double radius = 0.05;
      const double window = nu.trace_within(oracle::pi, radius);
      CHECK(window == doctest::Approx(0.5 + 0.5 * radius / oracle::pi).epsilon(0.1));
    }
    SUBCASE("diagonal weight has a linear distribution function")
    {
      const int m = 256;
      const auto nu = TruncatedModel(fixtures::diagonal(m), m).spectral_nu1();
      double worst = 0.0;
      for (int i = 1; i < 16; i++)
      {
        const double omega = 2.0 * oracle::pi * i / 16 + 1e-3;
        worst = std::max(worst, std::abs(nu.cumulative_trace(omega) - 1.4 * omega / (2.0 * oracle::pi)));
      }
      CHECK(worst <= 1.4 * 2.0 / m);
      CHECK(spectral_csv(nu).rfind("omega,trace\n", 0) == 0);
    }
  }

  TEST_CASE("size caps and domain errors")
  {
    CHECK_THROWS_AS(TruncatedModel(fixtures::diagonal(16384), 8192), ResourceError);
    const TruncatedModel big(fixtures::constant(8192), 8192);
    CHECK_THROWS_AS(big.u0(), ResourceError);
    CHECK_THROWS_AS(big.spectral_nu1(), ResourceError);
    CHECK(std::abs(big.psi(0, 0.5)(0, 0) - kI) < 1e-12);
    const TruncatedModel model(fixtures::constant(), 64);
    CHECK_THROWS_AS(model.psi(0, 0.97), DomainError);
    CHECK_THROWS_AS(model.psi(1, std::polar(1.02, 2.0)), DomainError);
    CHECK_THROWS_AS(TruncatedModel(fixtures::constant().scaled(2.0), 64), ValidationError);
  }
}
