// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <random>
#include "oracles.hpp"
#include "twoweight/debranges.hpp"
#include "twoweight/error.hpp"
#include "twoweight/verify.hpp"

using namespace twoweight;

TEST_SUITE("debranges")
{
  TEST_CASE("scattering data of the fixtures")
  {
    const DeBrangesSystem c(fixtures::constant());
    CHECK(std::abs(c.gg_star()(0, 0) - 1.0) < 1e-15);
    CHECK(c.alpha().norm() == 0.0);
    const DeBrangesSystem d(fixtures::diagonal());
    CHECK(std::abs(d.alpha()(0, 0) - 0.8) < 1e-14);
    CHECK(std::abs(d.alpha()(1, 1) - 0.6) < 1e-14);
    const DeBrangesSystem r(fixtures::rank_one());
    CHECK(std::abs(r.gg_star()(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(r.alpha()(1, 1) - 1.0) < 1e-14);
  }

  TEST_CASE("psi1 of the cosine weight is i/(1+z)")
  {
    const DeBrangesSystem s(fixtures::cosine());
    for (const Complex z : {Complex(0.3), Complex(0, 0.4), Complex(-0.5, 0.5), Complex(2.0, 1.0)})
    {
      const Complex closed = std::abs(z) < 1.0 ? kI / (1.0 + z) : -kI * z / (1.0 + z);
      CHECK(std::abs(s.psi1(z)(0, 0) - closed) < 1e-14);
      // ν1 = (1/2) dt/2π + (1/2) δ_π, transformed by hand.
      const Complex from_measure =
          0.5 * kI * (std::abs(z) < 1.0 ? 1.0 : -1.0) + 0.5 * kI * (-1.0 + z) / (-1.0 - z);
      CHECK(std::abs(s.psi1(z)(0, 0) - from_measure) < 1e-14);
    }
  }

  TEST_CASE("the central identity holds and D1 = -D0^{-1}")
  {
    std::mt19937_64 rng(17);
    const MatrixWeight w = random_trig_weight(rng, 3, 4);
    const DeBrangesSystem s(w);
    for (const Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.3), Complex(1.5, -2.0)})
    {
      CHECK(s.identity_residual(z) < 1e-12);
      CHECK((s.d1(z) + linalg::inverse(s.d0(z))).norm() < 1e-12);
      CHECK((s.psi1(z) - (s.alpha() - linalg::inverse(s.d0(z)))).norm() < 1e-12);
    }
  }

  TEST_CASE("psi1 has positive imaginary part inside the disk")
  {
    std::mt19937_64 rng(23);
    const DeBrangesSystem s(random_trig_weight(rng, 2, 4));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; i++)
    {
      const Complex z = std::polar(0.99 * std::sqrt(u(rng)), 2.0 * oracle::pi * u(rng));
      const Matrix p = s.psi1(z);
      CHECK(linalg::hermitian_eigenvalues((p - p.adjoint()) / (2.0 * kI)).minCoeff() >= -1e-9);
    }
  }

  TEST_CASE("companion weight of the cosine weight")
  {
    const int m_size = 1024;
    const DeBrangesSystem s(fixtures::cosine());
    const CompanionWeightResult r = s.companion_weight(CircleGrid(m_size));
    CHECK(r.flagged_count() == 1);
    CHECK(r.singular_flags[m_size / 2]);
    for (int m = 0; m < m_size; m++)
    {
      if (!r.singular_flags[static_cast<std::size_t>(m)])
      {
        CHECK(std::abs(r.w1[static_cast<std::size_t>(m)](0, 0) - 0.5) < 1e-8);
      }
    }
    CHECK(std::abs(r.deficit - 0.5) <= 5.0 / m_size);
    CHECK(r.integrated_trace() <= r.gg_trace + 1e-8);
  }

  TEST_CASE("companion weights of constant weights")
  {
    const DeBrangesSystem c(fixtures::constant());
    const CompanionWeightResult rc = c.companion_weight(CircleGrid(256));
    CHECK(rc.flagged_count() == 0);
    CHECK(std::abs(rc.deficit) <= 1e-10);
    for (const auto &w : rc.w1)
    {
      CHECK(std::abs(w(0, 0) - 1.0) <= 1e-10);
    }
    const DeBrangesSystem d(fixtures::diagonal());
    const CompanionWeightResult rd = d.companion_weight(CircleGrid(256));
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 0.6;
    expected(1, 1) = 0.8;
    for (const auto &w : rd.w1)
    {
      CHECK((w - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("ladder extraction agrees with the series at unflagged nodes")
  {
    std::mt19937_64 rng(29);
    const DeBrangesSystem s(random_trig_weight(rng, 2, 3));
    const CircleGrid grid(64);
    const auto series = s.companion_weight(grid, BoundaryMethod::series);
    const auto ladder = s.companion_weight(grid, BoundaryMethod::radial_ladder);
    for (std::size_t m = 0; m < series.w1.size(); m++)
    {
      if (!series.singular_flags[m] && !ladder.singular_flags[m])
      {
        CHECK((series.w1[m] - ladder.w1[m]).norm() < 1e-6);
      }
    }
  }

  TEST_CASE("sandwich, reconstruction and the algebraic w1")
  {
    std::mt19937_64 rng(31);
    const MatrixWeight w = random_trig_weight(rng, 3, 4);
    const DeBrangesSystem s(w);
    const CircleGrid grid(128);
    const auto r = s.companion_weight(grid);
    const MatrixWeight w0 = w.on_grid(128);
    for (int m = 0; m < grid.size(); m++)
    {
      const auto idx = static_cast<std::size_t>(m);
      if (r.singular_flags[idx])
      {
        continue;
      }
      const Matrix h = linalg::psd_sqrt(w0.sample(m));
      CHECK(linalg::hermitian_eigenvalues(h * r.w1[idx] * h).maxCoeff() <= 1.0 + 1e-8);
      CHECK((s.companion_weight_reconstructed(grid.node(m)) - r.w1[idx]).norm() < 1e-9);
      const Matrix d = s.d0_boundary(grid.node(m), Side::inner).d0;
      CHECK((w0.sample(m) - d.adjoint() * r.w1[idx] * d).norm() <=
            1e-6 * (1.0 + r.cond_profile[idx] * r.cond_profile[idx]));
    }
    CHECK(r.deficit >= -1e-8);
    CHECK(r.deficit <= r.gg_trace + 1e-8);
  }

  TEST_CASE("Poisson averages and the Poisson sandwich")
  {
    const DeBrangesSystem s(fixtures::cosine());
    // P_r * w0 for w0 = 1 + cos θ is 1 + r cos θ.
    CHECK(std::abs(s.poisson_average(0, 0.5, 0.0)(0, 0) - 1.5) < 1e-14);
    CHECK(s.poisson_sandwich_sup(0.9, CircleGrid(64)) <= 1.0 + 1e-10);
    CHECK_THROWS_AS(s.poisson_average(2, 0.5, 0.0), ValidationError);
  }

  TEST_CASE("normalization is enforced")
  {
    CHECK_THROWS_AS(DeBrangesSystem(fixtures::constant().scaled(2.0)), NumericalError);
  }

  TEST_CASE("non-degeneracy tables")
  {
    const DeBrangesSystem d(fixtures::diagonal());
    const auto nd = nondegeneracy_report(d, d.companion_weight(CircleGrid(128)));
    CHECK(nd.rank_violations == 0);
    CHECK(nd.norm_violations == 0);
    for (const auto &row : nd.rows)
    {
      CHECK(row.rank_w0 == 2);
      CHECK(row.rank_w1 == 2);
    }
    const DeBrangesSystem r(fixtures::rank_one());
    const auto nr = nondegeneracy_report(r, r.companion_weight(CircleGrid(128)));
    CHECK(nr.rank_violations == 0);
    for (const auto &row : nr.rows)
    {
      if (!row.flagged)
      {
        CHECK(row.rank_w0 == 1);
        CHECK(row.rank_w1 == 1);
      }
    }
    const DeBrangesSystem c(fixtures::cosine());
    const auto nc = nondegeneracy_report(c, c.companion_weight(CircleGrid(128)));
    int flagged = 0;
    for (const auto &row : nc.rows)
    {
      if (row.flagged)
      {
        flagged++;
        CHECK(row.theta == doctest::Approx(oracle::pi));
      }
      else
      {
        CHECK(row.rank_w0 == 1);
        CHECK(row.rank_w1 == 1);
      }
    }
    CHECK(flagged == 1);
    CHECK(nc.norm_violations == 0);
  }

  TEST_CASE("CSV layout")
  {
    const DeBrangesSystem d(fixtures::diagonal());
    const std::string csv = companion_weight_csv(d.companion_weight(CircleGrid(16)));
    CHECK(csv.rfind("theta,w1_00_re,w1_00_im,w1_01_re,w1_01_im,w1_10_re,w1_10_im,w1_11_re,w1_11_im,flag,cond\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  }
}
