// SPDX-License-Identifier: Apache-2.0

#include "twoweight/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <json.hpp>
#include "twoweight/error.hpp"
#include "twoweight/weight_io.hpp"

namespace twoweight
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a(const std::string &s)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::mt19937_64 seeded(std::uint64_t seed, const std::string &label)
{
  const std::uint64_t h = fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// Uniform in the annulus-free regime |1 - |z|| ≥ 0.05, |z| ≤ 0.95 or 1.05 ≤ |z| ≤ 5.
Complex random_point(std::mt19937_64 &rng, bool inside_only)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double angle = 2.0 * kPi * unit(rng);
  const bool inside = inside_only || unit(rng) < 0.5;
  const double radius = inside ? 0.95 * std::sqrt(unit(rng)) : 1.0 / (0.19 + 0.76 * unit(rng));
  return std::polar(radius, angle);
}

// Pairs with z1 kept away from the reflection 1/z̄2.
std::pair<Complex, Complex> random_pair(std::mt19937_64 &rng,
                                        const std::function<Complex(std::mt19937_64 &)> &draw,
                                        double min_gap)
{
  for (;;)
  {
    const Complex z1 = draw(rng);
    const Complex z2 = draw(rng);
    if (z2 == Complex(0.0) || std::abs(z1 - 1.0 / std::conj(z2)) >= min_gap)
    {
      return {z1, z2};
    }
  }
}

double sup_norm(const VectorField &f)
{
  double s = 0.0;
  for (std::size_t m = 0; m < f.values.size(); m++)
  {
    if (f.valid[m])
    {
      s = std::max(s, f.values[m].norm());
    }
  }
  return s;
}

double min_eigenvalue(const Matrix &a)
{
  return linalg::hermitian_eigenvalues(a).minCoeff();
}

struct Subject
{
  std::string name;
  MatrixWeight weight;
};

class SuiteRunner
{
public:
  explicit SuiteRunner(const SuiteConfig &config) : config_(config), seed_(*config.seed) {}

  std::vector<CheckResult> take() { return std::move(results_); }

  std::mt19937_64 rng(const std::string &subject, const std::string &invariant) const
  {
    return seeded(seed_, subject + "/" + invariant);
  }

  // check returns (value, detail).
  void run(const std::string &subject, const std::string &invariant, double default_threshold,
           Relation relation, const std::function<std::pair<double, std::string>()> &check)
  {
    CheckResult r;
    r.name = subject + "/" + invariant;
    r.relation = relation;
    r.threshold = threshold(invariant, default_threshold, relation);
    const auto start = std::chrono::steady_clock::now();
    try
    {
      const auto [value, detail] = check();
      r.value = value;
      r.detail = detail;
      r.passed = relation == Relation::at_most ? value <= r.threshold : value >= r.threshold;
    }
    catch (const std::exception &e)
    {
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.detail = std::string("exception: ") + e.what();
      r.passed = false;
    }
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results_.push_back(std::move(r));
  }

private:
  double threshold(const std::string &invariant, double def, Relation relation) const
  {
    if (const auto it = config_.overrides.find(invariant); it != config_.overrides.end())
    {
      return it->second;
    }
    if (relation == Relation::at_most && config_.tolerance)
    {
      return *config_.tolerance;
    }
    return def;
  }

  const SuiteConfig &config_;
  std::uint64_t seed_;
  std::vector<CheckResult> results_;
};

std::string fmt_pair(const char *a, double x, const char *b, double y)
{
  std::ostringstream s;
  s << std::setprecision(6) << a << '=' << x << ' ' << b << '=' << y;
  return s.str();
}

void weight_checks(SuiteRunner &run, const SuiteConfig &cfg, const Subject &subject)
{
  const std::string &name = subject.name;
  const MatrixWeight w = subject.weight.on_grid(cfg.grid_size);
  const CircleGrid grid(cfg.grid_size);
  const int k = w.dim();

  // circle
  run.run(name, "circle.parseval", 1e-10, Relation::at_most,
          [&]
          {
            const FourierCoefficients c = fourier_coefficients(w.field());
            double lhs = 0.0, rhs = 0.0;
            for (const auto &s : w.samples())
            {
              lhs += s.squaredNorm();
            }
            lhs /= grid.size();
            for (int n = c.min_index(); n <= c.max_index(); n++)
            {
              rhs += c(n).squaredNorm();
            }
            return std::pair{std::abs(lhs - rhs), fmt_pair("mean", lhs, "coeff", rhs)};
          });
  run.run(name, "circle.fft_roundtrip", 1e-12, Relation::at_most,
          [&]
          {
            const MatrixSampleField back = inverse_fourier(fourier_coefficients(w.field()));
            double err = 0.0;
            for (std::size_t m = 0; m < back.values.size(); m++)
            {
              err = std::max(err, (back.values[m] - w.samples()[m]).cwiseAbs().maxCoeff());
            }
            return std::pair{err, std::string()};
          });

  // weights
  run.run(name, "weights.moment_zero_norm", 1e-10, Relation::at_most,
          [&]
          {
            const double norm = linalg::operator_norm(moment_zero(normalize(w)));
            return std::pair{norm - 1.0, fmt_pair("norm", norm, "p", w.schatten_p())};
          });

  // herglotz
  const HerglotzEvaluator psi0(w);
  run.run(name, "herglotz.symmetry", 1e-12, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "herglotz.symmetry");
            double worst = 0.0;
            for (int i = 0; i < 100; i++)
            {
              const Complex z = random_point(rng, false);
              const Matrix a = psi0.psi(z);
              const Matrix b = psi0.psi(1.0 / std::conj(z));
              worst = std::max(worst, linalg::operator_norm(a.adjoint() - b) /
                                          std::max(1.0, linalg::operator_norm(a)));
            }
            return std::pair{worst, std::string("100 points")};
          });
  run.run(name, "herglotz.positivity", 1e-10, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "herglotz.positivity");
            double worst = -kInf;
            for (int i = 0; i < 100; i++)
            {
              const Matrix p = psi0.psi(random_point(rng, true));
              worst = std::max(worst, -min_eigenvalue((p - p.adjoint()) / (2.0 * kI)));
            }
            return std::pair{worst, std::string("-min eigenvalue over 100 points")};
          });
  run.run(name, "herglotz.jump", 1e-9, Relation::at_most,
          [&]
          {
            double err = 0.0;
            for (int m = 0; m < grid.size(); m++)
            {
              err = std::max(err, linalg::operator_norm(psi0.jump(grid.node(m)) - w.sample(m)));
            }
            return std::pair{err, std::string()};
          });
  run.run(name, "herglotz.b7", 1e-9, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "herglotz.b7");
            double worst = 0.0;
            for (int i = 0; i < cfg.random_points; i++)
            {
              const auto [z1, z2] = random_pair(
                  rng, [](std::mt19937_64 &g) { return random_point(g, false); }, 0.05);
              const Complex refl = 1.0 / std::conj(z2);
              const Matrix lhs = (psi0.psi(z1) - psi0.psi(z2).adjoint()) / (z1 - refl);
              const int n = GramIdentity::nodes_for(z1, refl);
              const CircleGrid fine(n);
              Matrix acc = Matrix::Zero(k, k);
              for (int m = 0; m < n; m++)
              {
                const Complex e = fine.point(m);
                acc += w.evaluate(fine.node(m)) * (e / ((e - z1) * (e - refl)));
              }
              const Matrix rhs = 2.0 * kI * acc / static_cast<double>(n);
              worst = std::max(worst, linalg::operator_norm(lhs - rhs) /
                                          std::max(1.0, linalg::operator_norm(lhs)));
            }
            return std::pair{worst, std::string("relative to max(1, |lhs|)")};
          });

  // debranges
  const DeBrangesSystem system(w);
  const CompanionWeightResult comp = system.companion_weight(grid);
  const NondegeneracyReport nd = nondegeneracy_report(system, comp);
  run.run(name, "debranges.identity", 1e-9, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "debranges.identity");
            double worst = 0.0;
            for (int i = 0; i < cfg.random_points; i++)
            {
              worst = std::max(worst, system.identity_residual(random_point(rng, false)));
            }
            return std::pair{worst, std::string()};
          });
  run.run(name, "debranges.psi1_positivity", 1e-9, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "debranges.psi1_positivity");
            double worst = -kInf;
            for (int i = 0; i < 100; i++)
            {
              const Matrix p = system.psi1(random_point(rng, true));
              worst = std::max(worst, -min_eigenvalue((p - p.adjoint()) / (2.0 * kI)));
            }
            return std::pair{worst, std::string("-min eigenvalue over 100 points")};
          });
  run.run(name, "debranges.sandwich", 1e-8, Relation::at_most,
          [&]
          {
            double worst = -kInf;
            for (int m = 0; m < grid.size(); m++)
            {
              if (comp.singular_flags[static_cast<std::size_t>(m)])
              {
                continue;
              }
              const Matrix h = linalg::psd_sqrt(w.sample(m));
              worst = std::max(worst, linalg::hermitian_eigenvalues(
                                          h * comp.w1[static_cast<std::size_t>(m)] * h)
                                          .maxCoeff());
            }
            return std::pair{worst - 1.0, fmt_pair("sup", worst, "flagged", comp.flagged_count())};
          });
  run.run(name, "debranges.reconstruction", 1e-6, Relation::at_most,
          [&]
          {
            double worst = 0.0;
            for (const auto &row : nd.rows)
            {
              if (!row.flagged)
              {
                worst = std::max(worst, row.reconstruction / (1.0 + row.cond * row.cond));
              }
            }
            return std::pair{worst, std::string("scaled by 1 + cond²")};
          });
  run.run(name, "debranges.rank_equality", 0.0, Relation::at_most,
          [&] { return std::pair{double(nd.rank_violations), std::string("violating nodes")}; });
  run.run(name, "debranges.norm_bound", 0.0, Relation::at_most,
          [&] { return std::pair{double(nd.norm_violations), std::string("violating nodes")}; });
  run.run(name, "debranges.trace_budget", 1e-8, Relation::at_most,
          [&]
          {
            return std::pair{comp.integrated_trace() - comp.gg_trace,
                             fmt_pair("integrated", comp.integrated_trace(), "trace", comp.gg_trace)};
          });
  run.run(name, "debranges.deficit_range", 1e-8, Relation::at_most,
          [&]
          {
            return std::pair{std::max(-comp.deficit, comp.deficit - comp.gg_trace),
                             fmt_pair("deficit", comp.deficit, "trace", comp.gg_trace)};
          });

  // hardy
  const CircleGrid hgrid(cfg.hardy_grid);
  const WeightedHardy hardy(system, hgrid);
  const TestFunctionSampler sampler;
  const TestFunctionCorpus corpus =
      random_corpus(fnv1a(name) ^ *cfg.seed, cfg.test_functions, k, sampler);
  for (const Side side : {Side::inner, Side::outer})
  {
    const std::string inv = side == Side::inner ? "hardy.contraction_plus" : "hardy.contraction_minus";
    run.run(name, inv, 1e-6, Relation::at_most,
            [&]
            {
              double worst = -kInf;
              for (const auto &f : corpus.functions)
              {
                const VectorField pf = hardy.projection(f, side);
                const double n1 = hardy.inner_w1(pf, pf).real();
                const double n0 = hardy.inner_w0(f, f).real();
                worst = std::max(worst, n1 / n0);
              }
              return std::pair{worst - 1.0, fmt_pair("max ratio", worst, "functions",
                                                     double(corpus.functions.size()))};
            });
  }
  run.run(name, "hardy.multiplication", 1e-9, Relation::at_most,
          [&]
          {
            double worst = 0.0;
            const std::size_t n = std::min<std::size_t>(corpus.functions.size(), 10);
            for (std::size_t i = 0; i < n; i++)
            {
              const auto &f = corpus.functions[i];
              worst = std::max(worst, hardy.multiplication_residual(f) /
                                          std::max(1.0, sup_norm(hardy.multiply_w0(f))));
            }
            return std::pair{worst, std::string("relative to max(1, sup|w0 f|)")};
          });
  run.run(name, "hardy.linearity", 1e-12, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "hardy.linearity");
            std::normal_distribution<double> normal(0.0, 1.0);
            double worst = 0.0;
            const std::size_t pairs = std::min<std::size_t>(corpus.functions.size() / 2, 5);
            for (const HardyOperator op :
                 {HardyOperator::X, HardyOperator::Y_plus, HardyOperator::Y_minus,
                  HardyOperator::P_plus, HardyOperator::P_minus, HardyOperator::hilbert,
                  HardyOperator::multiply_w0})
            {
              for (std::size_t i = 0; i < pairs; i++)
              {
                const double ar = normal(rng), ai = normal(rng), br = normal(rng), bi = normal(rng);
                const Complex a(ar, ai), b(br, bi);
                const auto &f = corpus.functions[2 * i];
                const auto &g = corpus.functions[2 * i + 1];
                const VectorField lhs = hardy.apply(op, a * f + b * g);
                const VectorField tf = hardy.apply(op, f);
                const VectorField tg = hardy.apply(op, g);
                const VectorField rhs = combine(a, tf, b, tg);
                const double scale =
                    std::max(1.0, std::abs(a) * sup_norm(tf) + std::abs(b) * sup_norm(tg));
                worst = std::max(worst, sup_distance(lhs, rhs) / scale);
              }
            }
            return std::pair{worst, std::string("relative to |a||Tf| + |b||Tg|")};
          });
  run.run(name, "hardy.gram_identity", 1e-9, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "hardy.gram_identity");
            const GramIdentity gi(system);
            double worst = 0.0;
            for (int i = 0; i < cfg.gram_pairs; i++)
            {
              const auto [z1, z2] = random_pair(
                  rng, [&](std::mt19937_64 &g) { return sampler.pole(g); }, 1e-2);
              const Matrix lhs = gi.nu0_side(z1, z2);
              const Matrix rhs = gi.nu1_side(z1, z2);
              worst = std::max(worst, linalg::operator_norm(lhs - rhs) /
                                          std::max(1.0, linalg::operator_norm(lhs)));
            }
            return std::pair{worst, std::string("relative to max(1, |nu0 side|)")};
          });

  std::vector<RationalTestFunction> basis;
  {
    auto rng = run.rng(name, "hardy.basis");
    for (int i = 0; i < cfg.basis_size; i++)
    {
      basis.push_back(sampler.function(rng, k));
    }
  }
  const bool absolutely_continuous = comp.deficit <= 1e-8;
  if (absolutely_continuous)
  {
    run.run(name, "hardy.y_isometry", 1e-6, Relation::at_most,
            [&]
            {
              const double plus = hardy.norm_estimate(HardyOperator::Y_plus, basis);
              const double minus = hardy.norm_estimate(HardyOperator::Y_minus, basis);
              return std::pair{std::max(std::abs(plus - 1.0), std::abs(minus - 1.0)),
                               fmt_pair("Y+", plus, "Y-", minus)};
            });
  }
  run.run(name, "hardy.x_gram", 1e-9, Relation::at_most,
          [&]
          {
            const GramData g = hardy.gram(HardyOperator::X, basis);
            const double scale = std::max(1.0, linalg::operator_norm(g.gram0));
            if (absolutely_continuous)
            {
              return std::pair{linalg::operator_norm(g.gram1 - g.gram0) / scale,
                               std::string("isometric, relative to max(1, |gram0|)")};
            }
            double worst = -min_eigenvalue(g.gram0 - g.gram1) / scale;
            for (Eigen::Index i = 0; i < g.gram0.rows(); i++)
            {
              const VectorField xf = hardy.apply(HardyOperator::X, basis[static_cast<std::size_t>(i)]);
              const double sup = sup_norm(xf);
              const double gap = (g.gram0(i, i) - g.gram1(i, i)).real();
              worst = std::max(worst, (gap - comp.deficit * sup * sup) / scale);
            }
            return std::pair{worst, fmt_pair("one-sided, deficit", comp.deficit, "basis",
                                             double(basis.size()))};
          });
  run.run(name, "hardy.decomposition_rate", 1.8, Relation::at_least,
          [&]
          {
            Vector chi = Vector::Ones(k) / std::sqrt(static_cast<double>(k));
            const auto f = RationalTestFunction::single(2.0, chi);
            double err[2];
            for (int i = 0; i < 2; i++)
            {
              const CircleGrid g(cfg.decomposition_grid << i);
              const WeightedHardy h(system, g);
              err[i] = sup_distance(h.projection(f, Side::inner),
                                    h.projection_quadrature(f, Side::inner));
            }
            const double m = cfg.decomposition_grid;
            std::ostringstream s;
            s << std::setprecision(6) << "err(M)=" << err[0] << " err(2M)=" << err[1]
              << " 200/M^2=" << 200.0 / (m * m);
            return std::pair{err[0] / err[1], s.str()};
          });

  // model
  const TruncatedModel model(w, cfg.model_modes);
  run.run(name, "model.b5", 1e-10, Relation::at_most,
          [&] { return std::pair{model.b5_residual(), std::string()}; });
  run.run(name, "model.unitarity", 1e-10, Relation::at_most,
          [&] { return std::pair{model.unitarity_drift(), std::string()}; });
  run.run(name, "model.gg_star", 1e-10, Relation::at_most,
          [&]
          {
            return std::pair{linalg::operator_norm(model.gg_star() - moment_zero(w)), std::string()};
          });
  run.run(name, "model.identities", 1e-9, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "model.identities");
            double worst = 0.0;
            for (int i = 0; i < cfg.random_points; i++)
            {
              worst = std::max(worst, model.identity_residual(random_point(rng, false)));
            }
            return std::pair{worst, std::string()};
          });
  run.run(name, "model.spectral_mass", 1e-10, Relation::at_most,
          [&]
          {
            const int modes = std::min(cfg.spectral_modes, TruncatedModel::kMaxDenseSize / k);
            const TruncatedModel small(w, modes);
            const SpectralMeasure mu = small.spectral_nu1();
            return std::pair{linalg::operator_norm(mu.total() - small.gg_star()),
                             fmt_pair("M", modes, "trace", mu.total_trace())};
          });

  // verify
  if (k == 1)
  {
    run.run(name, "verify.koosis_pipeline", 1e-6, Relation::at_most,
            [&]
            {
              ScalarWeight v0{grid, {}};
              for (const auto &s : w.samples())
              {
                const double x = s(0, 0).real();
                v0.values.push_back(x > 0.0 ? 1.0 / x : kInf);
              }
              KoosisOptions opts;
              opts.hardy_grid = cfg.hardy_grid;
              opts.basis_size = cfg.basis_size;
              opts.seed = fnv1a(name) ^ *cfg.seed;
              const KoosisResult r = koosis_pipeline(v0, opts);
              const double value = std::isfinite(r.log_integral) ? r.norm_estimate - 1.0 : kInf;
              return std::pair{value, fmt_pair("norm estimate", r.norm_estimate, "log integral",
                                               r.log_integral)};
            });
  }
}

void scalar_checks(SuiteRunner &run)
{
  const std::string name = "scalar";
  const auto random_scalar = [](std::mt19937_64 &rng, int grid_size)
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = normal(rng), b = normal(rng), c = normal(rng);
    const CircleGrid grid(grid_size);
    ScalarWeight v{grid, {}};
    for (int m = 0; m < grid_size; m++)
    {
      const double t = grid.node(m);
      v.values.push_back(std::exp(a * std::cos(t) + b * std::sin(2.0 * t) + c * std::cos(3.0 * t)));
    }
    return v;
  };
  run.run(name, "circle.poisson_mean", 1e-12, Relation::at_most,
          [&]
          {
            const CircleGrid grid(1024);
            double worst = 0.0;
            for (const double r : {0.0, 0.25, 0.5, 0.75, 0.9})
            {
              double acc = 0.0;
              for (int m = 0; m < grid.size(); m++)
              {
                acc += poisson_kernel(r, grid.node(m));
              }
              worst = std::max(worst, std::abs(acc / grid.size() - 1.0));
            }
            return std::pair{worst, std::string("M=1024, r in {0,.25,.5,.75,.9}")};
          });
  run.run(name, "weights.muckenhoupt_ge_one", 1.0 - 1e-12, Relation::at_least,
          [&]
          {
            auto rng = run.rng(name, "weights.muckenhoupt_ge_one");
            double lowest = kInf;
            for (int i = 0; i < 10; i++)
            {
              lowest = std::min(lowest, muckenhoupt_sup(random_scalar(rng, 256)));
            }
            return std::pair{lowest, std::string("min over 10 random weights")};
          });
  run.run(name, "weights.koosis_roundtrip", 1e-12, Relation::at_most,
          [&]
          {
            auto rng = run.rng(name, "weights.koosis_roundtrip");
            double worst = 0.0;
            for (int i = 0; i < 10; i++)
            {
              const ScalarWeight v = random_scalar(rng, 256);
              const KoosisForward fwd = koosis_forward(v);
              const ScalarWeight back = koosis_backward(fwd.w0, fwd.normalization);
              for (std::size_t m = 0; m < v.values.size(); m++)
              {
                worst = std::max(worst, std::abs(back.values[m] - v.values[m]) / v.values[m]);
              }
            }
            return std::pair{worst, std::string("relative")};
          });
}

const char *relation_symbol(Relation r)
{
  return r == Relation::at_most ? "<=" : ">=";
}

}  // namespace

// ---------------------------------------------------------------------------

void SuiteConfig::validate() const
{
  if (!seed)
  {
    throw ValidationError("suite seed is mandatory");
  }
  if (tolerance && !(*tolerance >= 0.0))
  {
    throw ValidationError("tolerance must be non-negative");
  }
  for (const auto &[key, value] : overrides)
  {
    if (!(value >= 0.0))
    {
      throw ValidationError("tolerance override for " + key + " must be non-negative");
    }
  }
  const auto known = fixtures::names();
  for (const auto &f : fixtures)
  {
    if (std::find(known.begin(), known.end(), f) == known.end())
    {
      throw ValidationError("unknown fixture: " + f);
    }
  }
  for (const int g : {grid_size, hardy_grid, decomposition_grid, model_modes, spectral_modes})
  {
    CircleGrid check(g);
    (void)check;
  }
  if (random_weights < 0 || random_max_dim < 1 || random_degree < 0 || test_functions < 1 ||
      basis_size < 1 || random_points < 1 || gram_pairs < 1)
  {
    throw ValidationError("suite counts must be positive");
  }
}

bool Report::passed() const
{
  return failure_count() == 0;
}

int Report::failure_count() const
{
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult &c) { return !c.passed; }));
}

std::string Report::status() const
{
  if (vacuous())
  {
    return "vacuous-pass";
  }
  return passed() ? "pass" : "fail";
}

const CheckResult *Report::find(const std::string &name) const
{
  for (const auto &c : checks)
  {
    if (c.name == name)
    {
      return &c;
    }
  }
  return nullptr;
}

std::string Report::to_json() const
{
  using json = nlohmann::json;
  json arr = json::array();
  for (const auto &c : checks)
  {
    json j{{"name", c.name},
           {"status", c.passed ? "pass" : "fail"},
           {"value", c.value},
           {"threshold", c.threshold},
           {"relation", relation_symbol(c.relation)},
           {"detail", c.detail}};
    if (include_runtime)
    {
      j["runtime_seconds"] = c.runtime_seconds;
    }
    arr.push_back(std::move(j));
  }
  const json doc{{"seed", seed},
                 {"status", status()},
                 {"failures", failure_count()},
                 {"checks", arr}};
  return doc.dump(2) + "\n";
}

std::string Report::summary_table() const
{
  std::size_t width = 5;
  for (const auto &c : checks)
  {
    width = std::max(width, c.name.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "check"
      << "  status  " << std::setw(14) << "value"
      << "  threshold\n";
  for (const auto &c : checks)
  {
    out << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
        << (c.passed ? "pass  " : "FAIL  ") << "  " << std::setw(14) << std::setprecision(6)
        << c.value << "  " << relation_symbol(c.relation) << ' ' << c.threshold << '\n';
  }
  out << checks.size() << " checks, " << failure_count() << " failed, status " << status()
      << '\n';
  return out.str();
}

std::vector<std::string> required_invariants()
{
  return {"circle.parseval",           "circle.fft_roundtrip",      "circle.poisson_mean",
          "weights.moment_zero_norm",  "weights.muckenhoupt_ge_one", "weights.koosis_roundtrip",
          "herglotz.symmetry",         "herglotz.positivity",       "herglotz.jump",
          "herglotz.b7",               "debranges.identity",        "debranges.psi1_positivity",
          "debranges.sandwich",        "debranges.reconstruction",  "debranges.rank_equality",
          "debranges.norm_bound",      "debranges.trace_budget",    "debranges.deficit_range",
          "hardy.contraction_plus",    "hardy.contraction_minus",   "hardy.multiplication",
          "hardy.linearity",           "hardy.gram_identity",       "hardy.y_isometry",
          "hardy.x_gram",              "hardy.decomposition_rate",  "model.b5",
          "model.unitarity",           "model.gg_star",             "model.identities",
          "model.spectral_mass",       "verify.koosis_pipeline"};
}

std::set<std::string> covered_invariants(const Report &report)
{
  std::set<std::string> out;
  for (const auto &c : report.checks)
  {
    const auto slash = c.name.find('/');
    out.insert(slash == std::string::npos ? c.name : c.name.substr(slash + 1));
  }
  return out;
}

Report run_suite(const SuiteConfig &config)
{
  config.validate();
  std::vector<Subject> subjects;
  for (const auto &f : config.fixtures)
  {
    subjects.push_back({f, fixtures::by_name(f, config.grid_size)});
  }
  for (const auto &[name, w] : config.weights)
  {
    subjects.push_back({name, w});
  }
  for (int i = 0; i < config.random_weights; i++)
  {
    const std::string name = "random" + std::to_string(i);
    auto rng = seeded(*config.seed, name + "/weight");
    const int dim = 1 + i % config.random_max_dim;
    subjects.push_back(
        {name, random_trig_weight(rng, dim, config.random_degree, 1.0, config.grid_size)});
  }

  SuiteRunner runner(config);
  if (!subjects.empty())
  {
    scalar_checks(runner);
  }
  for (const auto &s : subjects)
  {
    weight_checks(runner, config, s);
  }
  Report report;
  report.seed = *config.seed;
  report.include_runtime = config.include_runtime;
  report.checks = runner.take();
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const CheckResult &a, const CheckResult &b) { return a.name < b.name; });
  return report;
}

// ---------------------------------------------------------------------------

KoosisResult koosis_pipeline(const ScalarWeight &v0, const KoosisOptions &options)
{
  const KoosisForward forward = koosis_forward(v0);
  const DeBrangesSystem system(forward.w0);
  const CompanionWeightResult comp = system.companion_weight(v0.grid);

  KoosisResult out;
  out.normalization = forward.normalization;
  out.flags = comp.singular_flags;
  out.deficit = comp.deficit;
  out.v1 = ScalarWeight{v0.grid, {}};
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t m = 0; m < comp.w1.size(); m++)
  {
    const double v = forward.normalization * comp.w1[m](0, 0).real();
    out.v1.values.push_back(v);
    if (!comp.singular_flags[m])
    {
      log_sum += std::abs(std::log(v));
      count++;
    }
  }
  out.log_integral = count > 0 ? log_sum / count : std::numeric_limits<double>::quiet_NaN();
  out.muckenhoupt = muckenhoupt_sup(v0);

  // ‖P_+ f‖_{L²(v1)} / ‖f‖_{L²(v0)} equals ‖P_+^{(w0)} g‖_{L²(w1)} / ‖g‖_{L²(w0)} with f = w0 g.
  const WeightedHardy hardy(system, CircleGrid(std::max(options.hardy_grid, v0.grid.size())));
  const TestFunctionSampler sampler;
  std::mt19937_64 rng(options.seed);
  std::vector<RationalTestFunction> basis;
  for (int i = 0; i < options.basis_size; i++)
  {
    basis.push_back(sampler.function(rng, 1));
  }
  out.norm_estimate = hardy.norm_estimate(HardyOperator::P_plus, basis);
  return out;
}

NondegeneracyReport nondegeneracy_report(const DeBrangesSystem &system,
                                         const CompanionWeightResult &result,
                                         double rank_threshold)
{
  const MatrixWeight w0 = system.weight().on_grid(result.grid.size());
  NondegeneracyReport out;
  out.rows.reserve(result.w1.size());
  for (int m = 0; m < result.grid.size(); m++)
  {
    const auto idx = static_cast<std::size_t>(m);
    const double theta = result.grid.node(m);
    const Matrix d = system.d0_boundary(theta, Side::inner).d0;
    const Matrix &a = w0.sample(m);
    const Matrix &b = result.w1[idx];
    NondegeneracyRow row;
    row.theta = theta;
    row.rank_w0 = linalg::numerical_rank(a, rank_threshold);
    row.rank_w1 = linalg::numerical_rank(b, rank_threshold);
    row.norm_w1 = linalg::operator_norm(b);
    const double dn = linalg::operator_norm(d);
    row.norm_bound = dn > 0.0 ? linalg::operator_norm(a) / (dn * dn) : kInf;
    row.cond = result.cond_profile[idx];
    row.flagged = result.singular_flags[idx];
    row.reconstruction = linalg::operator_norm(a - d.adjoint() * b * d);
    if (!row.flagged)
    {
      if (row.cond <= 1e6 && row.rank_w0 != row.rank_w1)
      {
        out.rank_violations++;
      }
      if (row.norm_w1 < row.norm_bound - 1e-8)
      {
        out.norm_violations++;
      }
      if (row.norm_bound > 0.0 && std::log(row.norm_w1) < std::log(row.norm_bound) - 1e-8)
      {
        out.log_violations++;
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace twoweight
