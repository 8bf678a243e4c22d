// SPDX-License-Identifier: Apache-2.0

#include "twoweight/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <unsupported/Eigen/FFT>
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

double standoff_of(Complex z)
{
  return std::abs(std::abs(z) - 1.0);
}

// conv[q] = (1/N) Σ_j g_j K_{(q-j) mod N} for each vector component.
std::vector<Vector> circular_mean_convolution(const std::vector<Vector> &g,
                                              const std::vector<Complex> &kernel)
{
  const std::size_t n = g.size();
  const Eigen::Index k = g.front().size();
  Eigen::FFT<double> fft;
  std::vector<Complex> kspec;
  fft.fwd(kspec, kernel);
  std::vector<Vector> out(n, Vector::Zero(k));
  std::vector<Complex> comp(n), spec, back;
  for (Eigen::Index c = 0; c < k; c++)
  {
    for (std::size_t j = 0; j < n; j++)
    {
      comp[j] = g[j](c);
    }
    fft.fwd(spec, comp);
    for (std::size_t q = 0; q < n; q++)
    {
      spec[q] *= kspec[q];
    }
    fft.inv(back, spec);
    for (std::size_t q = 0; q < n; q++)
    {
      out[q](c) = back[q] / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RationalTestFunction

RationalTestFunction::RationalTestFunction(int dim, double min_standoff)
  : dim_(dim), min_standoff_(min_standoff)
{
  if (dim < 1)
  {
    throw ValidationError("test function dimension must be at least 1");
  }
}

RationalTestFunction::RationalTestFunction(int dim, std::vector<Term> terms, double min_standoff)
  : RationalTestFunction(dim, min_standoff)
{
  for (auto &t : terms)
  {
    add_term(t.pole, std::move(t.coefficient));
  }
}

RationalTestFunction RationalTestFunction::single(Complex pole, Vector coefficient,
                                                  double min_standoff)
{
  RationalTestFunction f(static_cast<int>(coefficient.size()), min_standoff);
  f.add_term(pole, std::move(coefficient));
  return f;
}

void RationalTestFunction::add_term(Complex pole, Vector coefficient)
{
  if (coefficient.size() != dim_)
  {
    throw ValidationError("coefficient dimension mismatch");
  }
  if (!(standoff_of(pole) >= min_standoff_))
  {
    throw DomainError("pole too close to the circle");
  }
  terms_.push_back({pole, std::move(coefficient)});
}

double RationalTestFunction::standoff() const
{
  double d = std::numeric_limits<double>::infinity();
  for (const auto &t : terms_)
  {
    d = std::min(d, standoff_of(t.pole));
  }
  return d;
}

Vector RationalTestFunction::operator()(Complex mu) const
{
  Vector v = Vector::Zero(dim_);
  for (const auto &t : terms_)
  {
    v += t.coefficient / (mu - t.pole);
  }
  return v;
}

RationalTestFunction RationalTestFunction::operator+(const RationalTestFunction &other) const
{
  RationalTestFunction out(dim_, std::min(min_standoff_, other.min_standoff_));
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

RationalTestFunction operator*(Complex a, const RationalTestFunction &f)
{
  RationalTestFunction out = f;
  for (auto &t : out.terms_)
  {
    t.coefficient *= a;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fields and inner products

VectorField VectorField::zeros(const CircleGrid &grid, int dim)
{
  const auto n = static_cast<std::size_t>(grid.size());
  return {grid, std::vector<Vector>(n, Vector::Zero(dim)), std::vector<bool>(n, true)};
}

VectorField sample(const RationalTestFunction &f, const CircleGrid &grid)
{
  VectorField out = VectorField::zeros(grid, f.dim());
  for (int m = 0; m < grid.size(); m++)
  {
    out.values[static_cast<std::size_t>(m)] = f(grid.point(m));
  }
  return out;
}

VectorField combine(Complex a, const VectorField &f, Complex b, const VectorField &g)
{
  VectorField out = f;
  for (std::size_t m = 0; m < f.values.size(); m++)
  {
    out.values[m] = a * f.values[m] + b * g.values[m];
    out.valid[m] = f.valid[m] && g.valid[m];
  }
  return out;
}

double sup_distance(const VectorField &f, const VectorField &g)
{
  double d = 0.0;
  for (std::size_t m = 0; m < f.values.size(); m++)
  {
    if (f.valid[m] && g.valid[m])
    {
      d = std::max(d, (f.values[m] - g.values[m]).norm());
    }
  }
  return d;
}

Complex field_inner(const VectorField &f, const VectorField &g, const std::vector<Matrix> &w)
{
  Complex acc = 0.0;
  for (std::size_t m = 0; m < f.values.size(); m++)
  {
    if (f.valid[m] && g.valid[m])
    {
      acc += g.values[m].dot(w[m] * f.values[m]);
    }
  }
  return acc / static_cast<double>(f.grid.size());
}

Complex weighted_inner(const RationalTestFunction &f, const RationalTestFunction &g,
                       const MatrixWeight &w)
{
  const double standoff = std::min(f.standoff(), g.standoff());
  if (static_cast<double>(w.grid().size()) * standoff < 8.0)
  {
    throw DomainError("pole too close to the circle for grid size " +
                      std::to_string(w.grid().size()));
  }
  return field_inner(sample(f, w.grid()), sample(g, w.grid()), w.samples());
}

const char *to_string(HardyOperator op)
{
  switch (op)
  {
    case HardyOperator::X:
      return "X";
    case HardyOperator::Y_plus:
      return "Y+";
    case HardyOperator::Y_minus:
      return "Y-";
    case HardyOperator::P_plus:
      return "P+";
    case HardyOperator::P_minus:
      return "P-";
    case HardyOperator::hilbert:
      return "H";
    case HardyOperator::multiply_w0:
      return "mult-w0";
  }
  return "?";
}

double generalized_max_eigenvalue(const Matrix &gram1, const Matrix &gram0)
{
  Eigen::SelfAdjointEigenSolver<Matrix> eig(linalg::hermitian_part(gram0));
  const RealVector &lam = eig.eigenvalues();
  const double lmax = lam.size() ? lam.maxCoeff() : 0.0;
  if (!(lmax > std::numeric_limits<double>::min()))
  {
    throw NumericalError("gram matrix numerically zero");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); i++)
  {
    if (lam(i) > 1e-10 * lmax)
    {
      keep.push_back(i);
    }
  }
  Matrix basis(gram0.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); c++)
  {
    basis.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));
  }
  const Matrix reduced = basis.adjoint() * linalg::hermitian_part(gram1) * basis;
  return linalg::hermitian_eigenvalues(reduced).maxCoeff();
}

// ---------------------------------------------------------------------------
// WeightedHardy

WeightedHardy::WeightedHardy(const DeBrangesSystem &system, const CircleGrid &grid,
                             BoundaryMethod method)
  : system_(system),
    grid_(grid),
    w0_(system.weight().on_grid(grid.size())),
    companion_(system.companion_weight(grid, method))
{
  const auto n = static_cast<std::size_t>(grid.size());
  d0_plus_.resize(n);
  d0_minus_.resize(n);
  for (int m = 0; m < grid.size(); m++)
  {
    const auto idx = static_cast<std::size_t>(m);
    d0_plus_[idx] = system.d0_boundary(grid.node(m), Side::inner, method).d0;
    d0_minus_[idx] = method == BoundaryMethod::series
                         ? Matrix(d0_plus_[idx].adjoint())
                         : system.d0_boundary(grid.node(m), Side::outer, method).d0;
  }
}

RationalTestFunction WeightedHardy::apply_X(const RationalTestFunction &f) const
{
  RationalTestFunction out(f.dim(), 0.0);
  for (const auto &t : f.terms())
  {
    const Matrix d = system_.d0(t.pole);
    if (!(linalg::normalized_condition(d) <= system_.cond_cutoff()))
    {
      throw NumericalError("D0 numerically singular at a pole of f");
    }
    out.add_term(t.pole, d * t.coefficient);
  }
  return out;
}

VectorField WeightedHardy::apply_Y(const RationalTestFunction &f, Side side) const
{
  VectorField out = sample(f, grid_);
  const auto &d = d0_boundary(side);
  for (std::size_t m = 0; m < out.values.size(); m++)
  {
    out.valid[m] = !companion_.singular_flags[m];
    out.values[m] = d[m] * out.values[m];
  }
  return out;
}

VectorField WeightedHardy::projection(const RationalTestFunction &f, Side side) const
{
  const VectorField xf = sample(apply_X(f), grid_);
  const VectorField yf = apply_Y(f, side);
  const Complex s = side == Side::inner ? Complex(0.0, 0.5) : Complex(0.0, -0.5);
  return combine(s, xf, -s, yf);
}

std::vector<Matrix> WeightedHardy::quadrature_weight_samples(int nodes) const
{
  std::vector<Matrix> w(static_cast<std::size_t>(nodes));
  const CircleGrid fine(nodes);
  for (int j = 0; j < nodes; j++)
  {
    w[static_cast<std::size_t>(j)] = system_.weight().evaluate(fine.node(j));
  }
  return w;
}

VectorField WeightedHardy::projection_quadrature(const RationalTestFunction &f, Side side,
                                                 int oversample) const
{
  const int m_size = grid_.size();
  const int n = m_size * oversample;
  const CircleGrid fine(n);
  const double r = side == Side::inner ? 1.0 - 10.0 / m_size : 1.0 + 10.0 / m_size;
  const auto w = quadrature_weight_samples(n);
  std::vector<Vector> g(static_cast<std::size_t>(n));
  std::vector<Complex> kernel(static_cast<std::size_t>(n));
  for (int j = 0; j < n; j++)
  {
    const auto idx = static_cast<std::size_t>(j);
    g[idx] = w[idx] * f(fine.point(j));
    kernel[idx] = 1.0 / (1.0 - r * fine.point(j));
  }
  const auto conv = circular_mean_convolution(g, kernel);
  const double sign = side == Side::inner ? 1.0 : -1.0;
  VectorField out = VectorField::zeros(grid_, f.dim());
  for (int m = 0; m < m_size; m++)
  {
    out.values[static_cast<std::size_t>(m)] =
        sign * conv[static_cast<std::size_t>(m) * static_cast<std::size_t>(oversample)];
  }
  return out;
}

VectorField WeightedHardy::hilbert(const RationalTestFunction &f) const
{
  const VectorField plus = projection(f, Side::inner);
  const VectorField minus = projection(f, Side::outer);
  VectorField out = combine(-kI, plus, kI, minus);
  const VectorField fs = sample(f, grid_);
  Vector mean = Vector::Zero(f.dim());
  for (std::size_t m = 0; m < fs.values.size(); m++)
  {
    mean += w0_.samples()[m] * fs.values[m];
  }
  mean /= static_cast<double>(grid_.size());
  for (auto &v : out.values)
  {
    v += kI * mean;
  }
  return out;
}

VectorField WeightedHardy::hilbert_quadrature(const RationalTestFunction &f,
                                              int oversample) const
{
  const int m_size = grid_.size();
  const int n = m_size * oversample;
  const CircleGrid fine(n);
  const double r = 1.0 - 10.0 / m_size;
  const auto w = quadrature_weight_samples(n);
  std::vector<Vector> g(static_cast<std::size_t>(n));
  std::vector<Complex> kernel(static_cast<std::size_t>(n));
  for (int j = 0; j < n; j++)
  {
    const auto idx = static_cast<std::size_t>(j);
    const double phi = fine.node(j);
    g[idx] = w[idx] * f(fine.point(j));
    kernel[idx] = 2.0 * std::sin(phi) / (1.0 + r * r - 2.0 * r * std::cos(phi));
  }
  const auto conv = circular_mean_convolution(g, kernel);
  VectorField out = VectorField::zeros(grid_, f.dim());
  for (int m = 0; m < m_size; m++)
  {
    out.values[static_cast<std::size_t>(m)] =
        conv[static_cast<std::size_t>(m) * static_cast<std::size_t>(oversample)];
  }
  return out;
}

VectorField WeightedHardy::multiply_w0(const RationalTestFunction &f) const
{
  VectorField out = sample(f, grid_);
  for (std::size_t m = 0; m < out.values.size(); m++)
  {
    out.values[m] = w0_.samples()[m] * out.values[m];
  }
  return out;
}

double WeightedHardy::multiplication_residual(const RationalTestFunction &f) const
{
  const VectorField sum = combine(1.0, projection(f, Side::inner), 1.0, projection(f, Side::outer));
  VectorField wf = multiply_w0(f);
  for (std::size_t m = 0; m < wf.valid.size(); m++)
  {
    wf.valid[m] = !companion_.singular_flags[m];
  }
  return sup_distance(sum, wf);
}

VectorField WeightedHardy::apply(HardyOperator op, const RationalTestFunction &f) const
{
  switch (op)
  {
    case HardyOperator::X:
      return sample(apply_X(f), grid_);
    case HardyOperator::Y_plus:
      return apply_Y(f, Side::inner);
    case HardyOperator::Y_minus:
      return apply_Y(f, Side::outer);
    case HardyOperator::P_plus:
      return projection(f, Side::inner);
    case HardyOperator::P_minus:
      return projection(f, Side::outer);
    case HardyOperator::hilbert:
      return hilbert(f);
    case HardyOperator::multiply_w0:
      return multiply_w0(f);
  }
  throw ValidationError("unknown operator");
}

Complex WeightedHardy::inner_w0(const RationalTestFunction &f, const RationalTestFunction &g) const
{
  return weighted_inner(f, g, w0_);
}

Complex WeightedHardy::inner_w1(const VectorField &f, const VectorField &g) const
{
  VectorField fm = f;
  for (std::size_t m = 0; m < fm.valid.size(); m++)
  {
    fm.valid[m] = fm.valid[m] && !companion_.singular_flags[m];
  }
  return field_inner(fm, g, companion_.w1);
}

GramData WeightedHardy::gram(HardyOperator op, const std::vector<RationalTestFunction> &basis) const
{
  const auto n = static_cast<Eigen::Index>(basis.size());
  GramData out{basis, Matrix::Zero(n, n), Matrix::Zero(n, n)};
  std::vector<VectorField> images;
  images.reserve(basis.size());
  for (const auto &f : basis)
  {
    images.push_back(apply(op, f));
  }
  for (Eigen::Index i = 0; i < n; i++)
  {
    for (Eigen::Index j = 0; j < n; j++)
    {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      out.gram0(i, j) = inner_w0(basis[uj], basis[ui]);
      out.gram1(i, j) = inner_w1(images[uj], images[ui]);
    }
  }
  return out;
}

double WeightedHardy::norm_estimate(HardyOperator op,
                                    const std::vector<RationalTestFunction> &basis) const
{
  const GramData g = gram(op, basis);
  return generalized_max_eigenvalue(g.gram1, g.gram0);
}

// ---------------------------------------------------------------------------
// Gram identity

GramIdentity::GramIdentity(const DeBrangesSystem &system, int quadrature_nodes)
  : system_(system), fixed_nodes_(quadrature_nodes)
{
  if (quadrature_nodes != 0)
  {
    CircleGrid check(quadrature_nodes);
    (void)check;
  }
}

int GramIdentity::nodes_for(Complex z1, Complex z2)
{
  const auto depth = [](Complex z)
  {
    const double a = std::abs(z);
    return a == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(std::log(a));
  };
  const double d = std::min(depth(z1), depth(z2));
  const double want = std::isfinite(d) ? 48.0 / d : 0.0;
  int n = 256;
  while (n < want && n < (1 << 20))
  {
    n <<= 1;
  }
  return n;
}

const std::vector<Matrix> &GramIdentity::weight_samples(int nodes) const
{
  for (const auto &entry : cache_)
  {
    if (entry.first == nodes)
    {
      return entry.second;
    }
  }
  const CircleGrid grid(nodes);
  std::vector<Matrix> w(static_cast<std::size_t>(nodes));
  for (int m = 0; m < nodes; m++)
  {
    w[static_cast<std::size_t>(m)] = system_.weight().evaluate(grid.node(m));
  }
  cache_.emplace_back(nodes, std::move(w));
  return cache_.back().second;
}

Matrix GramIdentity::nu0_side(Complex z1, Complex z2) const
{
  const int n = fixed_nodes_ ? fixed_nodes_ : nodes_for(z1, z2);
  const auto &w = weight_samples(n);
  const CircleGrid grid(n);
  const int k = system_.dim();
  Matrix acc = Matrix::Zero(k, k);
  for (int m = 0; m < n; m++)
  {
    const Complex e = grid.point(m);
    acc += w[static_cast<std::size_t>(m)] / ((std::conj(e) - std::conj(z2)) * (e - z1));
  }
  return acc / static_cast<double>(n);
}

Matrix GramIdentity::nu1_integral(Complex z1, Complex z2) const
{
  // J(a, b) = ∫ dν1 / ((e^{-it} - b̄)(e^{it} - a)), J(a, b)* = J(b, a).
  if (z2 == Complex(0.0))
  {
    if (z1 == Complex(0.0))
    {
      const Matrix p = system_.psi1(0.0);
      return (p - p.adjoint()) / (2.0 * kI);
    }
    return nu1_integral(z2, z1).adjoint();
  }
  // 1/((e^{-it} - z̄2)(e^{it} - z1)) = -e^{it} / (z̄2 (e^{it} - 1/z̄2)(e^{it} - z1)),
  // and ∫ e^{it} dν / ((e^{it} - z1)(e^{it} - 1/z̄2)) = (ψ(z1) - ψ(z2)*) / (2i (z1 - 1/z̄2)).
  const Complex reflected = 1.0 / std::conj(z2);
  const Complex gap = z1 - reflected;
  if (std::abs(gap) < 1e-12)
  {
    throw DomainError("z1 coincides with the reflection of z2");
  }
  const Matrix diff = system_.psi1(z1) - system_.psi1(z2).adjoint();
  return -diff / (std::conj(z2) * 2.0 * kI * gap);
}

Matrix GramIdentity::nu1_side(Complex z1, Complex z2) const
{
  return system_.d0(z2).adjoint() * nu1_integral(z1, z2) * system_.d0(z1);
}

double GramIdentity::residual(Complex z1, Complex z2) const
{
  return linalg::operator_norm(nu0_side(z1, z2) - nu1_side(z1, z2));
}

double b9_residual(const DeBrangesSystem &system, Complex z1, Complex z2)
{
  return GramIdentity(system).residual(z1, z2);
}

// ---------------------------------------------------------------------------
// Random test functions

Complex TestFunctionSampler::pole(std::mt19937_64 &rng) const
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = std::log(min_standoff), hi = std::log(max_standoff);
  const double d = std::exp(lo + (hi - lo) * unit(rng));
  const bool inside = unit(rng) < 0.5;
  const double angle = 2.0 * kPi * unit(rng);
  return std::polar(inside ? 1.0 - d : 1.0 + d, angle);
}

Vector TestFunctionSampler::coefficient(std::mt19937_64 &rng, int dim) const
{
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Vector v(dim);
  for (int i = 0; i < dim; i++)
  {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

RationalTestFunction TestFunctionSampler::function(std::mt19937_64 &rng, int dim) const
{
  std::uniform_int_distribution<int> count(1, max_poles);
  const int n = count(rng);
  RationalTestFunction f(dim, std::min(min_standoff, RationalTestFunction::kDefaultStandoff));
  for (int i = 0; i < n; i++)
  {
    const Complex z = pole(rng);
    f.add_term(z, coefficient(rng, dim));
  }
  return f;
}

RationalTestFunction TestFunctionSampler::single_pole(std::mt19937_64 &rng, int dim) const
{
  const Complex z = pole(rng);
  return RationalTestFunction::single(z, coefficient(rng, dim),
                                      std::min(min_standoff, RationalTestFunction::kDefaultStandoff));
}

TestFunctionCorpus random_corpus(std::uint64_t seed, int count, int dim,
                                 const TestFunctionSampler &sampler)
{
  std::mt19937_64 rng(seed);
  TestFunctionCorpus corpus{seed, {}};
  corpus.functions.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; i++)
  {
    corpus.functions.push_back(sampler.function(rng, dim));
  }
  return corpus;
}

std::string dump_corpus(const TestFunctionCorpus &corpus)
{
  using json = nlohmann::json;
  json funcs = json::array();
  for (const auto &f : corpus.functions)
  {
    json terms = json::array();
    for (const auto &t : f.terms())
    {
      json re = json::array(), im = json::array();
      for (Eigen::Index i = 0; i < t.coefficient.size(); i++)
      {
        re.push_back(t.coefficient(i).real());
        im.push_back(t.coefficient(i).imag());
      }
      terms.push_back({{"pole", {t.pole.real(), t.pole.imag()}}, {"re", re}, {"im", im}});
    }
    funcs.push_back({{"dim", f.dim()}, {"terms", terms}});
  }
  return json{{"seed", corpus.seed}, {"functions", funcs}}.dump(2) + "\n";
}

TestFunctionCorpus parse_corpus(const std::string &text)
{
  using json = nlohmann::json;
  try
  {
    const json doc = json::parse(text);
    TestFunctionCorpus corpus{doc.at("seed").get<std::uint64_t>(), {}};
    for (const auto &fj : doc.at("functions"))
    {
      const int dim = fj.at("dim").get<int>();
      RationalTestFunction f(dim, 0.0);
      for (const auto &tj : fj.at("terms"))
      {
        const auto &p = tj.at("pole");
        Vector chi(dim);
        for (int i = 0; i < dim; i++)
        {
          chi(i) = Complex(tj.at("re")[static_cast<std::size_t>(i)].get<double>(),
                           tj.at("im")[static_cast<std::size_t>(i)].get<double>());
        }
        f.add_term(Complex(p[0].get<double>(), p[1].get<double>()), chi);
      }
      corpus.functions.push_back(std::move(f));
    }
    return corpus;
  }
  catch (const json::exception &e)
  {
    throw ValidationError(std::string("malformed test-function corpus: ") + e.what());
  }
}

}  // namespace twoweight
