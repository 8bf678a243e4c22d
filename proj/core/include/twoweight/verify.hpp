// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_VERIFY_HPP
#define TWOWEIGHT_VERIFY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>
#include "twoweight/hardy.hpp"
#include "twoweight/model.hpp"

namespace twoweight
{

struct SuiteConfig
{
  std::vector<std::string> fixtures = fixtures::names();
  // Extra weights by name, checked like fixtures.
  std::vector<std::pair<std::string, MatrixWeight>> weights;
  int random_weights = 0;
  int random_max_dim = 4;
  int random_degree = 4;

  int grid_size = 1024;       // companion-weight grid
  int hardy_grid = 4096;      // operator and Gram checks
  int decomposition_grid = 1024;
  int model_modes = 256;
  int spectral_modes = 128;

  int test_functions = 100;
  int basis_size = 10;
  int random_points = 20;
  int gram_pairs = 50;

  std::optional<std::uint64_t> seed;
  // Replaces every residual tolerance.
  std::optional<double> tolerance;
  // Per invariant ("module.invariant") tolerance overrides.
  std::map<std::string, double> overrides;
  bool include_runtime = false;

  // Throws ValidationError: missing seed, negative tolerances, bad sizes.
  void validate() const;
};

enum class Relation
{
  at_most,  // value ≤ threshold
  at_least  // value ≥ threshold
};

struct CheckResult
{
  std::string name;  // subject/module.invariant
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::at_most;
  std::string detail;
  double runtime_seconds = 0.0;
};

struct Report
{
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;  // sorted by name
  bool include_runtime = false;

  bool passed() const;
  bool vacuous() const { return checks.empty(); }
  int failure_count() const;
  // "pass", "fail" or "vacuous-pass"
  std::string status() const;
  const CheckResult *find(const std::string &name) const;

  std::string to_json() const;
  std::string summary_table() const;
};

// module.invariant identifiers that a suite over the default fixtures must cover.
std::vector<std::string> required_invariants();
std::set<std::string> covered_invariants(const Report &report);

Report run_suite(const SuiteConfig &config);

struct KoosisOptions
{
  int hardy_grid = 4096;
  int basis_size = 10;
  std::uint64_t seed = 0;
};

struct KoosisResult
{
  ScalarWeight v1{CircleGrid(16), {}};
  std::vector<bool> flags;
  double normalization = 1.0;  // w0 = normalization · v0^{-1}, v1 = normalization · w1
  double norm_estimate = 0.0;  // Galerkin lower bound for ‖P_+‖² from L²(v0) to L²(v1)
  double log_integral = 0.0;   // mean of |log v1| over unflagged nodes
  double muckenhoupt = 0.0;
  double deficit = 0.0;
};

// v0 ↦ w0 = normalize(v0^{-1}) ↦ w1 ↦ v1 = c·w1. Throws ValidationError when
// v0 vanishes on a node.
KoosisResult koosis_pipeline(const ScalarWeight &v0, const KoosisOptions &options = {});

struct NondegeneracyRow
{
  double theta = 0.0;
  int rank_w0 = 0;
  int rank_w1 = 0;
  double norm_w1 = 0.0;
  double norm_bound = 0.0;  // ‖w0‖/‖D0^+‖²
  double cond = 0.0;
  double reconstruction = 0.0;  // ‖w0 - D0^+* w1 D0^+‖
  bool flagged = false;
};

struct NondegeneracyReport
{
  std::vector<NondegeneracyRow> rows;
  int rank_violations = 0;  // unflagged nodes with cond ≤ 1e6
  int norm_violations = 0;  // unflagged nodes, ‖w1‖ < bound - 1e-8
  int log_violations = 0;   // unflagged nodes, log‖w1‖ < log(bound) - 1e-8 where ‖w0‖ > 0
};

NondegeneracyReport nondegeneracy_report(const DeBrangesSystem &system,
                                         const CompanionWeightResult &result,
                                         double rank_threshold = 1e-8);

}  // namespace twoweight

#endif  // TWOWEIGHT_VERIFY_HPP
