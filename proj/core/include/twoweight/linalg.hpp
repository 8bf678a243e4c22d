// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_LINALG_HPP
#define TWOWEIGHT_LINALG_HPP

#include <complex>
#include <functional>
#include <Eigen/Dense>

namespace twoweight
{

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Eigenvalues of a Hermitian matrix in [-kPsdClamp, 0) are treated as roundoff
// and clamped to zero; anything more negative is rejected.
inline constexpr double kPsdClamp = 1e-10;

namespace linalg
{

Matrix hermitian_part(const Matrix &a);

// Largest entrywise deviation from Hermitian symmetry, max |a_ij - conj(a_ji)|.
double hermitian_defect(const Matrix &a);

RealVector hermitian_eigenvalues(const Matrix &a);

// f(A) = V f(Λ) V* for Hermitian A via the self-adjoint eigensolver.
Matrix hermitian_function(const Matrix &a, const std::function<double(double)> &f);
Matrix hermitian_function_complex(const Matrix &a,
                                  const std::function<Complex(double)> &f);

// Clamps eigenvalues in [-kPsdClamp, 0) to zero. Throws ValidationError when
// the smallest eigenvalue is below -kPsdClamp (scaled by max(1, ‖A‖)).
Matrix clamp_psd(const Matrix &a, const char *what = "matrix");

// Principal square root of a PSD matrix (after clamp_psd).
Matrix psd_sqrt(const Matrix &a);

double operator_norm(const Matrix &a);
double smallest_singular_value(const Matrix &a);
RealVector singular_values(const Matrix &a);

// Condition of D relative to the unit scale of the normalized problem:
// max(1, σ_max(D)) / σ_min(D). The plain ratio σ_max/σ_min is blind to a
// scalar D passing through zero, which is exactly the singular case of interest.
double normalized_condition(const Matrix &a);

// Inverse via full-pivot LU.
Matrix inverse(const Matrix &a);

// Number of eigenvalues of a Hermitian matrix above the threshold.
int numerical_rank(const Matrix &a, double threshold);

}  // namespace linalg

}  // namespace twoweight

#endif  // TWOWEIGHT_LINALG_HPP
