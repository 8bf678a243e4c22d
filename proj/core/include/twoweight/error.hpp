// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_ERROR_HPP
#define TWOWEIGHT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace twoweight
{

// Argument outside the mathematical domain of an operation (r = 1 in the
// Poisson kernel, p < 1 for a Schatten norm, a point too close to the circle).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Input data violates a documented invariant (non-Hermitian sample, negative
// eigenvalue beyond the clamp, malformed weight-spec file).
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A computation became numerically meaningless (singular D0, normalization
// violated, gram matrix numerically zero).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Requested problem size exceeds the desk-scale caps.
class ResourceError : public std::length_error
{
public:
  using std::length_error::length_error;
};

}  // namespace twoweight

#endif  // TWOWEIGHT_ERROR_HPP
