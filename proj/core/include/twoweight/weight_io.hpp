// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_WEIGHT_IO_HPP
#define TWOWEIGHT_WEIGHT_IO_HPP

#include <cstdint>
#include <string>
#include "twoweight/weights.hpp"

namespace twoweight
{

// Weight-spec files are JSON documents
//
//   { "dim": k, "schatten_p": p, "kind": "fourier" | "samples", "data": [...] }
//
// "fourier": data lists {"n": n, "re": [[..]], "im": [[..]]} for n ≥ 0
// (negative n implied by Hermitian symmetry; missing n are zero).
// "samples": data lists M matrices {"re": [[..]], "im": [[..]]}, M a power
// of two ≥ 16.
//
// Scalar v0 specs (Koosis pipeline) additionally accept
// "reciprocal_fourier": v0 = 1/q with q given in the "fourier" layout.
// "im" may be omitted for real matrices. All invariants are checked on load
// and reported as ValidationError.

MatrixWeight parse_weight_spec(const std::string &text, int grid_size = 0);
MatrixWeight load_weight_spec(const std::string &path, int grid_size = 0);

ScalarWeight parse_scalar_weight_spec(const std::string &text, int grid_size);
ScalarWeight load_scalar_weight_spec(const std::string &path, int grid_size);

// Serializes in "fourier" form for Fourier weights, "samples" otherwise.
std::string dump_weight_spec(const MatrixWeight &w);

std::string read_text_file(const std::string &path);

// Writes via a temporary file in the same directory followed by rename.
void write_text_file_atomic(const std::string &path, const std::string &contents);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(const std::string &bytes);

}  // namespace twoweight

#endif  // TWOWEIGHT_WEIGHT_IO_HPP
