#pragma once

#include "loccode/codes.hpp"

#include <iosfwd>
#include <string>

namespace loccode {

// Parity-check file format, bit-exact:
//   line 1: "PCHK n=<n> rows=<r>"
//   then r lines of n characters from {0,1}, one presented H row per line,
//   in construction order; trailing newline; no other whitespace.
std::string pchk_to_string(const BitMatrix& h);
void write_pchk(std::ostream& out, const BitMatrix& h);
BitMatrix read_pchk(std::istream& in);

LinearCode load_code(const std::string& path);
void save_code(const std::string& path, const LinearCode& code);

// Accepts "parity<n>", "hamming<r>", "ldpc:<n>:<rows>:<row_weight>:<seed>",
// "tensor:<ref>:<ref>" (factors may themselves be shorthands or paths), or
// a path to a .pchk file. Shorthands exist because a parity-check file alone
// cannot carry the tensor grid structure some testers need.
LinearCode resolve_code_ref(const std::string& ref);

}  // namespace loccode
