#pragma once

#include <stdexcept>
#include <string>

namespace prefixopt {

// Error taxonomy mirrors the CLI exit codes: validation problems (schema,
// structure, domain) exit 2, size refusals exit 3, I/O failures exit 4.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad field names, duplicate headers, invalid permutations, unknown names.
class schema_error : public error {
 public:
  using error::error;
};

// Malformed input data; message names the offending line where possible.
class structural_error : public error {
 public:
  using error::error;
};

// Inputs outside an operation's numeric domain (negative counts, absent value).
class domain_error : public error {
 public:
  using error::error;
};

// Solver caps exceeded and similar refusals.
class size_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

}  // namespace prefixopt
