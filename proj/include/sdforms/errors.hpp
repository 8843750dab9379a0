#pragma once

#include <stdexcept>
#include <string>

namespace sdforms {

/// Malformed arguments: wrong dimension, degree mismatch, bad indices, bad files.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy result.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request exceeds a cost guard (e.g. brute-force expansion at large N).
class capability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The quantity is undefined for this input (e.g. omega^{n/2} with n odd).
class not_applicable_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sdforms
