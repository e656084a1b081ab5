#pragma once

#include <stdexcept>
#include <string>

namespace pattree {

/// Malformed input: permutations, pattern-tree documents, artifact files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact-arithmetic consistency check failed (e.g. a profile solve that is
/// not a non-negative integer vector, or an artifact checksum mismatch).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cost guard rejected the request (vertex size, enumeration bound, ...).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible arguments (method/k mismatch, parameter out of range).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pattree
