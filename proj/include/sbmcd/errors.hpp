#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbmcd {

/// Model parameters outside their admissible range (P entries, pi, S).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A confusion-matrix block with zero pair mass, i.e. an empty estimated
/// community, where a mixture probability would be 0/0.
class DegenerateBlockError : public std::domain_error {
 public:
  DegenerateBlockError(std::size_t a, std::size_t b)
      : std::domain_error("degenerate block (" + std::to_string(a) + "," +
                          std::to_string(b) + "): zero pair mass"),
        a_(a),
        b_(b) {}

  std::size_t row() const { return a_; }
  std::size_t col() const { return b_; }

 private:
  std::size_t a_;
  std::size_t b_;
};

/// No labeling satisfies the minimum community size constraint.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive search refused because k^n exceeds the enumeration guard.
class SearchSpaceError : public std::length_error {
 public:
  SearchSpaceError(double size, double limit)
      : std::length_error("search space k^n = " + std::to_string(size) +
                          " exceeds limit " + std::to_string(limit)),
        size_(size) {}

  double size() const { return size_; }

 private:
  double size_;
};

/// Parameter family for which a quantity is undefined (e.g. C(pi,S) with k=1).
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sbmcd
