#ifndef PFDR_CORE_HPP
#define PFDR_CORE_HPP

// Shared domain types and vector arithmetic.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfdr {

inline constexpr std::size_t kMaxDimension = 64;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (dimension mismatch, protocol
/// order, out-of-range argument).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared in a computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
bool all_finite(std::span<const double> a);

Vector scaled(std::span<const double> a, double factor);
/// a + factor * b
Vector axpy(std::span<const double> a, double factor, std::span<const double> b);

/// The adversary's per-round linear loss; Euclidean norm at most G.
class LossVector {
 public:
  LossVector(Vector components, double lipschitz);

  std::span<const double> values() const { return components_; }
  std::size_t dim() const { return components_.size(); }

 private:
  Vector components_;
};

/// Unconstrained learner play.
class Action {
 public:
  explicit Action(Vector components);

  std::span<const double> values() const { return components_; }
  std::size_t dim() const { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }

 private:
  Vector components_;
};

struct ComparatorStats {
  std::size_t switches = 0;  // S_T
  double path_length = 0.0;  // P_T
  double max_norm = 0.0;     // M
};

/// Length-T sequence of d-dimensional comparators u_1..u_T.
class ComparatorSequence {
 public:
  ComparatorSequence() = default;
  explicit ComparatorSequence(std::vector<Vector> vectors);

  std::size_t horizon() const { return vectors_.size(); }
  std::size_t dim() const { return vectors_.empty() ? 0 : vectors_.front().size(); }
  /// 0-based round index.
  std::span<const double> at(std::size_t t) const { return vectors_.at(t); }
  const std::vector<Vector>& vectors() const { return vectors_; }

 private:
  std::vector<Vector> vectors_;
};

/// Exact switch count, path length and maximum norm. Throws on empty input.
ComparatorStats comparator_stats(const ComparatorSequence& seq);

}  // namespace pfdr

#endif  // PFDR_CORE_HPP
