// Error types thrown by the glinv library.

#pragma once

#include <stdexcept>
#include <string>

namespace glinv {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (shape mismatches, bad parameters, ...).
struct MalformedInput : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  ZeroVector() : Error("dual_vector: zero vector (subdifferential is the whole dual ball)") {}
};

struct UnsupportedNorm : Error {
  explicit UnsupportedNorm(const std::string& what) : Error("unsupported norm: " + what) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& what) : Error("no convergence: " + what) {}
};

struct EvaluationFailure : Error {
  explicit EvaluationFailure(const std::string& what) : Error("evaluation failure: " + what) {}
};

struct CoincidentTarget : Error {
  CoincidentTarget() : Error("f(x) = y: dual slice undefined at a solution") {}
};

struct CriticalPoint : Error {
  CriticalPoint() : Error("min-norm element below noise floor: no descent direction") {}
};

struct NotSquare : Error {
  NotSquare() : Error("regularity index requires square operators") {}
};

struct DimensionTooLarge : Error {
  explicit DimensionTooLarge(int dim, int cap)
      : Error("dimension " + std::to_string(dim) + " exceeds sampling cap " + std::to_string(cap)) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error("out of range: " + what) {}
};

struct Unreachable : Error {
  explicit Unreachable(const std::string& what) : Error("unreachable: " + what) {}
};

struct NotAWeight : Error {
  NotAWeight() : Error("profile has a zero: cannot form the weight m(0)/m - 1") {}
};

struct NotPositive : Error {
  NotPositive() : Error("profile not positive at the requested radius") {}
};

struct DegenerateSegment : Error {
  DegenerateSegment() : Error("segment endpoints coincide") {}
};

struct TraceTooShort : Error {
  TraceTooShort() : Error("need at least 10 iterations to classify a run") {}
};

struct NoContraction : Error {
  NoContraction() : Error("Picard iteration shows no contraction") {}
};

struct DimensionNot2 : Error {
  DimensionNot2() : Error("openness oracle works in dimension 2 only") {}
};

}  // namespace glinv
