#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace udpack {

using Point = std::vector<double>;

/// Base class for all udpack errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument / precondition violation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Two points of a would-be uniformly discrete set are closer than 1 - tol.
class MinDistanceViolation : public Error {
  public:
    MinDistanceViolation(std::string msg, Point a, Point b, double distance)
        : Error(std::move(msg)), a(std::move(a)), b(std::move(b)), distance(distance) {}
    Point a;
    Point b;
    double distance;
};

/// A point lies outside the declared window ball.
class OutOfWindowError : public Error {
  public:
    OutOfWindowError(std::string msg, Point p, double norm, double window)
        : Error(std::move(msg)), point(std::move(p)), norm(norm), window(window) {}
    Point point;
    double norm;
    double window;
};

/// A symmetric-difference method cannot handle the given instance; the
/// message carries a concrete witness (e.g. a ball overlapping two foreign balls).
class MethodInapplicable : public Error {
  public:
    using Error::Error;
};

/// Schedule selection ran out of admissible subsequence indices or radii.
class ScheduleExhausted : public Error {
  public:
    ScheduleExhausted(std::string msg, int level) : Error(std::move(msg)), level(level) {}
    int level;
};

/// Operation requires a non-empty set.
class EmptySetError : public Error {
  public:
    using Error::Error;
};

/// Malformed packing / schedule / manifest file.
class FileFormatError : public Error {
  public:
    FileFormatError(std::string msg, int line = -1) : Error(std::move(msg)), line(line) {}
    int line;
};

/// Enumeration or combinatorial search exceeded its stated budget.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

}  // namespace udpack
