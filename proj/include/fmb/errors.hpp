#pragma once

#include <stdexcept>
#include <string>

namespace fmb {

// Base class for every error raised by the library. Each concrete error
// carries enough context to identify the offending input.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A distance matrix failed one of the metric axioms. `axiom` is one of
// "identity", "positivity", "symmetry", "triangle"; the witness indices
// identify a violating pair or triple (unused entries are -1).
class MetricViolation : public Error {
public:
  MetricViolation(std::string axiom, int i, int j, int k_witness,
                  const std::string& detail)
      : Error("metric violation (" + axiom + ") at (" + std::to_string(i) +
              "," + std::to_string(j) + "," + std::to_string(k_witness) +
              "): " + detail),
        axiom(std::move(axiom)), i(i), j(j), k(k_witness) {}
  std::string axiom;
  int i, j, k;
};

class CardinalityOverflow : public Error {
public:
  CardinalityOverflow(std::size_t requested, std::size_t cap)
      : Error("point count " + std::to_string(requested) +
              " exceeds cap " + std::to_string(cap)),
        requested(requested), cap(cap) {}
  std::size_t requested, cap;
};

class BudgetExhausted : public Error {
public:
  explicit BudgetExhausted(const std::string& what) : Error(what) {}
};

class NotInjective : public Error {
public:
  NotInjective(int i, int j)
      : Error("images of points " + std::to_string(i) + " and " +
              std::to_string(j) + " coincide"),
        i(i), j(j) {}
  int i, j;
};

class DegenerateSample : public Error {
public:
  explicit DegenerateSample(const std::string& what) : Error(what) {}
};

class DimensionTooSmall : public Error {
public:
  DimensionTooSmall(int m, double threshold)
      : Error("target dimension " + std::to_string(m) +
              " must exceed 8 ln(k) = " + std::to_string(threshold)),
        m(m), threshold(threshold) {}
  int m;
  double threshold;
};

class NoCoordinates : public Error {
public:
  NoCoordinates() : Error("space carries no Euclidean coordinates") {}
};

class MarginalMismatch : public Error {
public:
  explicit MarginalMismatch(const std::string& what) : Error(what) {}
};

class NotOneDimensional : public Error {
public:
  NotOneDimensional() : Error("space is not one-dimensional") {}
};

class DomainMismatch : public Error {
public:
  explicit DomainMismatch(const std::string& what) : Error(what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class RangeEscape : public Error {
public:
  RangeEscape(double value, double bound)
      : Error("value " + std::to_string(value) +
              " falls outside the grid hull [-M, M] with M = " +
              std::to_string(bound)),
        value(value), bound(bound) {}
  double value, bound;
};

class ShapeMismatch : public Error {
public:
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class ClassTooLarge : public Error {
public:
  explicit ClassTooLarge(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& field_path, const std::string& why)
      : Error("config error at '" + field_path + "': " + why),
        field_path(field_path) {}
  std::string field_path;
};

class UnknownFigure : public Error {
public:
  explicit UnknownFigure(const std::string& name)
      : Error("unknown figure '" + name + "'") {}
};

}  // namespace fmb
