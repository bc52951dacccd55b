#ifndef GRIDPCE_ERRORS_HPP
#define GRIDPCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridpce {

// Bad argument values, out-of-range probabilities, invalid sizes.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Input data problems: malformed files, shape mismatches between files.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Case-file syntax or structural errors.  Carries the 1-based line number
// of the offending row (0 when the problem is not tied to a line, e.g. a
// missing table).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, int line)
      : InputError(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Numerical failures: indefinite moment sequences, singular systems,
// saturated leverages, non-convergent cascades.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Stieltjes procedure hit a non-positive recurrence weight.
class IllConditioningError : public NumericalError {
 public:
  IllConditioningError(const std::string& what, int degree)
      : NumericalError(what + " at degree " + std::to_string(degree)), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

// Rank-deficient least-squares system; carries the numerical rank.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, long rank)
      : NumericalError(what + " (numerical rank " + std::to_string(rank) + ")"),
        rank_(rank) {}
  long rank() const { return rank_; }

 private:
  long rank_;
};

// A leave-one-out leverage reached 1: the fit interpolates that point.
class LeverageSaturationError : public NumericalError {
 public:
  explicit LeverageSaturationError(const std::string& what) : NumericalError(what) {}
};

// All candidate active sets failed to produce a scoreable model.
class FitFailureError : public NumericalError {
 public:
  explicit FitFailureError(const std::string& what) : NumericalError(what) {}
};

}  // namespace gridpce

#endif  // GRIDPCE_ERRORS_HPP
