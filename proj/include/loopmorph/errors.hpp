// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace loopmorph {

/// Base of every error raised by the pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LOOPMORPH_ERROR(Name)       \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

LOOPMORPH_ERROR(InvalidProgram);
LOOPMORPH_ERROR(SubsetViolation);
LOOPMORPH_ERROR(GenerationBudgetExceeded);
LOOPMORPH_ERROR(ProfileUnavailable);
LOOPMORPH_ERROR(NoInvariantVars);
LOOPMORPH_ERROR(InsertionFailed);
LOOPMORPH_ERROR(TripTooLarge);
LOOPMORPH_ERROR(NonCanonicalLoop);
LOOPMORPH_ERROR(PlanMismatch);
LOOPMORPH_ERROR(RecipeMismatch);
LOOPMORPH_ERROR(PreconditionViolated);
LOOPMORPH_ERROR(NotAdjacent);
LOOPMORPH_ERROR(ToolNotFound);
LOOPMORPH_ERROR(NotReproducible);
LOOPMORPH_ERROR(ConfigError);

#undef LOOPMORPH_ERROR

class ParseError : public Error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

}  // namespace loopmorph
