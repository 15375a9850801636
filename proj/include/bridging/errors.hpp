#pragma once

#include <stdexcept>
#include <string>

namespace bridging {

// Base class for all library errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// File could not be opened or read/written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A text input does not match its expected format; messages carry the
// offending line number where one exists.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Vector length or table dimension mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A queried token is not present in the table.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Cosine of a zero-norm vector, or a zero difference vector in relational
// similarity. Callers treat the pair as incomparable.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

// Rank correlation is undefined (length mismatch handled separately; this
// covers zero rank variance on either side).
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// A mention or document reference that violates structural preconditions,
// e.g. resolving an anaphor against a document it does not belong to.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Corpus schema violation; messages carry the doc id and field path.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A word required by an evaluation is missing from the embedding table
// even after fallback.
class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bridging
