#pragma once

#include <stdexcept>
#include <string>

namespace vial {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers can catch the whole family at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input values: non-positive weights, bad parameters, size mismatches.
struct ValidationError : Error {
  using Error::Error;
};

// Reference to an attribute value or type that is not in the vocabulary.
struct VocabularyError : Error {
  using Error::Error;
};

// Operation applied to a node of the wrong kind.
struct KindError : Error {
  using Error::Error;
};

// Dense-path size caps exceeded.
struct SizeError : Error {
  using Error::Error;
};

// Unknown external identifier.
struct LookupError : Error {
  using Error::Error;
};

// File parsing problems; carries file/line context in the message.
struct ParseError : Error {
  using Error::Error;
};

// Confidence score requested where it is undefined (< 2 candidate values).
struct ConfidenceError : Error {
  using Error::Error;
};

}  // namespace vial
