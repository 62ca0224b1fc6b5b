#pragma once

#include <stdexcept>
#include <string>

namespace topprod {

// Base class for every error raised by the library. Each subclass names the
// contract that was broken so callers (and the CLI) can map it to an outcome.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A letter with exponent 0, a generator outside its level's rank, etc.
class InvalidLetter : public Error {
public:
  using Error::Error;
};

// Letters of different levels passed where a single level is required.
class LevelMismatch : public Error {
public:
  using Error::Error;
};

// Two normal forms declare different ranks for the same level.
class DeclarationMismatch : public Error {
public:
  using Error::Error;
};

// Two words over different level profiles.
class ProfileMismatch : public Error {
public:
  using Error::Error;
};

class InvalidReindexing : public Error {
public:
  using Error::Error;
};

// Malformed schema (affine rule, tail, grouping, ...).
class InvalidSchema : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

// The requested operation does not apply to this input (e.g. the rank-sequence
// isomorphism test on a model with a horseshoe).
class NotApplicable : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace topprod
