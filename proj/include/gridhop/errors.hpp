#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridhop {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownTerm : public Error {
 public:
  using Error::Error;
};

class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

class PlacementExhausted : public Error {
 public:
  using Error::Error;
};

class PoolExhausted : public Error {
 public:
  using Error::Error;
};

class MissingTemplate : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class AmbiguousTemplates : public Error {
 public:
  using Error::Error;
};

class IncompleteLexicon : public Error {
 public:
  using Error::Error;
};

class MissingAsset : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

/// A sentence that no template of the pack produces. `line` is 1-based, 0 when
/// the sentence was parsed on its own.
class NoMatch : public Error {
 public:
  NoMatch(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class AmbiguousMatch : public Error {
 public:
  AmbiguousMatch(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// I/O or record-shape problem while reading a dataset; `line` is 1-based.
class DatasetError : public Error {
 public:
  DatasetError(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gridhop
