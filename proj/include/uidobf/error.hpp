#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uidobf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed corpus file: bad JSON, missing or duplicate id, empty text.
class CorpusError : public Error {
 public:
  using Error::Error;
};

/// A record or request names a label outside the declared label set.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// Fewer articles available than requested for some label.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed line in a data file (synonym DB, scores CSV, ...).
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Failure talking to a scorer, predictor, paraphraser or detector.
/// Transport failures (process died, connection refused) are retryable;
/// protocol failures (bad JSON, "error" field, wrong shape) are not.
class ScorerError : public Error {
 public:
  enum class Kind { transport, protocol };

  ScorerError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }
  bool is_transport() const noexcept { return kind_ == Kind::transport; }

 private:
  Kind kind_;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Detector client failure; shares retry semantics with ScorerError.
class DetectorError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

}  // namespace uidobf
