#pragma once

#include <stdexcept>
#include <string>

namespace trizagents {

// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- knowledge base ---

class MissingFileError : public Error {
 public:
  explicit MissingFileError(const std::string& path)
      : Error("missing data file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& reason)
      : Error(source + ":" + std::to_string(line) + ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class SameParameterError : public Error {
 public:
  explicit SameParameterError(int id)
      : Error("improving and worsening parameter are both " +
              std::to_string(id)) {}
};

class UnknownParameterError : public Error {
 public:
  explicit UnknownParameterError(int id)
      : Error("unknown TRIZ parameter id " + std::to_string(id)), id_(id) {}
  explicit UnknownParameterError(const std::string& name)
      : Error("unknown TRIZ parameter name \"" + name + "\""), id_(0) {}
  int id() const { return id_; }

 private:
  int id_;
};

class UnknownPrincipleError : public Error {
 public:
  explicit UnknownPrincipleError(int id)
      : Error("unknown inventive principle id " + std::to_string(id)),
        id_(id) {}
  int id() const { return id_; }

 private:
  int id_;
};

// --- conversation ---

class NotAiMessageError : public Error {
 public:
  NotAiMessageError() : Error("message role is not ai") {}
};

class HasPendingToolCallsError : public Error {
 public:
  HasPendingToolCallsError()
      : Error("ai message still carries unresolved tool calls") {}
};

class OrphanToolResultError : public Error {
 public:
  explicit OrphanToolResultError(const std::string& call_id)
      : Error("tool result references unknown call id \"" + call_id + "\"") {}
};

class MissingInputError : public Error {
 public:
  explicit MissingInputError(const std::string& name)
      : Error("template input \"" + name + "\" not provided"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownPlaceholderError : public Error {
 public:
  explicit UnknownPlaceholderError(const std::string& name)
      : Error("input \"" + name + "\" matches no template placeholder") {}
};

// --- backend ---

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(what) {}
};

class TransportError : public BackendError {
 public:
  TransportError(int status, const std::string& what)
      : BackendError("transport failure (status " + std::to_string(status) +
                     "): " + what),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class AuthMissingError : public BackendError {
 public:
  explicit AuthMissingError(const std::string& env_var)
      : BackendError("API key environment variable " + env_var +
                     " is not set") {}
};

class TimeoutError : public BackendError {
 public:
  TimeoutError() : BackendError("request timed out") {}
};

class MalformedResponseError : public BackendError {
 public:
  explicit MalformedResponseError(const std::string& what)
      : BackendError("malformed backend response: " + what) {}
};

class ScriptExhaustedError : public BackendError {
 public:
  explicit ScriptExhaustedError(const std::string& key)
      : BackendError("script exhausted, no entry for " + key) {}
};

class KeyMismatchError : public BackendError {
 public:
  KeyMismatchError(const std::string& expected, const std::string& got)
      : BackendError("script key mismatch: expected " + expected + ", got " +
                     got) {}
};

// --- tools ---

class EmptyQueryError : public Error {
 public:
  EmptyQueryError() : Error("query must be non-empty") {}
};

class ProviderFailureError : public Error {
 public:
  ProviderFailureError(int status, const std::string& what)
      : Error("search provider failure (status " + std::to_string(status) +
              "): " + what) {}
};

class MissFixtureError : public Error {
 public:
  explicit MissFixtureError(const std::string& query)
      : Error("no fixture entry for query \"" + query + "\"") {}
};

class DuplicateDocError : public Error {
 public:
  explicit DuplicateDocError(const std::string& id)
      : Error("document \"" + id + "\" already ingested") {}
};

class EmptyBodyError : public Error {
 public:
  EmptyBodyError() : Error("document body must be non-empty") {}
};

class EmptyStoreError : public Error {
 public:
  EmptyStoreError() : Error("retrieval store is empty") {}
};

// --- orchestration ---

class ToolRoundCapExceededError : public Error {
 public:
  ToolRoundCapExceededError()
      : Error("agent kept emitting tool calls after the forced final turn") {}
};

class MissingStepDocumentError : public Error {
 public:
  explicit MissingStepDocumentError(int step)
      : Error("no document for step " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace trizagents
