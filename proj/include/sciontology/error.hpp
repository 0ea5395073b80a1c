#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sciontology {

/// One violated invariant. `code` is machine-readable (e.g. "EMPTY_DOMAINS"),
/// `field` names the offending field of the record.
struct Finding {
  std::string code;
  std::string field;
  std::string message;

  bool operator==(const Finding&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string subject, std::vector<Finding> findings);
  ValidationError(std::string subject, Finding finding);

  const std::string& subject() const noexcept { return subject_; }
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::string subject_;
  std::vector<Finding> findings_;
};

/// Malformed input text. `line` is 1-based; `offset` is the byte offset when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset = 0)
      : Error(what), line_(line), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(std::string id)
      : Error("duplicate entry id: " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A weighted feature vector with zero norm, for which cosine distance is undefined.
class DegenerateVectorError : public Error {
 public:
  explicit DegenerateVectorError(std::string workload_id)
      : Error("degenerate (zero-norm) weighted vector: " + workload_id),
        workload_id_(std::move(workload_id)) {}
  const std::string& workload_id() const noexcept { return workload_id_; }

 private:
  std::string workload_id_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace sciontology
