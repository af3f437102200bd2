#pragma once

#include <stdexcept>
#include <string>

namespace hetrec {

/// Invalid command line, config file, or API contract violation. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (logs, schemas, weight files). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runtime failure, e.g. solver non-convergence. CLI exit code 3.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested user has no vertex in the training graph.
class UnknownUserError : public DataError {
 public:
  explicit UnknownUserError(const std::string& user_id)
      : DataError("unknown user: " + user_id), user_id_(user_id) {}
  const std::string& user_id() const { return user_id_; }

 private:
  std::string user_id_;
};

}  // namespace hetrec
