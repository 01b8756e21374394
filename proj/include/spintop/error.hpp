#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace spintop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: flags, config files, preconditions on parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unusable data: unreadable streams, empty inputs, malformed artifacts.
class DataError : public Error {
 public:
  using Error::Error;
};

// Raised when an iterative solver stops without meeting its tolerance. Carries
// the best iterate found and its optimality residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, Eigen::VectorXd best_iterate,
              double kkt_residual)
      : Error(what),
        best_iterate_(std::move(best_iterate)),
        kkt_residual_(kkt_residual) {}

  const Eigen::VectorXd& best_iterate() const { return best_iterate_; }
  double kkt_residual() const { return kkt_residual_; }

 private:
  Eigen::VectorXd best_iterate_;
  double kkt_residual_;
};

}  // namespace spintop
