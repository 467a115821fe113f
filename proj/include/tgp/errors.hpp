#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tgp {

/// Operand shapes do not agree (length mismatch, N > K for a partial DFT, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter lies outside the domain of the operation.
class ParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Gram matrix of the selected columns could not be inverted.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, std::vector<std::size_t> omega)
      : std::runtime_error(what), omega_(std::move(omega)) {}

  const std::vector<std::size_t>& omega() const noexcept { return omega_; }

 private:
  std::vector<std::size_t> omega_;
};

/// Reading or writing a file failed; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tgp
