#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ack {

/// Thrown when an exponential loop hits its configured cap. `count` is how far
/// the loop got before aborting.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t count)
      : std::runtime_error(what), count_(count) {}

  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

/// A structural limit (arity, signature size, state count) was exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certificate is missing data the consumer needs.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ack
