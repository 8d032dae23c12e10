#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pathscape {

/// Thrown when an argument falls outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search visited more nodes (or atoms) than it was allowed to.
/// Never represents a zero result.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t budget)
      : std::runtime_error(what), budget_(budget) {}
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

/// A path count no longer fits in 64 bits.
class CountOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace pathscape
