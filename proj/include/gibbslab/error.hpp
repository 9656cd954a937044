#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gibbslab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact tabulation would exceed the configured entry cap.
class CapError : public Error {
 public:
  CapError(const std::string& what, std::size_t requested, std::size_t cap)
      : Error(what + ": needs " + std::to_string(requested) +
              " entries, cap is " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

}  // namespace gibbslab
