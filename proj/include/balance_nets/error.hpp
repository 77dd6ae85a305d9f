#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace balance_nets {

  enum class ErrorCode {
    invalid_input,     // malformed or inconsistent arguments
    validation,        // a file parsed but violates a structural contract
    parse,             // a file did not parse
    bound_exceeded,    // an enumeration bound was hit
    mismatched_group,  // elements from different reaction groups were mixed
    singular,          // a matrix that must be invertible is not
    not_potential,     // an operation required a potential marking
    domain,            // evaluation outside the admissible domain
    numerical          // a numerical procedure failed to converge
  };

  std::string_view to_string(ErrorCode code) noexcept;

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(what), _code(code) {}

    ErrorCode code() const noexcept {
      return _code;
    }

   private:
    ErrorCode _code;
  };

  [[noreturn]] inline void fail(ErrorCode code, std::string const& what) {
    throw Error(code, what);
  }

}  // namespace balance_nets
