#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tracenet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or structurally invalid net document. `location` is a JSON
/// pointer (e.g. "/transitions/2/pre") or "line:col" for syntax errors.
struct ParseError : Error {
    ParseError(std::string location, const std::string& what)
        : Error(location.empty() ? what : location + ": " + what),
          location(std::move(location)) {}
    std::string location;
};

/// Firing the last transition of `witness` from the initial marking puts a
/// second token on `place`.
struct NotSafeError : Error {
    NotSafeError(std::vector<std::string> witness, std::string place);
    std::vector<std::string> witness;
    std::string place;
};

struct CapExceeded : Error {
    using Error::Error;
};

struct NotIrreducible : Error {
    using Error::Error;
};

/// Numeric or theory-level failure: no characteristic root, degenerate
/// kernel, negative first-clique weights, degenerate q0 = 1.
struct NumericFailure : Error {
    using Error::Error;
};

inline NotSafeError::NotSafeError(std::vector<std::string> w, std::string p)
    : Error([&] {
          std::string msg = "net is not 1-safe: firing sequence";
          for (const auto& t : w) msg += " " + t;
          msg += " puts a second token on place " + p;
          return msg;
      }()),
      witness(std::move(w)),
      place(std::move(p)) {}

} // namespace tracenet
