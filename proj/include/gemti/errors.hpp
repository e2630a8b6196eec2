#ifndef GEMTI_ERRORS_HPP
#define GEMTI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gemti {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EdgeLeakError : Error { using Error::Error; };
struct ZeroFocalError : Error { using Error::Error; };
struct EmptyListError : Error { using Error::Error; };
struct ZeroGradientError : Error { using Error::Error; };
struct ZeroChirpError : Error { using Error::Error; };
struct CflViolationError : Error { using Error::Error; };
struct NonFiniteStateError : Error { using Error::Error; };
struct InvalidParamsError : Error { using Error::Error; };
struct UndersampledSpectrumError : Error { using Error::Error; };
struct NoFwhmError : Error { using Error::Error; };
struct NoPeakError : Error { using Error::Error; };

// Configuration / scenario-file problem. `line` is 1-based, 0 if unknown.
struct ConfigError : Error {
  int line;
  ConfigError(const std::string& msg, int line_ = 0)
      : Error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

}  // namespace gemti

#endif
