#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fantone {

enum class ErrorKind {
  config,            // invalid parameters or configuration document
  invalid_argument,  // precondition violated by a caller
  io,                // file could not be opened or written
  parse,             // malformed input file
  numeric,           // supersonic panel, failed root bracket, empty window
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// Non-fatal diagnostics (e.g. a tone above Nyquist) go through a replaceable
// sink. The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace fantone
