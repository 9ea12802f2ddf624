#include "fantone/error.hpp"

#include <iostream>
#include <mutex>

namespace fantone {

namespace {
std::mutex sink_mutex;
WarningSink& sink() {
  static WarningSink s = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}
}  // namespace

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

void set_warning_sink(WarningSink s) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  sink() = s ? std::move(s) : WarningSink([](const std::string&) {});
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  sink()(message);
}

}  // namespace fantone
