// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/sinks/stdout_sinks.h>

#include "t2n/log.hpp"

namespace t2n::test {

/// Routes the shared logger into a string for the lifetime of the object.
class LogCapture {
 public:
  explicit LogCapture(spdlog::level::level_enum level = spdlog::level::trace) : previous_(logger()->level()) {
    set_log_sink(std::make_shared<spdlog::sinks::ostream_sink_mt>(out_));
    logger()->set_level(level);
  }
  ~LogCapture() {
    set_log_sink(std::make_shared<spdlog::sinks::stderr_sink_mt>());
    logger()->set_level(previous_);
  }
  LogCapture(const LogCapture&) = delete;
  LogCapture& operator=(const LogCapture&) = delete;

  std::string text() {
    logger()->flush();
    return out_.str();
  }

 private:
  std::ostringstream out_;
  spdlog::level::level_enum previous_;
};

}  // namespace t2n::test
