// SPDX-License-Identifier: Apache-2.0
#include "t2n/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

namespace t2n {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto log = std::make_shared<spdlog::logger>("t2n", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    log->set_level(spdlog::level::warn);
    return log;
  }();
  return instance;
}

void set_log_sink(spdlog::sink_ptr sink) {
  auto log = logger();
  log->sinks().clear();
  log->sinks().push_back(std::move(sink));
}

}  // namespace t2n
