// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace t2n {

/// Shared "t2n" logger; defaults to stderr at warn level.
std::shared_ptr<spdlog::logger> logger();

/// Replaces the logger's sinks (tests capture output this way).
void set_log_sink(spdlog::sink_ptr sink);

}  // namespace t2n
