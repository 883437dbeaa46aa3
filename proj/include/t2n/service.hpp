// SPDX-License-Identifier: Apache-2.0
//
// HTTP/JSON front of the session store, consumed by the web UI.
//
//   POST /api/sessions                      {"backend":"sim"|"eve"}      201
//   GET  /api/sessions/{id}                                               200
//   POST /api/sessions/{id}/message         {"text":..., "kind"?:...}    200 | 202 | 409
//   GET  /api/sessions/{id}/pending/{token}                               200 | 202
//   GET  /api/sessions/{id}/topology                                      200 | 409
//   POST /api/sessions/{id}/query           {"command":...}              200 | 409
//   GET  /api/sessions/{id}/events          server-sent events (?follow=0 to drain and close)
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "t2n/orchestrator.hpp"

namespace t2n {

inline constexpr std::string_view kApiSchemaHeader = "X-T2N-Schema";
inline constexpr std::string_view kApiSchema = "t2n-api/1";

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;                   // 0 picks a free port
  std::string cors_origin;           // empty disables CORS headers
  std::chrono::milliseconds message_timeout{20000};
  std::string static_dir;            // optional web UI assets
  bool eve_available = false;        // eve sessions need a configured EVE endpoint
};

class Service {
 public:
  Service(SessionStore& store, ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and returns the port. Throws Error{InvalidConfig} when binding fails.
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  /// bind() + listen() on a background thread.
  void start();
  void stop();

  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace t2n
