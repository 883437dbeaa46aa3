// SPDX-License-Identifier: Apache-2.0
//
// In-memory stand-in for the EVE-NG REST endpoints the provisioner uses.
// Test surface only: no persistence, one user, fault injection hooks.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace t2n {

struct MockEveFaults {
  int fail_create_node_at = 0;      // 1-based; that create_node returns 500 on every attempt
  int expire_session_at_call = 0;   // 1-based count of authenticated calls; answered once with 401
  int server_errors_before_login = 0;  // first N login attempts return 503
};

struct RecordedCall {
  std::string kind;  // login, create_lab, create_node, ... or the raw path for reads
  std::string method;
  std::string path;
  int status = 0;
};

class MockEveServer {
 public:
  MockEveServer(std::string username, std::string password, MockEveFaults faults = {});
  ~MockEveServer();

  MockEveServer(const MockEveServer&) = delete;
  MockEveServer& operator=(const MockEveServer&) = delete;

  /// Binds 127.0.0.1 on an ephemeral port and serves in a background thread.
  void start();
  void stop();

  std::string base_url() const;
  std::vector<RecordedCall> calls() const;
  /// Kinds of the successful mutating calls, in arrival order.
  std::vector<std::string> successful_kinds() const;
  /// Every request body received, verbatim (for credential-leak checks).
  std::vector<std::string> request_bodies() const;
  nlohmann::json state() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace t2n
