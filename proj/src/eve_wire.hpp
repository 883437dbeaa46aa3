// SPDX-License-Identifier: Apache-2.0
//
// The only place that knows EVE-NG REST paths and payload shapes.
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include <json.hpp>

namespace httplib {
class Client;
}

namespace t2n {

struct WireResponse {
  int status = 0;  // 0 when the request never completed
  nlohmann::json body;
  std::string transport_error;

  bool ok() const noexcept { return status >= 200 && status < 300; }
  /// "data" member of the EVE envelope, or null.
  const nlohmann::json& data() const;
};

class EveWire {
 public:
  EveWire(const std::string& base_url, std::chrono::milliseconds timeout);
  ~EveWire();

  void set_cookie(std::string cookie) { cookie_ = std::move(cookie); }
  const std::string& cookie() const noexcept { return cookie_; }

  /// On success stores the session cookie.
  WireResponse login(const std::string& username, const std::string& password);
  WireResponse create_lab(const std::string& name);
  WireResponse create_node(const std::string& lab_path, const nlohmann::json& node);
  WireResponse create_network(const std::string& lab_path, const std::string& name);
  WireResponse link(const std::string& lab_path, int node_id, int ethernet_index, int network_id);
  WireResponse start(const std::string& lab_path, int node_id);
  WireResponse push_config(const std::string& lab_path, int node_id, const std::string& config);

  WireResponse list_nodes(const std::string& lab_path);
  WireResponse list_networks(const std::string& lab_path);
  WireResponse node_interfaces(const std::string& lab_path, int node_id);
  WireResponse get_config(const std::string& lab_path, int node_id);

  static std::string lab_path_for(const std::string& name) { return "/" + name + ".unl"; }

 private:
  WireResponse send(const std::string& method, const std::string& path, const nlohmann::json* body);

  std::unique_ptr<httplib::Client> client_;
  std::string cookie_;
};

}  // namespace t2n
