// SPDX-License-Identifier: Apache-2.0
#include "eve_wire.hpp"

#include <httplib.h>

namespace t2n {

namespace {

constexpr std::string_view kCookieName = "unetlab_session";

std::string labs(const std::string& lab_path) { return "/api/labs" + lab_path; }

std::string node_path(const std::string& lab_path, int node_id) {
  return labs(lab_path) + "/nodes/" + std::to_string(node_id);
}

}  // namespace

const nlohmann::json& WireResponse::data() const {
  static const nlohmann::json kNull;
  if (body.is_object() && body.contains("data")) return body["data"];
  return kNull;
}

EveWire::EveWire(const std::string& base_url, std::chrono::milliseconds timeout)
    : client_(std::make_unique<httplib::Client>(base_url)) {
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
  client_->set_connection_timeout(seconds.count(), micros.count());
  client_->set_read_timeout(seconds.count(), micros.count());
  client_->set_write_timeout(seconds.count(), micros.count());
}

EveWire::~EveWire() = default;

WireResponse EveWire::send(const std::string& method, const std::string& path, const nlohmann::json* body) {
  httplib::Headers headers;
  if (!cookie_.empty()) headers.emplace("Cookie", std::string(kCookieName) + "=" + cookie_);
  const std::string payload = body != nullptr ? body->dump() : std::string();

  httplib::Result res{nullptr, httplib::Error::Unknown};
  if (method == "GET") {
    res = client_->Get(path, headers);
  } else if (method == "POST") {
    res = client_->Post(path, headers, payload, "application/json");
  } else {
    res = client_->Put(path, headers, payload, "application/json");
  }

  WireResponse out;
  if (!res) {
    out.transport_error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = nlohmann::json::parse(res->body, nullptr, false);
  if (out.body.is_discarded()) out.body = nlohmann::json{{"message", res->body}};

  if (path == "/api/auth/login" && out.ok()) {
    const std::string prefix = std::string(kCookieName) + "=";
    for (const auto& [name, value] : res->headers) {
      if (name != "Set-Cookie" || !value.starts_with(prefix)) continue;
      cookie_ = value.substr(prefix.size(), value.find(';') - prefix.size());
    }
  }
  return out;
}

WireResponse EveWire::login(const std::string& username, const std::string& password) {
  cookie_.clear();
  const nlohmann::json body{{"username", username}, {"password", password}, {"html5", "-1"}};
  return send("POST", "/api/auth/login", &body);
}

WireResponse EveWire::create_lab(const std::string& name) {
  const nlohmann::json body{{"path", "/"}, {"name", name}, {"version", "1"}, {"author", "text2net"},
                            {"description", "generated by text2net"}};
  return send("POST", "/api/labs", &body);
}

WireResponse EveWire::create_node(const std::string& lab_path, const nlohmann::json& node) {
  return send("POST", labs(lab_path) + "/nodes", &node);
}

WireResponse EveWire::create_network(const std::string& lab_path, const std::string& name) {
  const nlohmann::json body{{"type", "bridge"}, {"name", name}, {"visibility", 1}};
  return send("POST", labs(lab_path) + "/networks", &body);
}

WireResponse EveWire::link(const std::string& lab_path, int node_id, int ethernet_index, int network_id) {
  const nlohmann::json body{{std::to_string(ethernet_index), std::to_string(network_id)}};
  return send("PUT", node_path(lab_path, node_id) + "/interfaces", &body);
}

WireResponse EveWire::start(const std::string& lab_path, int node_id) {
  return send("GET", node_path(lab_path, node_id) + "/start", nullptr);
}

WireResponse EveWire::push_config(const std::string& lab_path, int node_id, const std::string& config) {
  const nlohmann::json body{{"id", node_id}, {"data", config}};
  return send("PUT", labs(lab_path) + "/configs/" + std::to_string(node_id), &body);
}

WireResponse EveWire::list_nodes(const std::string& lab_path) {
  return send("GET", labs(lab_path) + "/nodes", nullptr);
}

WireResponse EveWire::list_networks(const std::string& lab_path) {
  return send("GET", labs(lab_path) + "/networks", nullptr);
}

WireResponse EveWire::node_interfaces(const std::string& lab_path, int node_id) {
  return send("GET", node_path(lab_path, node_id) + "/interfaces", nullptr);
}

WireResponse EveWire::get_config(const std::string& lab_path, int node_id) {
  return send("GET", labs(lab_path) + "/configs/" + std::to_string(node_id), nullptr);
}

}  // namespace t2n
