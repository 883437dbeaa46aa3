// SPDX-License-Identifier: Apache-2.0
#include "t2n/topology.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "t2n/error.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

using nlohmann::json;

std::string_view to_string(NodeType type) {
  switch (type) {
    case NodeType::Router: return "router";
    case NodeType::Switch: return "switch";
    case NodeType::Pc: return "pc";
  }
  return "router";
}

NodeType parse_node_type(std::string_view text) {
  const auto t = lower(text);
  if (t == "router") return NodeType::Router;
  if (t == "switch") return NodeType::Switch;
  if (t == "pc") return NodeType::Pc;
  throw Error(ErrorCode::InvalidConfig, "unknown node type '" + std::string(text) + "'");
}

std::optional<Ipv4> InterfaceSpec::ipv4() const noexcept {
  if (address.empty() || check_ipv4(address)) return std::nullopt;
  return validate_ipv4(address);
}

std::optional<int> InterfaceSpec::prefix_len() const noexcept {
  if (mask.empty()) return std::nullopt;
  return parse_prefix_or_mask(mask);
}

std::optional<Ipv4Network> InterfaceSpec::subnet() const noexcept {
  auto ip = ipv4();
  auto len = prefix_len();
  if (!ip || !len) return std::nullopt;
  return Ipv4Network{*ip, *len};
}

bool StaticRoute::via_is_address() const noexcept {
  return !via.empty() && std::isdigit(static_cast<unsigned char>(via.front())) &&
         via.find('.') != std::string::npos;
}

std::optional<Ipv4Network> StaticRoute::destination_network() const noexcept {
  try {
    return parse_ipv4_network(destination);
  } catch (const Error&) {
    return std::nullopt;
  }
}

const InterfaceSpec* DeviceSpec::find_interface(std::string_view name) const {
  auto it = std::find_if(interfaces.begin(), interfaces.end(),
                         [&](const InterfaceSpec& i) { return i.name == name; });
  return it == interfaces.end() ? nullptr : &*it;
}

InterfaceSpec* DeviceSpec::find_interface(std::string_view name) {
  return const_cast<InterfaceSpec*>(std::as_const(*this).find_interface(name));
}

const DeviceSpec* TopologyDocument::find_device(std::string_view hostname) const {
  auto it = std::find_if(devices.begin(), devices.end(),
                         [&](const DeviceSpec& d) { return d.hostname == hostname; });
  return it == devices.end() ? nullptr : &*it;
}

DeviceSpec* TopologyDocument::find_device(std::string_view hostname) {
  return const_cast<DeviceSpec*>(std::as_const(*this).find_device(hostname));
}

TopologyDocument canonicalize(TopologyDocument topo) {
  for (auto& c : topo.connections) {
    if (c.endpoint_b < c.endpoint_a) std::swap(c.endpoint_a, c.endpoint_b);
  }
  std::stable_sort(topo.connections.begin(), topo.connections.end(),
                   [](const Connection& x, const Connection& y) {
                     return std::tie(x.endpoint_a, x.endpoint_b) < std::tie(y.endpoint_a, y.endpoint_b);
                   });
  std::map<int, int> renumber;
  int next = 1;
  for (auto& c : topo.connections) {
    auto [it, inserted] = renumber.try_emplace(c.network_id, next);
    if (inserted) ++next;
    c.network_id = it->second;
  }
  std::stable_sort(topo.devices.begin(), topo.devices.end(),
                   [](const DeviceSpec& a, const DeviceSpec& b) { return a.hostname < b.hostname; });
  for (auto& d : topo.devices) {
    std::stable_sort(d.interfaces.begin(), d.interfaces.end(),
                     [](const InterfaceSpec& a, const InterfaceSpec& b) { return a.name < b.name; });
    std::stable_sort(d.static_routes.begin(), d.static_routes.end(), [](const StaticRoute& a, const StaticRoute& b) {
      const auto na = a.destination_network();
      const auto nb = b.destination_network();
      return std::make_tuple(!na, na.value_or(Ipv4Network{}), a.destination, a.via) <
             std::make_tuple(!nb, nb.value_or(Ipv4Network{}), b.destination, b.via);
    });
    for (auto& i : d.interfaces) {
      if (i.network_id) {
        auto it = renumber.find(*i.network_id);
        if (it != renumber.end()) i.network_id = it->second;
      }
    }
  }
  return topo;
}

namespace {

json endpoint_json(const Endpoint& e) { return {{"device", e.device}, {"interface", e.interface}}; }

json interface_json(const InterfaceSpec& i) {
  json j = {{"name", i.name}, {"is_loopback", i.is_loopback}};
  if (!i.address.empty()) j["ip"] = i.address;
  if (auto len = i.prefix_len()) {
    j["prefix_len"] = *len;
  } else if (!i.mask.empty()) {
    j["mask"] = i.mask;
  }
  if (i.network_id) j["network_id"] = *i.network_id;
  return j;
}

json route_json(const StaticRoute& r) {
  json j = json::object();
  if (!r.destination.empty()) j["destination"] = r.destination;
  if (!r.via.empty()) j["via"] = r.via;
  if (r.resolved_next_hop) j["resolved_next_hop"] = to_string(*r.resolved_next_hop);
  return j;
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::InvalidConfig, std::string("topology JSON: missing string field '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

Endpoint endpoint_from_json(const json& j) {
  return {require_string(j, "device"), require_string(j, "interface")};
}

}  // namespace

json to_json(const TopologyDocument& topo) {
  json devices = json::array();
  for (const auto& d : topo.devices) {
    json interfaces = json::array();
    for (const auto& i : d.interfaces) interfaces.push_back(interface_json(i));
    json routes = json::array();
    for (const auto& r : d.static_routes) routes.push_back(route_json(r));
    json dev = {
        {"hostname", d.hostname},
        {"node_type", to_string(d.node_type)},
        {"node_configs",
         {{"basic", {{"hostname", d.hostname}, {"interfaces", interfaces}}},
          {"L3", {{"static_routes", routes}}}}},
    };
    if (d.node_type_defaulted) dev["node_type_defaulted"] = true;
    devices.push_back(std::move(dev));
  }
  json connections = json::array();
  for (const auto& c : topo.connections) {
    connections.push_back({{"network_id", c.network_id},
                           {"endpoint_a", endpoint_json(c.endpoint_a)},
                           {"endpoint_b", endpoint_json(c.endpoint_b)}});
  }
  return {{"schema", kTopologySchema}, {"devices", devices}, {"connections", connections}};
}

TopologyDocument topology_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != kTopologySchema) {
    throw Error(ErrorCode::InvalidConfig, "topology JSON: expected schema " + std::string(kTopologySchema));
  }
  TopologyDocument topo;
  for (const auto& dj : j.at("devices")) {
    DeviceSpec d;
    d.hostname = require_string(dj, "hostname");
    d.node_type = parse_node_type(require_string(dj, "node_type"));
    d.node_type_defaulted = dj.value("node_type_defaulted", false);
    const auto& configs = dj.at("node_configs");
    for (const auto& ij : configs.at("basic").at("interfaces")) {
      InterfaceSpec i;
      i.name = require_string(ij, "name");
      i.address = ij.value("ip", "");
      if (ij.contains("prefix_len")) {
        i.mask = std::to_string(ij.at("prefix_len").get<int>());
      } else {
        i.mask = ij.value("mask", "");
      }
      if (ij.contains("network_id")) i.network_id = ij.at("network_id").get<int>();
      i.is_loopback = ij.value("is_loopback", false);
      d.interfaces.push_back(std::move(i));
    }
    for (const auto& rj : configs.at("L3").at("static_routes")) {
      StaticRoute r;
      r.destination = rj.value("destination", "");
      r.via = rj.value("via", "");
      if (rj.contains("resolved_next_hop")) {
        r.resolved_next_hop = validate_ipv4(rj.at("resolved_next_hop").get<std::string>());
      }
      d.static_routes.push_back(std::move(r));
    }
    topo.devices.push_back(std::move(d));
  }
  for (const auto& cj : j.at("connections")) {
    topo.connections.push_back(Connection{endpoint_from_json(cj.at("endpoint_a")),
                                          endpoint_from_json(cj.at("endpoint_b")),
                                          cj.at("network_id").get<int>()});
  }
  return topo;
}

std::string serialize_canonical(const TopologyDocument& topo) {
  return to_json(canonicalize(topo)).dump(2) + "\n";
}

}  // namespace t2n
