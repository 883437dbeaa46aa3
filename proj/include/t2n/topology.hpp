// SPDX-License-Identifier: Apache-2.0
//
// Structured topology document: devices with basic (hostname, interfaces)
// and L3 (static routes) configuration, plus point-to-point connections.
// Serialized as JSON, schema "t2n-topology/1" (see docs/topology-schema.md).
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "t2n/ipv4.hpp"

namespace t2n {

inline constexpr std::string_view kTopologySchema = "t2n-topology/1";

enum class NodeType { Router, Switch, Pc };

std::string_view to_string(NodeType type);
/// Throws Error{InvalidConfig} on anything but router/switch/pc.
NodeType parse_node_type(std::string_view text);

struct InterfaceSpec {
  std::string name;     // canonical, e.g. GigabitEthernet0/0
  std::string address;  // dotted quad as written; validated by the validator
  std::string mask;     // prefix length digits when valid, raw text otherwise
  std::optional<int> network_id;
  bool is_loopback = false;

  std::optional<Ipv4> ipv4() const noexcept;
  std::optional<int> prefix_len() const noexcept;
  /// Address and prefix when both are valid.
  std::optional<Ipv4Network> subnet() const noexcept;

  bool operator==(const InterfaceSpec&) const = default;
};

struct StaticRoute {
  std::string destination;  // "a.b.c.d/len"; empty when missing
  std::string via;          // next-hop address or device name; empty when missing
  std::optional<Ipv4> resolved_next_hop;

  bool via_is_address() const noexcept;
  std::optional<Ipv4Network> destination_network() const noexcept;

  bool operator==(const StaticRoute&) const = default;
};

struct DeviceSpec {
  std::string hostname;
  NodeType node_type = NodeType::Router;
  bool node_type_defaulted = false;
  std::vector<InterfaceSpec> interfaces;
  std::vector<StaticRoute> static_routes;

  const InterfaceSpec* find_interface(std::string_view name) const;
  InterfaceSpec* find_interface(std::string_view name);

  bool operator==(const DeviceSpec&) const = default;
};

struct Endpoint {
  std::string device;
  std::string interface;

  auto operator<=>(const Endpoint&) const = default;
};

struct Connection {
  Endpoint endpoint_a;
  Endpoint endpoint_b;
  int network_id = 0;

  bool operator==(const Connection&) const = default;
};

struct TopologyDocument {
  std::vector<DeviceSpec> devices;
  std::vector<Connection> connections;

  const DeviceSpec* find_device(std::string_view hostname) const;
  DeviceSpec* find_device(std::string_view hostname);

  bool operator==(const TopologyDocument&) const = default;
};

/// Sorts devices by hostname, interfaces by name, static routes by
/// destination and connections by
/// (endpoint_a, endpoint_b) with endpoint_a < endpoint_b, then renumbers
/// network ids 1..N in that order so equal topologies compare equal
/// regardless of statement order.
TopologyDocument canonicalize(TopologyDocument topo);

nlohmann::json to_json(const TopologyDocument& topo);
/// Throws Error{InvalidConfig} on schema violations.
TopologyDocument topology_from_json(const nlohmann::json& j);

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string serialize_canonical(const TopologyDocument& topo);

}  // namespace t2n
