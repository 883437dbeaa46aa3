// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "t2n/extractor.hpp"
#include "t2n/llm_adapter.hpp"
#include "t2n/scs.hpp"
#include "t2n/topology.hpp"

namespace t2n::test {

inline std::string fixture_dir() { return T2N_FIXTURE_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture(const std::string& relative) { return read_file(fixture_dir() + "/" + relative); }
inline std::string scenario(const std::string& name) { return fixture("scenarios/" + name + ".txt"); }

/// Rules conversion that must yield SCS.
inline std::string rules_scs(const std::string& text) {
  auto result = rules_convert(text);
  if (!std::holds_alternative<std::string>(result)) throw std::runtime_error("expected SCS, got a clarification");
  return std::get<std::string>(result);
}

inline TopologyDocument topology_of(const std::string& scs_text) {
  return canonicalize(extract_topology(parse_scs(scs_text)).topology);
}

inline InterfaceSpec iface(std::string name, std::string address, std::string prefix, std::optional<int> net = {}) {
  InterfaceSpec i;
  i.name = std::move(name);
  i.address = std::move(address);
  i.mask = std::move(prefix);
  i.network_id = net;
  i.is_loopback = i.name.starts_with("Loopback");
  return i;
}

inline StaticRoute route(std::string destination, std::string via, std::optional<std::string> resolved = {}) {
  StaticRoute r;
  r.destination = std::move(destination);
  r.via = std::move(via);
  if (resolved) r.resolved_next_hop = validate_ipv4(*resolved);
  return r;
}

/// The three-router static-route lab, built by hand.
inline TopologyDocument three_router_lab() {
  TopologyDocument t;
  DeviceSpec r1{"R-1", NodeType::Router, false, {iface("GigabitEthernet0/0", "192.168.0.1", "24", 1)},
                {route("192.168.100.0/24", "R-2", "192.168.0.2")}};
  DeviceSpec r2{"R-2", NodeType::Router, false,
                {iface("GigabitEthernet0/0", "192.168.0.2", "24", 1), iface("GigabitEthernet0/1", "192.168.100.1", "24", 2)},
                {}};
  DeviceSpec r3{"R-3", NodeType::Router, false, {iface("GigabitEthernet0/0", "192.168.100.2", "24", 2)},
                {route("192.168.0.0/24", "R-2", "192.168.100.1")}};
  t.devices = {r1, r2, r3};
  t.connections = {Connection{{"R-1", "GigabitEthernet0/0"}, {"R-2", "GigabitEthernet0/0"}, 1},
                   Connection{{"R-2", "GigabitEthernet0/1"}, {"R-3", "GigabitEthernet0/0"}, 2}};
  return t;
}

}  // namespace t2n::test
