// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "t2n/error.hpp"
#include "t2n/text_util.hpp"

using namespace t2n;
using namespace t2n::test;

namespace {

constexpr std::string_view kLabScs =
    "R-1: type router\n"
    "R-1: interface gi 0/0 ip 192.168.0.1 mask 255.255.255.0\n"
    "R-1: static_route 192.168.100.0/24 via R-2\n"
    "R-2: type router\n"
    "R-2: interface GigabitEthernet 0/0 ip 192.168.0.2/24\n"
    "R-2: interface Gig0/1 ip 192.168.100.1/24\n"
    "R-3: type router\n"
    "R-3: interface Gi0/0 ip 192.168.100.2/24\n"
    "R-3: static_route 192.168.0.0/24 via 192.168.100.1\n"
    "R-2,R-3: R-2.Gi0/1 <-> R-3.Gi0/0\n"
    "R-1,R-2: R-1.Gi0/0 <-> R-2.Gi0/0\n";

ErrorCode extract_error(std::string_view scs, ExtractOptions options = {}) {
  try {
    extract_topology(parse_scs(scs), options);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected extraction to fail");
  return ErrorCode::MalformedLine;
}

}  // namespace

TEST_CASE("three-router lab extracts to the fixture") {
  auto result = extract_topology(parse_scs(kLabScs));
  CHECK(result.warnings.empty());
  auto topo = canonicalize(result.topology);
  // The fixture names R-3's next hop by device; here it is an address.
  topo.find_device("R-3")->static_routes[0].via = "R-2";
  CHECK(serialize_canonical(topo) == fixture("topologies/three_router_lab.json"));
}

TEST_CASE("statement order does not change the canonical document") {
  std::vector<std::string> lines;
  for (auto l : split(kLabScs, '\n')) {
    if (!l.empty()) lines.emplace_back(l);
  }
  const auto reference = serialize_canonical(topology_of(std::string(kLabScs)));
  std::mt19937 rng(3);
  for (int round = 0; round < 100; ++round) {
    std::shuffle(lines.begin(), lines.end(), rng);
    CHECK(serialize_canonical(topology_of(join(lines, "\n"))) == reference);
  }
}

TEST_CASE("link ids are dense and keyed by the unordered endpoint pair") {
  NetworkIdAllocator ids;
  const Endpoint a{"R1", "Gi0/0"}, b{"R2", "Gi0/0"}, c{"R3", "Gi0/0"};
  CHECK(ids.assign(a, b) == 1);
  CHECK(ids.assign(b, a) == 1);
  CHECK(ids.assign(b, c) == 2);
  CHECK(ids.size() == 2);
}

TEST_CASE("interface names normalize") {
  CHECK(normalize_interface_name("gi 0/0") == "GigabitEthernet0/0");
  CHECK(normalize_interface_name("Gig0/1") == "GigabitEthernet0/1");
  CHECK(normalize_interface_name("gigabit ethernet 0/2") == "GigabitEthernet0/2");
  CHECK(normalize_interface_name("fa0/1") == "FastEthernet0/1");
  CHECK(normalize_interface_name("Fast Ethernet 0/1") == "FastEthernet0/1");
  CHECK(normalize_interface_name("loopback 1") == "Loopback1");
  CHECK(normalize_interface_name("Lo0") == "Loopback0");
  CHECK_THROWS_AS(normalize_interface_name("tunnel0"), Error);
  CHECK_THROWS_AS(normalize_interface_name("gi"), Error);
}

TEST_CASE("name lines override the key and type defaults to router") {
  const auto result = extract_topology(parse_scs("X1: name core-1\nX1: interface Gi0/0 ip 10.0.0.1/24\n"));
  REQUIRE(result.topology.devices.size() == 1);
  const auto& d = result.topology.devices[0];
  CHECK(d.hostname == "core-1");
  CHECK(d.node_type == NodeType::Router);
  CHECK(d.node_type_defaulted);
  CHECK(result.warnings.size() == 1);
}

TEST_CASE("unknown statements warn, or fail in strict mode") {
  const std::string scs = "R1: type router\nR1: enable ospf\n";
  const auto lenient = extract_topology(parse_scs(scs));
  CHECK(lenient.warnings.size() == 1);
  CHECK(extract_error(scs, ExtractOptions{true}) == ErrorCode::UnknownLine);
}

TEST_CASE("connection errors") {
  const std::string devices =
      "R1: type router\nR1: interface Gi0/0 ip 10.0.0.1/30\nR1: interface Lo0 ip 1.1.1.1/32\n"
      "R2: type router\nR2: interface Gi0/0 ip 10.0.0.2/30\n";
  CHECK(extract_error(devices + "R1,R3: R1.Gi0/0 <-> R3.Gi0/0\n") == ErrorCode::DanglingConnection);
  CHECK(extract_error(devices + "R1,R2: R1.Gi0/9 <-> R2.Gi0/0\n") == ErrorCode::DanglingConnection);
  CHECK(extract_error(devices + "R1,R2: R1.Gi0/0 <-> R1.Gi0/0\n") == ErrorCode::DanglingConnection);
  CHECK(extract_error(devices + "R1,R2: R1.Lo0 <-> R2.Gi0/0\n") == ErrorCode::DanglingConnection);
  CHECK(extract_error(devices + "R1,R2: R2.Gi0/0 <-> R3.Gi0/0\n") == ErrorCode::DanglingConnection);
  CHECK(extract_error(devices + "R1: interface Gi0/0 ip 10.0.0.5/30\n") == ErrorCode::DuplicateInterface);
  CHECK(extract_error("R1: name core\nR2: name core\n") == ErrorCode::DuplicateHostname);
  CHECK(extract_error("R1: interface tunnel0\n") == ErrorCode::UnrecognizedInterfaceFamily);

  // Repeating a link is harmless.
  const auto twice = extract_topology(
      parse_scs(devices + "R1,R2: R1.Gi0/0 <-> R2.Gi0/0\nR2,R1: R2.Gi0/0 <-> R1.Gi0/0\n"));
  CHECK(twice.topology.connections.size() == 1);
}

TEST_CASE("static route resolution") {
  auto topo = topology_of(std::string(kLabScs));
  const auto& r1 = *topo.find_device("R-1");

  const auto by_name = resolve_static_route(route("192.168.100.0/24", "R-2"), r1, topo);
  CHECK(to_string(*by_name.resolved_next_hop) == "192.168.0.2");
  const auto by_address = resolve_static_route(route("192.168.100.0/24", "192.168.0.2"), r1, topo);
  CHECK(to_string(*by_address.resolved_next_hop) == "192.168.0.2");

  auto code_of = [&](StaticRoute r) {
    try {
      resolve_static_route(r, r1, topo);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::MalformedLine;
  };
  CHECK(code_of(route("192.168.0.0/24", "R-3")) == ErrorCode::NoSharedSubnet);
  CHECK(code_of(route("192.168.0.0/24", "10.9.9.9")) == ErrorCode::NextHopNotConnected);
}

TEST_CASE("a via device sharing two links resolves over the lowest link id with a note") {
  const auto topo = topology_of(
      "A: type router\nA: interface Gi0/0 ip 10.0.1.1/24\nA: interface Gi0/1 ip 10.0.2.1/24\n"
      "B: type router\nB: interface Gi0/0 ip 10.0.1.2/24\nB: interface Gi0/1 ip 10.0.2.2/24\n"
      "A,B: A.Gi0/0 <-> B.Gi0/0\nA,B: A.Gi0/1 <-> B.Gi0/1\n");
  std::vector<std::string> notes;
  const auto r = resolve_static_route(route("172.16.0.0/16", "B"), *topo.find_device("A"), topo, &notes);
  CHECK(to_string(*r.resolved_next_hop) == "10.0.1.2");
  CHECK(notes.size() == 1);
}

TEST_CASE("unresolvable routes survive extraction with a warning") {
  const auto result = extract_topology(parse_scs("R1: type router\nR1: interface Gi0/0 ip 10.0.0.1/24\n"
                                                 "R1: static_route 172.16.0.0/16 via R9\n"
                                                 "R1: static_route via 10.0.0.2\n"));
  const auto& routes = result.topology.devices[0].static_routes;
  REQUIRE(routes.size() == 2);
  CHECK_FALSE(routes[0].resolved_next_hop.has_value());
  CHECK(routes[1].destination.empty());
  CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("invalid addresses are kept verbatim for the validator") {
  const auto topo = topology_of("R1: type router\nR1: interface Gi0/0 ip 192.168.0.300/24\n");
  CHECK(topo.devices[0].interfaces[0].address == "192.168.0.300");
}
