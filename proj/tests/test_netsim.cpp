// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>

#include <doctest.h>

#include "support.hpp"
#include "t2n/error.hpp"
#include "t2n/netsim.hpp"

using namespace t2n;
using namespace t2n::test;

namespace {

SimNetwork sim_of(const std::string& scenario_name) { return instantiate(topology_of(rules_scs(scenario(scenario_name)))); }

Ipv4 ip(std::string_view s) { return validate_ipv4(s); }

RibEntry connected(std::string_view net, std::string ifname) {
  return RibEntry{parse_ipv4_network(net), std::nullopt, RouteOrigin::Connected, std::move(ifname)};
}

RibEntry via(std::string_view net, std::string_view next_hop) {
  return RibEntry{parse_ipv4_network(net), ip(next_hop), RouteOrigin::Static, {}};
}

}  // namespace

TEST_CASE("eval scenario 2 instantiates with the expected R1 table") {
  const auto net = sim_of("eval_s2");
  CHECK(net.nodes().size() == 2);
  CHECK(net.epoch() == 1);
  const auto& rib = net.find_node("R1")->rib;
  CHECK(rib.size() == 3);
  CHECK(std::count(rib.begin(), rib.end(), connected("192.168.0.0/24", "FastEthernet0/1")) == 1);
  CHECK(std::count(rib.begin(), rib.end(), connected("192.168.1.0/24", "Loopback1")) == 1);
  CHECK(std::count(rib.begin(), rib.end(), via("192.168.2.0/24", "192.168.0.2")) == 1);

  const auto best = longest_prefix_match(rib, ip("192.168.2.1"));
  REQUIRE(best.has_value());
  CHECK(*best == via("192.168.2.0/24", "192.168.0.2"));
}

TEST_CASE("empty topology gives an empty network") {
  const auto net = instantiate(TopologyDocument{});
  CHECK(net.nodes().empty());
  CHECK(net.links().empty());
}

TEST_CASE("longest prefix match tie breaks") {
  const std::vector<RibEntry> rib{via("10.0.0.0/8", "1.1.1.1"), connected("10.1.0.0/24", "Gi0/0"),
                                  via("10.1.0.0/16", "2.2.2.2"), via("10.1.0.0/24", "3.3.3.3"),
                                  via("10.2.0.0/16", "9.9.9.9"), via("10.2.0.0/16", "4.4.4.4")};
  CHECK(longest_prefix_match(rib, ip("10.1.0.7"))->origin == RouteOrigin::Connected);
  CHECK(*longest_prefix_match(rib, ip("10.1.5.1")) == via("10.1.0.0/16", "2.2.2.2"));
  CHECK(*longest_prefix_match(rib, ip("10.2.0.1")) == via("10.2.0.0/16", "4.4.4.4"));
  CHECK(*longest_prefix_match(rib, ip("10.200.0.1")) == via("10.0.0.0/8", "1.1.1.1"));
  CHECK_FALSE(longest_prefix_match(rib, ip("11.0.0.1")).has_value());
}

TEST_CASE("longest prefix match agrees with an exhaustive scan") {
  std::mt19937 rng(5);
  for (int round = 0; round < 300; ++round) {
    std::vector<RibEntry> rib;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < n; ++k) {
      const int len = static_cast<int>(rng() % 33);
      const Ipv4Network net = Ipv4Network{Ipv4{static_cast<std::uint32_t>(rng() & 0x0A0F0F0F)}, len}.network();
      if (rng() % 2) {
        rib.push_back(RibEntry{net, std::nullopt, RouteOrigin::Connected, "i" + std::to_string(k)});
      } else {
        rib.push_back(RibEntry{net, Ipv4{static_cast<std::uint32_t>(rng() % 4)}, RouteOrigin::Static, {}});
      }
    }
    const Ipv4 dst{static_cast<std::uint32_t>(rng() & 0x0A0F0F0F)};
    // Scan: keep every covering entry, then filter by each rule in turn.
    std::vector<RibEntry> cover;
    for (const auto& e : rib) {
      if (e.destination.contains(dst)) cover.push_back(e);
    }
    const auto got = longest_prefix_match(rib, dst);
    if (cover.empty()) {
      CHECK_FALSE(got.has_value());
      continue;
    }
    int longest = -1;
    for (const auto& e : cover) longest = std::max(longest, e.destination.prefix_len);
    std::erase_if(cover, [&](const RibEntry& e) { return e.destination.prefix_len != longest; });
    if (std::any_of(cover.begin(), cover.end(), [](const RibEntry& e) { return e.origin == RouteOrigin::Connected; })) {
      std::erase_if(cover, [](const RibEntry& e) { return e.origin != RouteOrigin::Connected; });
    }
    REQUIRE(got.has_value());
    CHECK(got->destination.prefix_len == longest);
    CHECK(got->origin == cover.front().origin);
    if (got->origin == RouteOrigin::Static) {
      std::uint32_t lowest = UINT32_MAX;
      for (const auto& e : cover) lowest = std::min(lowest, e.next_hop->value);
      CHECK(got->next_hop->value == lowest);
    }
  }
}

TEST_CASE("three-router lab pings end to end") {
  const auto net = instantiate(three_router_lab());
  const auto r = ping(net, "R-1", ip("192.168.100.2"));
  CHECK(r.success);
  CHECK(r.forward_path == std::vector<std::string>{"R-1", "R-2", "R-3"});
  CHECK(r.reverse_path == std::vector<std::string>{"R-3", "R-2", "R-1"});
  CHECK(to_string(*r.source_address) == "192.168.0.1");
  CHECK(r.epoch == net.epoch());
}

TEST_CASE("eval scenario 3: loopback to loopback over the transit router") {
  auto net = sim_of("eval_s3");
  const auto fwd = ping(net, "R1", ip("192.168.2.1"));
  CHECK(fwd.success);
  CHECK(fwd.forward_path == std::vector<std::string>{"R1", "R2", "R3"});
  CHECK(to_string(*fwd.source_address) == "192.168.1.1");
  CHECK(ping(net, "R3", ip("192.168.1.1")).success);

  net.remove_static_route("R3", parse_ipv4_network("192.168.1.0/24"));
  const auto broken = ping(net, "R1", ip("192.168.2.1"));
  CHECK_FALSE(broken.success);
  CHECK(broken.failure_reason == PingFailure::NoRouteReverse);
  CHECK(broken.epoch == 2);
}

TEST_CASE("a transit router without routes forwards only between its connected subnets") {
  // The topology exactly as the evaluation describes it: routes only on R1 and R3.
  auto topo = topology_of(rules_scs(scenario("eval_s3")));
  topo.find_device("R2")->static_routes.clear();
  const auto net = instantiate(topo);
  CHECK(ping(net, "R2", ip("192.168.4.2")).success);
  CHECK(ping(net, "R2", ip("192.168.0.1")).success);
  const auto r = ping(net, "R1", ip("192.168.2.1"));
  CHECK_FALSE(r.success);
  CHECK(r.failure_reason == PingFailure::NoRouteForward);
  CHECK(r.forward_path == std::vector<std::string>{"R1", "R2"});
}

TEST_CASE("self delivery and unknown destinations") {
  const auto net = sim_of("eval_s2");
  const auto self = ping(net, "R1", ip("192.168.1.1"));
  CHECK(self.success);
  CHECK(self.forward_path == std::vector<std::string>{"R1"});
  CHECK(ping(net, "R1", ip("10.9.9.9")).failure_reason == PingFailure::DestinationUnknown);
  CHECK_THROWS_AS(ping(net, "R9", ip("10.9.9.9")), Error);
}

TEST_CASE("routing loops end in TtlExceeded") {
  const auto topo = topology_of(
      "A: type router\nA: interface Gi0/0 ip 10.0.0.1/30\nA: static_route 172.16.0.0/24 via B\n"
      "B: type router\nB: interface Gi0/0 ip 10.0.0.2/30\nB: static_route 172.16.0.0/24 via A\n"
      "C: type router\nC: interface Lo0 ip 172.16.0.1/24\n"
      "A,B: A.Gi0/0 <-> B.Gi0/0\n");
  const auto r = ping(instantiate(topo), "A", ip("172.16.0.1"));
  CHECK_FALSE(r.success);
  CHECK(r.failure_reason == PingFailure::TtlExceeded);
  CHECK(r.forward_path.size() == static_cast<std::size_t>(kDefaultTtl) + 1);
}

TEST_CASE("interface state and epochs") {
  auto net = instantiate(three_router_lab());
  net.set_interface_state("R-2", "GigabitEthernet0/1", false);
  CHECK(net.epoch() == 2);
  const auto r = ping(net, "R-1", ip("192.168.100.2"));
  CHECK_FALSE(r.success);
  net.set_interface_state("R-2", "GigabitEthernet0/1", true);
  CHECK(ping(net, "R-1", ip("192.168.100.2")).success);
  net.add_static_route("R-1", parse_ipv4_network("10.0.0.0/8"), ip("192.168.0.2"));
  CHECK(net.epoch() == 4);
}

TEST_CASE("explicit source interface") {
  const auto net = sim_of("eval_s2");
  const auto r = ping(net, "R1", ip("192.168.2.1"), std::string_view("FastEthernet0/1"));
  CHECK(r.success);
  CHECK(to_string(*r.source_address) == "192.168.0.1");
  CHECK_THROWS_AS(ping(net, "R1", ip("192.168.2.1"), std::string_view("Gi9/9")), Error);
}

TEST_CASE("instantiation rejects what it cannot model") {
  auto multi = three_router_lab();
  multi.connections.push_back(Connection{{"R-1", "GigabitEthernet0/0"}, {"R-3", "GigabitEthernet0/0"}, 3});
  CHECK_THROWS_AS(instantiate(multi), Error);

  auto unresolved = three_router_lab();
  unresolved.devices[0].static_routes[0].resolved_next_hop.reset();
  try {
    instantiate(unresolved);
    FAIL("expected UnresolvedRoute");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnresolvedRoute);
  }
}

TEST_CASE("show_config output") {
  const auto s1 = sim_of("eval_s1");
  const auto text = show_config(s1, "R1");
  CHECK(text.find("hostname R1") != std::string::npos);
  CHECK(text.find("FastEthernet0/1 192.168.0.1 255.255.255.0") != std::string::npos);
  CHECK_THROWS_AS(show_config(s1, "R2"), Error);

  CHECK(show_config(sim_of("eval_s3"), "R2") == fixture("golden/eval_s3_R2.show_config"));
}

TEST_CASE("ping result JSON") {
  const auto j = to_json(ping(sim_of("eval_s2"), "R1", ip("192.168.2.1")));
  CHECK(j["success"] == true);
  CHECK(j["forward_path"] == nlohmann::json::array({"R1", "R2"}));
  CHECK(j["source_address"] == "192.168.1.1");
  CHECK_FALSE(j.contains("failure_reason"));
}
