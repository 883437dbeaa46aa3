// SPDX-License-Identifier: Apache-2.0
//
// Layer-3 simulator: connected + static routes, longest-prefix-match
// forwarding over point-to-point links, and ping as a pure reachability
// computation (no latency or loss).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "t2n/topology.hpp"

namespace t2n {

enum class RouteOrigin { Connected, Static };

struct RibEntry {
  Ipv4Network destination;       // always a network address
  std::optional<Ipv4> next_hop;  // empty for connected routes
  RouteOrigin origin = RouteOrigin::Connected;
  std::string interface;         // connected routes only

  bool operator==(const RibEntry&) const = default;
};

struct SimInterface {
  std::string name;
  Ipv4 address;
  int prefix_len = 0;
  bool up = true;
  bool is_loopback = false;
  std::optional<int> network_id;

  Ipv4Network subnet() const { return Ipv4Network{address, prefix_len}.network(); }
};

struct SimNode {
  std::string hostname;
  std::vector<SimInterface> interfaces;  // sorted by name
  std::vector<RibEntry> rib;

  const SimInterface* find_interface(std::string_view name) const;
  /// Interface holding `address`, if it is up.
  const SimInterface* owner_of(Ipv4 address) const;
};

struct LinkMember {
  std::string hostname;
  std::string interface;

  bool operator==(const LinkMember&) const = default;
};

class SimNetwork {
 public:
  const std::map<std::string, SimNode>& nodes() const noexcept { return nodes_; }
  const std::map<int, std::vector<LinkMember>>& links() const noexcept { return links_; }
  std::uint64_t epoch() const noexcept { return epoch_; }

  const SimNode* find_node(std::string_view hostname) const;

  /// Removes every static route to `destination` on `hostname`; returns the
  /// number removed.
  std::size_t remove_static_route(std::string_view hostname, const Ipv4Network& destination);
  void add_static_route(std::string_view hostname, const Ipv4Network& destination, Ipv4 next_hop);
  void set_interface_state(std::string_view hostname, std::string_view interface, bool up);

  friend SimNetwork instantiate(const TopologyDocument& topo);

 private:
  SimNode& mutable_node(std::string_view hostname);

  std::map<std::string, SimNode> nodes_;
  std::map<int, std::vector<LinkMember>> links_;
  std::uint64_t epoch_ = 0;
};

/// Throws Error{UnresolvedRoute | MultiAccessLinkUnsupported | InvalidConfig}.
SimNetwork instantiate(const TopologyDocument& topo);

/// Maximal prefix covering `dst`; ties prefer connected over static, then the
/// lowest next hop. Connected routes on down interfaces are skipped when
/// `node` is given.
std::optional<RibEntry> longest_prefix_match(std::span<const RibEntry> rib, Ipv4 dst,
                                             const SimNode* node = nullptr);

enum class PingFailure { NoRouteForward, NoRouteReverse, TtlExceeded, DestinationUnknown };

std::string_view to_string(PingFailure failure);

struct PingResult {
  bool success = false;
  std::vector<std::string> forward_path;
  std::vector<std::string> reverse_path;
  std::optional<PingFailure> failure_reason;
  std::optional<Ipv4> source_address;
  std::uint64_t epoch = 0;
};

inline constexpr int kDefaultTtl = 64;

/// Echo request from `src` to `dst`, then echo reply back to the probe's
/// source address. The source address is taken from `source_interface` when
/// given, else the node's lowest-numbered loopback, else the egress interface.
/// Throws Error{UnknownDevice} when `src` does not exist.
PingResult ping(const SimNetwork& net, std::string_view src, Ipv4 dst,
                std::optional<std::string_view> source_interface = std::nullopt);

/// Stable text rendering of one node: hostname, interfaces, routing table.
/// Throws Error{UnknownDevice}.
std::string show_config(const SimNetwork& net, std::string_view hostname);

nlohmann::json to_json(const PingResult& result);

}  // namespace t2n
