// SPDX-License-Identifier: Apache-2.0
#include "t2n/netsim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "t2n/error.hpp"

namespace t2n {

const SimInterface* SimNode::find_interface(std::string_view name) const {
  auto it = std::find_if(interfaces.begin(), interfaces.end(),
                         [&](const SimInterface& i) { return i.name == name; });
  return it == interfaces.end() ? nullptr : &*it;
}

const SimInterface* SimNode::owner_of(Ipv4 address) const {
  auto it = std::find_if(interfaces.begin(), interfaces.end(),
                         [&](const SimInterface& i) { return i.up && i.address == address; });
  return it == interfaces.end() ? nullptr : &*it;
}

const SimNode* SimNetwork::find_node(std::string_view hostname) const {
  auto it = nodes_.find(std::string(hostname));
  return it == nodes_.end() ? nullptr : &it->second;
}

SimNode& SimNetwork::mutable_node(std::string_view hostname) {
  auto it = nodes_.find(std::string(hostname));
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownDevice, "unknown device " + std::string(hostname));
  return it->second;
}

std::size_t SimNetwork::remove_static_route(std::string_view hostname, const Ipv4Network& destination) {
  auto& rib = mutable_node(hostname).rib;
  const auto before = rib.size();
  std::erase_if(rib, [&](const RibEntry& e) {
    return e.origin == RouteOrigin::Static && e.destination == destination.network();
  });
  ++epoch_;
  return before - rib.size();
}

void SimNetwork::add_static_route(std::string_view hostname, const Ipv4Network& destination, Ipv4 next_hop) {
  auto& rib = mutable_node(hostname).rib;
  RibEntry entry{destination.network(), next_hop, RouteOrigin::Static, {}};
  if (std::find(rib.begin(), rib.end(), entry) == rib.end()) rib.push_back(std::move(entry));
  ++epoch_;
}

void SimNetwork::set_interface_state(std::string_view hostname, std::string_view interface, bool up) {
  auto& node = mutable_node(hostname);
  auto it = std::find_if(node.interfaces.begin(), node.interfaces.end(),
                         [&](const SimInterface& i) { return i.name == interface; });
  if (it == node.interfaces.end()) {
    throw Error(ErrorCode::UnknownDevice, "unknown interface " + std::string(hostname) + "." + std::string(interface));
  }
  it->up = up;
  ++epoch_;
}

SimNetwork instantiate(const TopologyDocument& topo) {
  SimNetwork net;
  std::set<std::pair<std::string, std::string>> linked;
  for (const auto& c : topo.connections) {
    for (const auto* ep : {&c.endpoint_a, &c.endpoint_b}) {
      if (!linked.emplace(ep->device, ep->interface).second) {
        throw Error(ErrorCode::MultiAccessLinkUnsupported,
                    ep->device + "." + ep->interface + " joins more than one link");
      }
      net.links_[c.network_id].push_back(LinkMember{ep->device, ep->interface});
    }
  }
  for (const auto& [id, members] : net.links_) {
    if (members.size() != 2) {
      throw Error(ErrorCode::MultiAccessLinkUnsupported,
                  "network " + std::to_string(id) + " has " + std::to_string(members.size()) + " members");
    }
  }

  for (const auto& d : topo.devices) {
    SimNode node;
    node.hostname = d.hostname;
    for (const auto& i : d.interfaces) {
      auto subnet = i.subnet();
      if (!subnet) {
        throw Error(ErrorCode::InvalidConfig, d.hostname + "." + i.name + " has no valid address");
      }
      node.interfaces.push_back(
          SimInterface{i.name, subnet->address, subnet->prefix_len, true, i.is_loopback, i.network_id});
    }
    std::sort(node.interfaces.begin(), node.interfaces.end(),
              [](const SimInterface& a, const SimInterface& b) { return a.name < b.name; });
    for (const auto& i : node.interfaces) {
      RibEntry connected{i.subnet(), std::nullopt, RouteOrigin::Connected, i.name};
      const bool present = std::any_of(node.rib.begin(), node.rib.end(), [&](const RibEntry& e) {
        return e.origin == RouteOrigin::Connected && e.destination == connected.destination;
      });
      if (!present) node.rib.push_back(std::move(connected));
    }
    for (const auto& r : d.static_routes) {
      auto dest = r.destination_network();
      if (!dest || !r.resolved_next_hop) {
        throw Error(ErrorCode::UnresolvedRoute,
                    d.hostname + ": static route '" + r.destination + "' via '" + r.via + "' is unresolved");
      }
      RibEntry entry{dest->network(), r.resolved_next_hop, RouteOrigin::Static, {}};
      if (std::find(node.rib.begin(), node.rib.end(), entry) == node.rib.end()) {
        node.rib.push_back(std::move(entry));
      }
    }
    net.nodes_.emplace(node.hostname, std::move(node));
  }
  net.epoch_ = 1;
  return net;
}

std::optional<RibEntry> longest_prefix_match(std::span<const RibEntry> rib, Ipv4 dst, const SimNode* node) {
  const RibEntry* best = nullptr;
  auto rank = [](const RibEntry& e) {
    return std::make_tuple(-e.destination.prefix_len, e.origin == RouteOrigin::Connected ? 0 : 1,
                           e.next_hop.value_or(Ipv4{0}).value);
  };
  for (const auto& entry : rib) {
    if (!entry.destination.contains(dst)) continue;
    if (node != nullptr && entry.origin == RouteOrigin::Connected) {
      const auto* iface = node->find_interface(entry.interface);
      if (iface != nullptr && !iface->up) continue;
    }
    if (best == nullptr || rank(entry) < rank(*best)) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::string_view to_string(PingFailure failure) {
  switch (failure) {
    case PingFailure::NoRouteForward: return "NoRouteForward";
    case PingFailure::NoRouteReverse: return "NoRouteReverse";
    case PingFailure::TtlExceeded: return "TtlExceeded";
    case PingFailure::DestinationUnknown: return "DestinationUnknown";
  }
  return "NoRouteForward";
}

namespace {

enum class WalkOutcome { Delivered, NoRoute, TtlExceeded };

struct Walk {
  WalkOutcome outcome = WalkOutcome::NoRoute;
  std::vector<std::string> path;
  const SimInterface* first_egress = nullptr;
};

struct Hop {
  const SimNode* peer = nullptr;
  const SimInterface* egress = nullptr;
};

// Next node for a packet leaving `node` toward on-link address `target`.
Hop step_toward(const SimNetwork& net, const SimNode& node, Ipv4 target) {
  for (const auto& iface : node.interfaces) {
    if (!iface.up || iface.is_loopback || !iface.network_id || !iface.subnet().contains(target)) continue;
    auto link = net.links().find(*iface.network_id);
    if (link == net.links().end()) continue;
    for (const auto& member : link->second) {
      if (member.hostname == node.hostname && member.interface == iface.name) continue;
      const auto* peer = net.find_node(member.hostname);
      const auto* peer_iface = peer ? peer->find_interface(member.interface) : nullptr;
      if (peer_iface != nullptr && peer_iface->up && peer_iface->address == target) return {peer, &iface};
    }
  }
  return {};
}

Walk forward(const SimNetwork& net, const SimNode& start, Ipv4 dst) {
  Walk walk;
  const SimNode* node = &start;
  walk.path.push_back(node->hostname);
  int ttl = kDefaultTtl;
  while (true) {
    if (node->owner_of(dst) != nullptr) {
      walk.outcome = WalkOutcome::Delivered;
      return walk;
    }
    if (ttl == 0) {
      walk.outcome = WalkOutcome::TtlExceeded;
      return walk;
    }
    auto route = longest_prefix_match(node->rib, dst, node);
    if (!route) return walk;
    const Ipv4 target = route->next_hop.value_or(dst);
    Hop hop = step_toward(net, *node, target);
    if (hop.peer == nullptr) return walk;
    if (walk.first_egress == nullptr) walk.first_egress = hop.egress;
    node = hop.peer;
    walk.path.push_back(node->hostname);
    --ttl;
  }
}

int loopback_number(const std::string& name) {
  int n = 0;
  std::string_view digits = std::string_view(name).substr(std::string_view("Loopback").size());
  std::from_chars(digits.data(), digits.data() + digits.size(), n);
  return n;
}

}  // namespace

PingResult ping(const SimNetwork& net, std::string_view src, Ipv4 dst,
                std::optional<std::string_view> source_interface) {
  const SimNode* origin = net.find_node(src);
  if (origin == nullptr) throw Error(ErrorCode::UnknownDevice, "unknown device " + std::string(src));

  PingResult result;
  result.epoch = net.epoch();

  std::optional<Ipv4> source;
  if (source_interface) {
    const auto* iface = origin->find_interface(*source_interface);
    if (iface == nullptr) {
      throw Error(ErrorCode::UnknownDevice,
                  "unknown interface " + std::string(src) + "." + std::string(*source_interface));
    }
    source = iface->address;
  } else {
    const SimInterface* best = nullptr;
    for (const auto& i : origin->interfaces) {
      if (i.is_loopback && i.up && (best == nullptr || loopback_number(i.name) < loopback_number(best->name))) {
        best = &i;
      }
    }
    if (best != nullptr) source = best->address;
  }

  const SimNode* target = nullptr;
  for (const auto& [name, node] : net.nodes()) {
    if (node.owner_of(dst) != nullptr) {
      target = &node;
      break;
    }
  }
  if (target == nullptr) {
    result.failure_reason = PingFailure::DestinationUnknown;
    return result;
  }

  Walk out = forward(net, *origin, dst);
  result.forward_path = out.path;
  if (out.outcome != WalkOutcome::Delivered) {
    result.failure_reason =
        out.outcome == WalkOutcome::TtlExceeded ? PingFailure::TtlExceeded : PingFailure::NoRouteForward;
    return result;
  }
  if (!source) source = out.first_egress != nullptr ? out.first_egress->address : dst;
  result.source_address = source;

  const SimNode* replier = net.find_node(out.path.back());
  Walk back = forward(net, *replier, *source);
  result.reverse_path = back.path;
  if (back.outcome != WalkOutcome::Delivered || back.path.back() != origin->hostname) {
    result.failure_reason =
        back.outcome == WalkOutcome::TtlExceeded ? PingFailure::TtlExceeded : PingFailure::NoRouteReverse;
    return result;
  }
  result.success = true;
  return result;
}

std::string show_config(const SimNetwork& net, std::string_view hostname) {
  const SimNode* node = net.find_node(hostname);
  if (node == nullptr) throw Error(ErrorCode::UnknownDevice, "unknown device " + std::string(hostname));

  std::ostringstream out;
  out << "hostname " << node->hostname << "\n!\n";
  for (const auto& i : node->interfaces) {
    out << "interface " << i.name << ' ' << to_string(i.address) << ' '
        << to_string(Ipv4Network{i.address, i.prefix_len}.mask()) << ' ' << (i.up ? "up" : "down") << '\n';
  }
  out << "!\n";
  std::vector<RibEntry> rib = node->rib;
  std::sort(rib.begin(), rib.end(), [](const RibEntry& a, const RibEntry& b) {
    return std::make_tuple(a.destination, a.origin, a.next_hop.value_or(Ipv4{0})) <
           std::make_tuple(b.destination, b.origin, b.next_hop.value_or(Ipv4{0}));
  });
  for (const auto& e : rib) {
    if (e.origin == RouteOrigin::Connected) {
      out << "C " << to_string(e.destination) << " is directly connected, " << e.interface << '\n';
    } else {
      out << "S " << to_string(e.destination) << " via " << to_string(*e.next_hop) << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

nlohmann::json to_json(const PingResult& result) {
  nlohmann::json j = {{"success", result.success},
                      {"forward_path", result.forward_path},
                      {"reverse_path", result.reverse_path},
                      {"epoch", result.epoch}};
  if (result.failure_reason) j["failure_reason"] = to_string(*result.failure_reason);
  if (result.source_address) j["source_address"] = to_string(*result.source_address);
  return j;
}

}  // namespace t2n
