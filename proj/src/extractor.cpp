// SPDX-License-Identifier: Apache-2.0
#include "t2n/extractor.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

#include "t2n/error.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

int NetworkIdAllocator::assign(const Endpoint& a, const Endpoint& b) {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto [it, inserted] = assigned_.try_emplace(std::move(key), counter_);
  if (inserted) ++counter_;
  return it->second;
}

std::string normalize_interface_name(std::string_view raw) {
  std::string squashed;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
  }
  const std::string folded = lower(squashed);

  // Longest spellings first so "gigabitethernet" is not read as "gi".
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kFamilies{{
      {"gigabitethernet", "GigabitEthernet"},
      {"fastethernet", "FastEthernet"},
      {"loopback", "Loopback"},
      {"gig", "GigabitEthernet"},
      {"gi", "GigabitEthernet"},
      {"fa", "FastEthernet"},
      {"lo", "Loopback"},
  }};
  for (const auto& [prefix, canonical] : kFamilies) {
    if (!folded.starts_with(prefix)) continue;
    std::string_view suffix = std::string_view(squashed).substr(prefix.size());
    const bool numeric = !suffix.empty() && std::isdigit(static_cast<unsigned char>(suffix.front())) &&
                         std::all_of(suffix.begin(), suffix.end(), [](unsigned char c) {
                           return std::isdigit(c) || c == '/' || c == '.' || c == ':';
                         });
    if (numeric) return std::string(canonical) + std::string(suffix);
  }
  throw Error(ErrorCode::UnrecognizedInterfaceFamily,
              "unrecognized interface name '" + std::string(raw) + "'");
}

StaticRoute resolve_static_route(const StaticRoute& route, const DeviceSpec& owner,
                                 const TopologyDocument& topo, std::vector<std::string>* warnings) {
  StaticRoute out = route;
  if (route.via.empty()) return out;

  if (route.via_is_address()) {
    const Ipv4 hop = validate_ipv4(route.via);
    for (const auto& iface : owner.interfaces) {
      auto net = iface.subnet();
      if (iface.is_loopback || !net) continue;
      if (net->contains(hop) && net->address != hop) {
        out.resolved_next_hop = hop;
        return out;
      }
    }
    throw Error(ErrorCode::NextHopNotConnected,
                owner.hostname + ": next hop " + route.via + " is not on a directly connected subnet");
  }

  const DeviceSpec* peer = topo.find_device(route.via);
  if (peer == nullptr || peer->hostname == owner.hostname) {
    throw Error(ErrorCode::NoSharedSubnet,
                owner.hostname + ": next-hop device '" + route.via + "' is not adjacent");
  }
  std::vector<std::pair<int, Ipv4>> candidates;
  for (const auto& c : topo.connections) {
    const Endpoint* mine = nullptr;
    const Endpoint* theirs = nullptr;
    if (c.endpoint_a.device == owner.hostname && c.endpoint_b.device == peer->hostname) {
      mine = &c.endpoint_a;
      theirs = &c.endpoint_b;
    } else if (c.endpoint_b.device == owner.hostname && c.endpoint_a.device == peer->hostname) {
      mine = &c.endpoint_b;
      theirs = &c.endpoint_a;
    }
    if (mine == nullptr) continue;
    const auto* iface = peer->find_interface(theirs->interface);
    if (iface == nullptr) continue;
    if (auto ip = iface->ipv4()) candidates.emplace_back(c.network_id, *ip);
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoSharedSubnet,
                owner.hostname + ": no subnet shared with next-hop device '" + route.via + "'");
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() > 1 && warnings != nullptr) {
    warnings->push_back(owner.hostname + ": AmbiguousNextHop via " + route.via + ", using network " +
                        std::to_string(candidates.front().first));
  }
  out.resolved_next_hop = candidates.front().second;
  return out;
}

namespace {

void unknown_line(const ExtractOptions& options, std::vector<std::string>& warnings,
                  const std::string& key, const std::string& line) {
  std::string message = key + ": unrecognized statement '" + line + "'";
  if (options.strict) throw Error(ErrorCode::UnknownLine, message);
  warnings.push_back(std::move(message));
}

std::string normalize_mask(const std::string& mask) {
  if (auto len = parse_prefix_or_mask(mask)) return std::to_string(*len);
  return mask;
}

DeviceSpec build_device(const ScsEntry& entry, const ExtractOptions& options,
                        std::vector<std::string>& warnings) {
  DeviceSpec device;
  std::string declared_name;
  bool typed = false;

  for (const auto& line : entry.lines) {
    auto statement = parse_statement(line);
    if (auto* t = std::get_if<TypeDecl>(&statement)) {
      device.node_type = parse_node_type(t->node_type);
      typed = true;
    } else if (auto* n = std::get_if<NameDecl>(&statement)) {
      declared_name = n->hostname;
    } else if (auto* i = std::get_if<InterfaceDecl>(&statement)) {
      InterfaceSpec iface;
      iface.name = normalize_interface_name(i->ifname);
      iface.address = i->address;
      iface.mask = normalize_mask(i->mask);
      iface.is_loopback = iface.name.starts_with("Loopback");
      if (device.find_interface(iface.name) != nullptr) {
        throw Error(ErrorCode::DuplicateInterface,
                    entry.key + ": interface " + iface.name + " declared twice");
      }
      device.interfaces.push_back(std::move(iface));
    } else if (auto* r = std::get_if<StaticRouteDecl>(&statement)) {
      device.static_routes.push_back(StaticRoute{r->destination, r->via, std::nullopt});
    } else {
      unknown_line(options, warnings, entry.key, line);
    }
  }

  device.hostname = declared_name.empty() ? entry.key : declared_name;
  if (!typed) {
    device.node_type_defaulted = true;
    warnings.push_back(device.hostname + ": no type declared, defaulting to router");
  }
  return device;
}

}  // namespace

ExtractionResult extract_topology(const ScsDocument& doc, const ExtractOptions& options) {
  ExtractionResult result;
  auto& topo = result.topology;
  std::unordered_map<std::string, std::string> hostname_of;  // SCS key -> hostname

  for (const auto& entry : doc.entries) {
    if (is_connection_key(entry.key)) continue;
    DeviceSpec device = build_device(entry, options, result.warnings);
    if (topo.find_device(device.hostname) != nullptr) {
      throw Error(ErrorCode::DuplicateHostname, "duplicate hostname " + device.hostname);
    }
    hostname_of[entry.key] = device.hostname;
    topo.devices.push_back(std::move(device));
  }

  NetworkIdAllocator allocator;
  std::set<std::pair<Endpoint, Endpoint>> seen;
  for (const auto& entry : doc.entries) {
    if (!is_connection_key(entry.key)) continue;
    const auto key_devices = split_key(entry.key);
    for (const auto& line : entry.lines) {
      auto statement = parse_statement(line);
      auto* con = std::get_if<ConnectionDecl>(&statement);
      if (con == nullptr) {
        unknown_line(options, result.warnings, entry.key, line);
        continue;
      }
      const std::set<std::string> named{con->device_a, con->device_b};
      const std::set<std::string> keyed(key_devices.begin(), key_devices.end());
      if (named != keyed) {
        throw Error(ErrorCode::DanglingConnection,
                    entry.key + ": connection endpoints do not match the key's devices");
      }
      auto resolve_endpoint = [&](const std::string& dev, const std::string& ifname) {
        auto host = hostname_of.find(dev);
        if (host == hostname_of.end()) {
          throw Error(ErrorCode::DanglingConnection, entry.key + ": device " + dev + " is never declared");
        }
        Endpoint ep{host->second, normalize_interface_name(ifname)};
        const auto* iface = topo.find_device(ep.device)->find_interface(ep.interface);
        if (iface == nullptr) {
          throw Error(ErrorCode::DanglingConnection,
                      entry.key + ": interface " + ep.device + "." + ep.interface + " is never declared");
        }
        if (iface->is_loopback) {
          throw Error(ErrorCode::DanglingConnection,
                      entry.key + ": loopback " + ep.device + "." + ep.interface + " cannot be linked");
        }
        return ep;
      };
      Endpoint a = resolve_endpoint(con->device_a, con->iface_a);
      Endpoint b = resolve_endpoint(con->device_b, con->iface_b);
      if (a == b) {
        throw Error(ErrorCode::DanglingConnection, entry.key + ": connection links an interface to itself");
      }
      if (b < a) std::swap(a, b);
      if (!seen.emplace(a, b).second) continue;

      const int id = allocator.assign(a, b);
      for (const auto* ep : {&a, &b}) {
        auto* iface = topo.find_device(ep->device)->find_interface(ep->interface);
        if (!iface->network_id) iface->network_id = id;
      }
      topo.connections.push_back(Connection{a, b, id});
    }
  }

  for (auto& device : topo.devices) {
    for (auto& route : device.static_routes) {
      try {
        route = resolve_static_route(route, device, topo, &result.warnings);
      } catch (const Error& e) {
        result.warnings.push_back(std::string(code_name(e.code())) + ": " + e.what());
      }
    }
  }
  return result;
}

}  // namespace t2n
