// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "t2n/scs.hpp"
#include "t2n/topology.hpp"

namespace t2n {

struct ExtractOptions {
  /// Unknown lines fail extraction instead of becoming warnings.
  bool strict = false;
};

struct ExtractionResult {
  TopologyDocument topology;
  std::vector<std::string> warnings;
};

/// Hands out dense link ids. The same unordered endpoint pair always maps to
/// the same id; ids start at 1 and follow first-assignment order.
class NetworkIdAllocator {
 public:
  int assign(const Endpoint& a, const Endpoint& b);
  int size() const noexcept { return static_cast<int>(assigned_.size()); }

 private:
  int counter_ = 1;
  std::map<std::pair<Endpoint, Endpoint>, int> assigned_;
};

/// SCS document to topology. Device keys become DeviceSpecs, comma keys
/// become Connections; static routes are resolved where possible and left
/// unresolved (with a warning) otherwise, for the validator to report.
///
/// Throws Error{DanglingConnection | DuplicateHostname | DuplicateInterface |
/// UnknownLine (strict only) | UnrecognizedInterfaceFamily}.
ExtractionResult extract_topology(const ScsDocument& doc, const ExtractOptions& options = {});

/// "gi 0/0" -> "GigabitEthernet0/0", "Fast Ethernet 0/1" -> "FastEthernet0/1",
/// "loopback 1" -> "Loopback1". Throws Error{UnrecognizedInterfaceFamily}.
std::string normalize_interface_name(std::string_view raw);

/// Fills resolved_next_hop. A device-name via resolves to that device's
/// address on the link shared with `owner` (lowest network id wins when there
/// are several, with a note appended to `warnings`).
///
/// Throws Error{NoSharedSubnet | NextHopNotConnected}.
StaticRoute resolve_static_route(const StaticRoute& route, const DeviceSpec& owner,
                                 const TopologyDocument& topo,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace t2n
