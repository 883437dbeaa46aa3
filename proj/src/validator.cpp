// SPDX-License-Identifier: Apache-2.0
#include "t2n/validator.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "t2n/error.hpp"
#include "t2n/extractor.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

constexpr std::string_view kRoutePrompt =
    "Please provide additional details about the static route: specify the source, destination, "
    "and through devices.";
constexpr std::string_view kInterfacePrompt =
    "Please provide the IP address and subnet mask for each interface mentioned.";

constexpr std::array<FindingCode, 11> kRegistry{{
    {codes::kRouteDetailsMissing, Severity::MissingInfo,
     "static route without destination or next hop", kRoutePrompt},
    {codes::kInterfaceAddressMissing, Severity::MissingInfo,
     "interface without address or prefix", kInterfacePrompt},
    {codes::kIpOctetRange, Severity::Error, "address octet outside 0-255", {}},
    {codes::kIpMalformed, Severity::Error, "address is not a dotted quad", {}},
    {codes::kPrefixInvalid, Severity::Error, "prefix length or subnet mask invalid", {}},
    {codes::kDuplicateAddress, Severity::Error, "same address twice on one subnet", {}},
    {codes::kRouteViaUnresolved, Severity::Error, "next hop not reachable from the owning device", {}},
    {codes::kRouteDestHostBits, Severity::Error, "route destination has host bits set", {}},
    {codes::kLinkSubnetMismatch, Severity::Warning, "link endpoints on different subnets", {}},
    {codes::kRouteAmbiguousNextHop, Severity::Warning, "next-hop device shares several links", {}},
    {codes::kNodeTypeDefaulted, Severity::Warning, "no type declared, router assumed", {}},
}};

class FindingSink {
 public:
  void add(std::string_view code, std::string subject, std::string message, std::string field = {}) {
    const auto* info = find_code(code);
    findings_.push_back(Finding{info->severity, std::string(code), std::move(subject), std::move(message),
                                std::move(field)});
  }
  std::vector<Finding> take() { return std::move(findings_); }

 private:
  std::vector<Finding> findings_;
};

std::string iface_subject(const DeviceSpec& d, const InterfaceSpec& i) {
  return d.hostname + "/interfaces/" + i.name;
}

std::string route_subject(const DeviceSpec& d, std::size_t index) {
  return d.hostname + "/static_routes/" + std::to_string(index);
}

void check_address(FindingSink& sink, std::string_view text, const std::string& subject) {
  if (auto err = check_ipv4(text)) {
    const auto code = *err == ErrorCode::IpOctetRange ? codes::kIpOctetRange : codes::kIpMalformed;
    sink.add(code, subject, "invalid IPv4 address '" + std::string(text) + "'");
  }
}

}  // namespace

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error: return "Error";
    case Severity::MissingInfo: return "MissingInfo";
    case Severity::Warning: return "Warning";
  }
  return "Warning";
}

std::string_view to_string(ReportStatus status) {
  switch (status) {
    case ReportStatus::Valid: return "Valid";
    case ReportStatus::NeedsClarification: return "NeedsClarification";
    case ReportStatus::Invalid: return "Invalid";
  }
  return "Invalid";
}

std::span<const FindingCode> finding_registry() { return kRegistry; }

const FindingCode* find_code(std::string_view code) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(),
                         [&](const FindingCode& f) { return f.code == code; });
  return it == kRegistry.end() ? nullptr : &*it;
}

ValidationReport make_report(std::vector<Finding> findings) {
  ValidationReport report;
  const auto has = [&](Severity s) {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == s; });
  };
  if (has(Severity::Error)) {
    report.status = ReportStatus::Invalid;
  } else if (has(Severity::MissingInfo)) {
    report.status = ReportStatus::NeedsClarification;
  }
  report.findings = std::move(findings);
  return report;
}

ValidationReport validate_topology(const TopologyDocument& topo) {
  FindingSink sink;

  for (const auto& d : topo.devices) {
    if (d.node_type_defaulted) {
      sink.add(codes::kNodeTypeDefaulted, d.hostname, d.hostname + " has no type; treated as router");
    }
  }

  // Address syntax and octet ranges.
  for (const auto& d : topo.devices) {
    for (const auto& i : d.interfaces) {
      if (i.address.empty()) {
        sink.add(codes::kInterfaceAddressMissing, iface_subject(d, i),
                 i.name + " on " + d.hostname + " has no address", "address");
      } else {
        check_address(sink, i.address, iface_subject(d, i));
      }
    }
    for (std::size_t r = 0; r < d.static_routes.size(); ++r) {
      const auto& route = d.static_routes[r];
      if (!route.destination.empty()) {
        check_address(sink, route.destination.substr(0, route.destination.find('/')), route_subject(d, r));
      }
      if (route.via_is_address()) check_address(sink, route.via, route_subject(d, r));
    }
  }

  // Prefix / mask validity.
  for (const auto& d : topo.devices) {
    for (const auto& i : d.interfaces) {
      if (i.address.empty()) continue;
      if (i.mask.empty()) {
        sink.add(codes::kInterfaceAddressMissing, iface_subject(d, i),
                 i.name + " on " + d.hostname + " has no prefix length", "prefix_len");
      } else if (!i.prefix_len()) {
        sink.add(codes::kPrefixInvalid, iface_subject(d, i), "invalid prefix or mask '" + i.mask + "'");
      }
    }
    for (std::size_t r = 0; r < d.static_routes.size(); ++r) {
      const auto& dest = d.static_routes[r].destination;
      if (dest.empty()) continue;
      const auto slash = dest.find('/');
      if (check_ipv4(dest.substr(0, slash))) continue;  // reported above
      if (!d.static_routes[r].destination_network()) {
        sink.add(codes::kPrefixInvalid, route_subject(d, r), "invalid route destination '" + dest + "'");
      }
    }
  }

  // Duplicate addresses within one subnet.
  std::map<Ipv4Network, std::vector<std::string>> owners;
  for (const auto& d : topo.devices) {
    for (const auto& i : d.interfaces) {
      if (auto net = i.subnet()) owners[*net].push_back(iface_subject(d, i));
    }
  }
  for (const auto& [net, subjects] : owners) {
    if (subjects.size() < 2) continue;
    for (std::size_t k = 1; k < subjects.size(); ++k) {
      sink.add(codes::kDuplicateAddress, subjects[k],
               to_string(net) + " is also assigned to " + subjects.front());
    }
  }

  // Link endpoints on one subnet.
  for (const auto& c : topo.connections) {
    const auto* da = topo.find_device(c.endpoint_a.device);
    const auto* db = topo.find_device(c.endpoint_b.device);
    const auto* ia = da ? da->find_interface(c.endpoint_a.interface) : nullptr;
    const auto* ib = db ? db->find_interface(c.endpoint_b.interface) : nullptr;
    auto na = ia ? ia->subnet() : std::nullopt;
    auto nb = ib ? ib->subnet() : std::nullopt;
    if (!na || !nb) continue;
    const int shorter = std::min(na->prefix_len, nb->prefix_len);
    if (Ipv4Network{na->address, shorter}.network() != Ipv4Network{nb->address, shorter}.network()) {
      sink.add(codes::kLinkSubnetMismatch, "connections/" + std::to_string(c.network_id),
               c.endpoint_a.device + "." + c.endpoint_a.interface + " and " + c.endpoint_b.device + "." +
                   c.endpoint_b.interface + " are on different subnets");
    }
  }

  // Static routes: completeness, next-hop adjacency, destination host bits.
  for (const auto& d : topo.devices) {
    for (std::size_t r = 0; r < d.static_routes.size(); ++r) {
      const auto& route = d.static_routes[r];
      std::vector<std::string> missing;
      if (route.destination.empty()) missing.emplace_back("destination");
      if (route.via.empty()) missing.emplace_back("via");
      if (!missing.empty()) {
        sink.add(codes::kRouteDetailsMissing, route_subject(d, r),
                 "static route on " + d.hostname + " lacks " + join(missing, " and "), join(missing, ","));
      }
    }
    for (std::size_t r = 0; r < d.static_routes.size(); ++r) {
      const auto& route = d.static_routes[r];
      if (route.via.empty() || (route.via_is_address() && check_ipv4(route.via))) continue;
      std::vector<std::string> notes;
      try {
        auto resolved = resolve_static_route(route, d, topo, &notes);
        if (!notes.empty()) sink.add(codes::kRouteAmbiguousNextHop, route_subject(d, r), notes.front());
        if (route.resolved_next_hop && route.resolved_next_hop != resolved.resolved_next_hop) {
          sink.add(codes::kRouteViaUnresolved, route_subject(d, r),
                   "recorded next hop " + to_string(*route.resolved_next_hop) + " disagrees with " +
                       to_string(*resolved.resolved_next_hop));
        }
      } catch (const Error& e) {
        sink.add(codes::kRouteViaUnresolved, route_subject(d, r), e.what());
      }
    }
    for (std::size_t r = 0; r < d.static_routes.size(); ++r) {
      auto net = d.static_routes[r].destination_network();
      if (net && net->has_host_bits()) {
        sink.add(codes::kRouteDestHostBits, route_subject(d, r),
                 d.static_routes[r].destination + " has host bits set (network is " +
                     to_string(net->network()) + ")");
      }
    }
  }

  return make_report(sink.take());
}

ClarificationRequest make_clarification(const ValidationReport& report) {
  if (report.status != ReportStatus::NeedsClarification) {
    throw Error(ErrorCode::NotClarifiable,
                "clarification requires a NeedsClarification report, got " + std::string(to_string(report.status)));
  }
  ClarificationRequest request;
  std::set<std::string_view> categories;
  for (const auto& f : report.findings) {
    if (f.severity != Severity::MissingInfo) continue;
    request.missing_fields.push_back(MissingField{f.subject, f.field.empty() ? "details" : f.field});
    if (const auto* info = find_code(f.code)) categories.insert(info->prompt);
  }
  // Registry order keeps the prompt wording stable.
  std::vector<std::string> sentences;
  for (const auto& entry : kRegistry) {
    if (!entry.prompt.empty() && categories.count(entry.prompt) &&
        std::find(sentences.begin(), sentences.end(), entry.prompt) == sentences.end()) {
      sentences.emplace_back(entry.prompt);
    }
  }
  request.prompt = join(sentences, " ");
  return request;
}

nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : report.findings) {
    findings.push_back({{"severity", to_string(f.severity)},
                        {"code", f.code},
                        {"subject", f.subject},
                        {"message", f.message}});
  }
  return {{"status", to_string(report.status)}, {"findings", findings}};
}

nlohmann::json to_json(const ClarificationRequest& request) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& m : request.missing_fields) fields.push_back({{"subject", m.subject}, {"field", m.field}});
  return {{"prompt", request.prompt}, {"missing_fields", fields}};
}

}  // namespace t2n
