// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "t2n/topology.hpp"

namespace t2n {

enum class Severity { Error, MissingInfo, Warning };
enum class ReportStatus { Valid, NeedsClarification, Invalid };

std::string_view to_string(Severity severity);
std::string_view to_string(ReportStatus status);

struct Finding {
  Severity severity = Severity::Warning;
  std::string code;     // one of the registry codes below
  std::string subject;  // "R-1", "R-1/interfaces/Gi0/0", "R-1/static_routes/0", "connections/1"
  std::string message;
  std::string field;    // MissingInfo only: the absent field(s), comma-separated

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  ReportStatus status = ReportStatus::Valid;
  std::vector<Finding> findings;
};

/// Derives status from findings: any Error -> Invalid, else any MissingInfo ->
/// NeedsClarification, else Valid.
ValidationReport make_report(std::vector<Finding> findings);

struct MissingField {
  std::string subject;
  std::string field;

  bool operator==(const MissingField&) const = default;
};

struct ClarificationRequest {
  std::string prompt;
  std::vector<MissingField> missing_fields;
};

namespace codes {
inline constexpr std::string_view kIpOctetRange = "IP_OCTET_RANGE";
inline constexpr std::string_view kIpMalformed = "IP_MALFORMED";
inline constexpr std::string_view kPrefixInvalid = "PREFIX_INVALID";
inline constexpr std::string_view kDuplicateAddress = "DUPLICATE_ADDRESS";
inline constexpr std::string_view kLinkSubnetMismatch = "LINK_SUBNET_MISMATCH";
inline constexpr std::string_view kInterfaceAddressMissing = "INTERFACE_ADDRESS_MISSING";
inline constexpr std::string_view kRouteDetailsMissing = "ROUTE_DETAILS_MISSING";
inline constexpr std::string_view kRouteViaUnresolved = "ROUTE_VIA_UNRESOLVED";
inline constexpr std::string_view kRouteDestHostBits = "ROUTE_DEST_HOST_BITS";
inline constexpr std::string_view kRouteAmbiguousNextHop = "ROUTE_AMBIGUOUS_NEXT_HOP";
inline constexpr std::string_view kNodeTypeDefaulted = "NODE_TYPE_DEFAULTED";
}  // namespace codes

struct FindingCode {
  std::string_view code;
  Severity severity;
  std::string_view description;
  /// Clarification sentence for MissingInfo codes; empty otherwise.
  std::string_view prompt;
};

/// The closed registry of finding codes, in clarification-prompt order.
std::span<const FindingCode> finding_registry();
const FindingCode* find_code(std::string_view code);

ValidationReport validate_topology(const TopologyDocument& topo);

/// Throws Error{NotClarifiable} unless report.status is NeedsClarification.
ClarificationRequest make_clarification(const ValidationReport& report);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const ClarificationRequest& request);

}  // namespace t2n
