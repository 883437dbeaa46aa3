// SPDX-License-Identifier: Apache-2.0
#include "t2n/error.hpp"

namespace t2n {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::KeyArityError: return "KeyArityError";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::DanglingConnection: return "DanglingConnection";
    case ErrorCode::DuplicateHostname: return "DuplicateHostname";
    case ErrorCode::DuplicateInterface: return "DuplicateInterface";
    case ErrorCode::UnknownLine: return "UnknownLine";
    case ErrorCode::UnrecognizedInterfaceFamily: return "UnrecognizedInterfaceFamily";
    case ErrorCode::NonContiguousMask: return "NonContiguousMask";
    case ErrorCode::NoSharedSubnet: return "NoSharedSubnet";
    case ErrorCode::AmbiguousNextHop: return "AmbiguousNextHop";
    case ErrorCode::NextHopNotConnected: return "NextHopNotConnected";
    case ErrorCode::IpOctetRange: return "IP_OCTET_RANGE";
    case ErrorCode::IpMalformed: return "IP_MALFORMED";
    case ErrorCode::NotClarifiable: return "NotClarifiable";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::BackendTimeout: return "BackendTimeout";
    case ErrorCode::MalformedModelOutput: return "MalformedModelOutput";
    case ErrorCode::FixtureMiss: return "FixtureMiss";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::UnparsableSentence: return "UnparsableSentence";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnresolvedRoute: return "UnresolvedRoute";
    case ErrorCode::MultiAccessLinkUnsupported: return "MultiAccessLinkUnsupported";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::MissingTemplate: return "MissingTemplate";
    case ErrorCode::ApiError: return "ApiError";
    case ErrorCode::PlanAborted: return "PlanAborted";
    case ErrorCode::IllegalEvent: return "IllegalEvent";
    case ErrorCode::UnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

}  // namespace t2n
