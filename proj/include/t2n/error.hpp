// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace t2n {

enum class ErrorCode {
  // scs-core
  MalformedLine,
  KeyArityError,
  EmptyDocument,
  // extractor
  DanglingConnection,
  DuplicateHostname,
  DuplicateInterface,
  UnknownLine,
  UnrecognizedInterfaceFamily,
  NonContiguousMask,
  NoSharedSubnet,
  AmbiguousNextHop,
  NextHopNotConnected,
  // ipv4
  IpOctetRange,
  IpMalformed,
  // validator
  NotClarifiable,
  // llm-adapter
  BackendUnreachable,
  BackendTimeout,
  MalformedModelOutput,
  FixtureMiss,
  AuthFailure,
  UnparsableSentence,
  InvalidConfig,
  // netsim
  UnresolvedRoute,
  MultiAccessLinkUnsupported,
  UnknownDevice,
  // provisioner
  MissingTemplate,
  ApiError,
  PlanAborted,
  // orchestrator
  IllegalEvent,
  UnknownSession,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace t2n
