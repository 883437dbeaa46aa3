// SPDX-License-Identifier: Apache-2.0
//
// EVE-NG provisioning: plan the REST call sequence for a validated topology,
// execute it with session handling and retries, and read a lab back.
#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "t2n/error.hpp"
#include "t2n/topology.hpp"

namespace t2n {

inline constexpr std::string_view kEvePasswordEnv = "T2N_EVE_PASSWORD";

struct NodeTemplate {
  std::string template_name;
  std::string image;
  int cpu = 1;
  int ram_mb = 1024;
  int ethernets = 4;
  nlohmann::json extra = nlohmann::json::object();  // passed through on node creation
};

using TemplateTable = std::map<NodeType, NodeTemplate>;

/// router (vios) and switch (viosl2). No pc template ships by default.
TemplateTable default_templates();

enum class CallKind { Login, CreateLab, CreateNode, CreateNetwork, Link, Start, PushConfig };

std::string_view to_string(CallKind kind);

struct PlannedCall {
  CallKind kind = CallKind::Login;
  std::string device;     // CreateNode, Link, Start, PushConfig
  std::string interface;  // Link
  int network_id = 0;     // CreateNetwork, Link
  int ethernet_index = 0; // Link: position among the node's non-loopback interfaces

  /// "create_node R-1", "link R-1.GigabitEthernet0/0 net 1", ...
  std::string describe() const;
};

struct ProvisionPlan {
  std::string lab_name;
  TopologyDocument topology;  // canonical
  TemplateTable templates;
  std::vector<PlannedCall> calls;

  std::size_t count(CallKind kind) const;
};

/// Throws Error{MissingTemplate}.
ProvisionPlan plan(const TopologyDocument& topo, const TemplateTable& templates,
                   const std::string& lab_name = "text2net");

struct EveConfig {
  std::string base_url;
  std::string username = "admin";
  std::chrono::milliseconds timeout{10000};
  int max_retries = 2;
};

struct EveSession {
  std::string base_url;
  std::string session_cookie;
  std::string lab_path;
  std::map<std::string, int> node_id_map;  // hostname -> emulator node id
  std::map<int, int> net_id_map;           // network_id -> emulator network id
};

enum class CallStatus { Completed, Failed, Skipped };

std::string_view to_string(CallStatus status);

struct CallRecord {
  std::string call;  // PlannedCall::describe()
  CallKind kind = CallKind::Login;
  CallStatus status = CallStatus::Skipped;
  int http_status = 0;
  int attempts = 0;
  std::string detail;
};

struct ProvisionReport {
  bool success = false;
  std::string lab_path;
  std::vector<CallRecord> calls;
  int relogins = 0;

  std::size_t count(CallStatus status) const;
};

nlohmann::json to_json(const ProvisionReport& report);

/// Carries the partial report of an aborted plan.
class ProvisionError : public Error {
 public:
  ProvisionError(ErrorCode code, const std::string& message, ProvisionReport report)
      : Error(code, message), report_(std::move(report)) {}

  const ProvisionReport& report() const noexcept { return report_; }

 private:
  ProvisionReport report_;
};

/// Runs the plan in order. The password comes from T2N_EVE_PASSWORD.
/// Throws ProvisionError{AuthFailure | ApiError | PlanAborted}.
ProvisionReport execute(const ProvisionPlan& plan, EveSession& session, const EveConfig& config);

/// IOS-style configuration for one device. Throws Error{UnresolvedRoute}.
std::string render_device_config(const DeviceSpec& device);

/// Inverse of render_device_config, used when reading a lab back.
DeviceSpec parse_device_config(std::string_view text);

/// Rebuilds the topology of session.lab_path from node, network, interface
/// and config listings. Node types are recovered through `templates`.
TopologyDocument read_back(const EveSession& session, const EveConfig& config, const TemplateTable& templates);

}  // namespace t2n
