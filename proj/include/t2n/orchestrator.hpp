// SPDX-License-Identifier: Apache-2.0
//
// Conversational session flow: welcome, scenario, clarification rounds,
// provisioning into the simulator or EVE-NG, then interactive queries.
#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "t2n/eve.hpp"
#include "t2n/extractor.hpp"
#include "t2n/llm_adapter.hpp"
#include "t2n/netsim.hpp"
#include "t2n/scs.hpp"
#include "t2n/validator.hpp"

namespace t2n {

inline constexpr std::string_view kWelcomeBanner =
    "Welcome to Text2Net.\n"
    "Describe the network you want: devices, interfaces with addresses, links and static routes.\n"
    "After provisioning, try: ping <host> <address> | show config <host> | show topology\n";

enum class Phase { AwaitingScenario, AwaitingClarification, Provisioned, Failed };
enum class ProvisionBackend { Sim, Eve };

std::string_view to_string(Phase phase);
std::string_view to_string(ProvisionBackend backend);
/// Throws Error{InvalidConfig}.
ProvisionBackend parse_provision_backend(std::string_view text);

struct UserEvent {
  enum class Kind { SubmitScenario, Reply, Query, Reset };
  Kind kind = Kind::SubmitScenario;
  std::string text;

  static UserEvent submit(std::string text) { return {Kind::SubmitScenario, std::move(text)}; }
  static UserEvent reply(std::string text) { return {Kind::Reply, std::move(text)}; }
  static UserEvent query(std::string text) { return {Kind::Query, std::move(text)}; }
  static UserEvent reset() { return {Kind::Reset, {}}; }

  bool operator==(const UserEvent&) const = default;
};

struct SystemEvent {
  enum class Kind { Welcome, AskClarification, ProvisionDone, QueryResult, Error };
  Kind kind = Kind::Welcome;
  std::string text;
  std::string code;  // Error only: stable machine code, e.g. IP_OCTET_RANGE, ILLEGAL_EVENT
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const SystemEvent&) const = default;
};

std::string_view to_string(UserEvent::Kind kind);
std::string_view to_string(SystemEvent::Kind kind);

/// {"event": ..., "text": ..., "code"?: ..., payload members...}
nlohmann::json to_json(const SystemEvent& event);

struct TranscriptEntry {
  UserEvent user;
  SystemEvent system;
};

struct SessionState {
  std::string session_id;
  Phase phase = Phase::AwaitingScenario;
  ProvisionBackend backend = ProvisionBackend::Sim;
  std::vector<TranscriptEntry> transcript;
  AdapterExchange exchange;  // the dialog the adapter sees
  std::optional<ScsDocument> scs;
  std::optional<TopologyDocument> topology;  // canonical
  std::optional<ValidationReport> report;
  std::optional<ClarificationRequest> pending_clarification;
  std::optional<SimNetwork> sim;
  std::optional<EveSession> eve;
  std::optional<ProvisionReport> provision_report;
  int step_count = 0;
};

struct OrchestratorConfig {
  AdapterConfig adapter;
  ExtractOptions extract;
  EveConfig eve;
  TemplateTable templates = default_templates();
  std::string lab_name = "text2net";
};

/// What advance() needs besides the state. The adapter must outlive it.
struct OrchestratorContext {
  const Adapter& adapter;
  const OrchestratorConfig& config;
};

SessionState new_session(std::string session_id, ProvisionBackend backend = ProvisionBackend::Sim);
SystemEvent welcome_event();

/// One event in, exactly one event out. Events illegal for the phase yield an
/// ILLEGAL_EVENT error and leave the state untouched.
std::pair<SessionState, SystemEvent> advance(const OrchestratorContext& ctx, SessionState state,
                                             const UserEvent& event);

/// User events in the transcript, Reset excluded.
int count_steps(const std::vector<TranscriptEntry>& transcript);

nlohmann::json to_json(const std::vector<TranscriptEntry>& transcript);
/// Session resource as served over HTTP: no credentials, no adapter internals.
nlohmann::json to_json(const SessionState& state);

/// Error code carried by an ILLEGAL_EVENT error event.
inline constexpr std::string_view kIllegalEventCode = "ILLEGAL_EVENT";

/// Concurrent sessions with per-session serialized event processing.
class SessionStore {
 public:
  explicit SessionStore(OrchestratorConfig config, std::chrono::seconds idle_timeout = std::chrono::hours(1));

  /// Throws Error{InvalidConfig} when the adapter cannot be built.
  std::string create(ProvisionBackend backend);
  /// Throws Error{UnknownSession}.
  SystemEvent handle(const std::string& session_id, const UserEvent& event);
  /// Throws Error{UnknownSession}.
  SessionState snapshot(const std::string& session_id) const;
  /// Every system event of the session from index `from`, waiting up to
  /// `wait` for one to arrive. Throws Error{UnknownSession}.
  std::vector<nlohmann::json> events_since(const std::string& session_id, std::size_t from,
                                           std::chrono::milliseconds wait) const;
  std::size_t expire_idle();
  std::size_t size() const;

 private:
  struct Slot {
    mutable std::mutex mu;
    mutable std::condition_variable cv;
    SessionState state;
    std::vector<nlohmann::json> events;
    std::chrono::steady_clock::time_point last_used;
  };

  std::shared_ptr<Slot> find(const std::string& session_id) const;

  OrchestratorConfig config_;
  std::unique_ptr<Adapter> adapter_;
  std::chrono::seconds idle_timeout_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

}  // namespace t2n
