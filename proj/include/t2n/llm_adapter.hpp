// SPDX-License-Identifier: Apache-2.0
//
// The "instructed model" boundary: scenario prose plus dialog history in,
// SCS text / a clarification question / a rejection out. Three backends:
//   rules  - deterministic constrained-English converter, offline
//   replay - recorded responses keyed by normalized scenario text, offline
//   http   - OpenAI-compatible chat-completion endpoint
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "t2n/validator.hpp"

namespace t2n {

inline constexpr std::string_view kAcknowledgment = "Understood";
inline constexpr std::string_view kApiKeyEnv = "T2N_LLM_API_KEY";

enum class Role { User, System };

struct Message {
  Role role = Role::User;
  std::string text;

  bool operator==(const Message&) const = default;
};

struct ScsOutcome {
  std::string scs_text;
  std::string acknowledgment{kAcknowledgment};

  bool operator==(const ScsOutcome&) const = default;
};

struct ClarifyOutcome {
  std::string question;  // verbatim from the backend
  ClarificationRequest request;
  std::optional<ValidationReport> report;  // set when the question comes from validation findings
};

struct RejectOutcome {
  std::string reason;

  bool operator==(const RejectOutcome&) const = default;
};

using AdapterOutcome = std::variant<ScsOutcome, ClarifyOutcome, RejectOutcome>;

struct AdapterExchange {
  std::string scenario_text;
  std::vector<Message> history;  // replies after the initial scenario, append-only
};

enum class AdapterBackend { Http, Rules, Replay };

std::string_view to_string(AdapterBackend backend);
/// Throws Error{InvalidConfig}.
AdapterBackend parse_adapter_backend(std::string_view text);

/// The shipped instruction prompt (data/system_prompt.txt).
std::string_view default_system_prompt();

struct AdapterConfig {
  AdapterBackend backend = AdapterBackend::Rules;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> model_name;
  std::string system_prompt{default_system_prompt()};
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::chrono::milliseconds retry_base_delay{250};
  std::optional<std::string> fixture_path;

  /// Throws Error{InvalidConfig}: http needs endpoint_url, replay needs fixture_path.
  void validate() const;
};

class Adapter {
 public:
  virtual ~Adapter() = default;

  /// Exactly one outcome. Scs outcomes are self-checked: they parse as SCS
  /// with no unrecognized statements, else Error{MalformedModelOutput}.
  AdapterOutcome generate(const AdapterExchange& exchange) const;

 protected:
  virtual AdapterOutcome do_generate(const AdapterExchange& exchange) const = 0;
};

class RulesAdapter final : public Adapter {
 protected:
  AdapterOutcome do_generate(const AdapterExchange& exchange) const override;
};

class ReplayAdapter final : public Adapter {
 public:
  /// Loads every NAME.txt in `fixture_dir` with its NAME.scs or NAME.clarify.
  explicit ReplayAdapter(const std::string& fixture_dir);

  std::size_t size() const noexcept { return fixtures_.size(); }

 protected:
  AdapterOutcome do_generate(const AdapterExchange& exchange) const override;

 private:
  std::unordered_map<std::uint64_t, AdapterOutcome> fixtures_;
};

class HttpAdapter final : public Adapter {
 public:
  explicit HttpAdapter(AdapterConfig config);

 protected:
  AdapterOutcome do_generate(const AdapterExchange& exchange) const override;

 private:
  AdapterConfig config_;
};

std::unique_ptr<Adapter> make_adapter(const AdapterConfig& config);

/// One-shot convenience over make_adapter(config)->generate(exchange).
AdapterOutcome generate_scs(const AdapterConfig& config, const AdapterExchange& exchange);

/// Scenario text followed by every user reply, newline separated. This is
/// what the offline backends convert and what replay fixtures are keyed on.
std::string combined_user_text(const AdapterExchange& exchange);

/// Lowercased, whitespace-collapsed, FNV-1a 64.
std::uint64_t replay_key(std::string_view text);

/// Either SCS text or a clarification. Throws Error{UnparsableSentence} with
/// the 1-based sentence index in the message.
using RulesResult = std::variant<std::string, ClarifyOutcome>;
RulesResult rules_convert(std::string_view text);

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
};

/// POSTs an OpenAI-style chat completion and returns the assistant text.
/// Retries 5xx and timeouts with exponential backoff up to max_retries.
/// Throws Error{BackendUnreachable | BackendTimeout | AuthFailure}.
std::string http_complete(const AdapterConfig& config, const std::vector<ChatMessage>& messages);

}  // namespace t2n
