// SPDX-License-Identifier: Apache-2.0
#include "t2n/cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "t2n/error.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

using json = nlohmann::json;

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Session {
 public:
  explicit Session(const CliConfig& config)
      : config_(config), adapter_(make_adapter(config.orchestrator.adapter)),
        state_(new_session("cli", config.backend)) {}

  SystemEvent send(const UserEvent& event) {
    const OrchestratorContext ctx{*adapter_, config_.orchestrator};
    auto [state, reply] = advance(ctx, std::move(state_), event);
    state_ = std::move(state);
    return reply;
  }

  const SessionState& state() const { return state_; }

 private:
  const CliConfig& config_;
  std::unique_ptr<Adapter> adapter_;
  SessionState state_;
};

UserEvent event_for(Phase phase, std::string text) {
  switch (phase) {
    case Phase::AwaitingClarification: return UserEvent::reply(std::move(text));
    case Phase::Provisioned: return UserEvent::query(std::move(text));
    default: return UserEvent::submit(std::move(text));
  }
}

struct Expectation {
  std::string command;
  enum class Check { None, PingSuccess, PingFailure, Contains } check = Check::None;
  std::string needle;
};

std::vector<Expectation> parse_expectations(std::string_view text) {
  std::vector<Expectation> out;
  for (auto raw : split(text, '\n')) {
    auto line = std::string(trim(raw));
    if (line.empty() || line.front() == '#') continue;
    Expectation e;
    auto words = split_ws(line);
    if (lower(words[0]) != "expect") {
      e.command = line;
      out.push_back(std::move(e));
      continue;
    }
    if (words.size() == 5 && lower(words[1]) == "ping") {
      e.command = "ping " + std::string(words[2]) + " " + std::string(words[3]);
      const auto verdict = lower(words[4]);
      if (verdict != "success" && verdict != "failure") {
        throw Error(ErrorCode::InvalidConfig, "expectation must end in success or failure: " + line);
      }
      e.check = verdict == "success" ? Expectation::Check::PingSuccess : Expectation::Check::PingFailure;
    } else if (words.size() >= 6 && lower(words[1]) == "show" && lower(words[2]) == "config" &&
               lower(words[4]) == "contains") {
      e.command = "show config " + std::string(words[3]);
      e.needle = std::string(trim(line.substr(static_cast<std::size_t>(words[5].data() - line.data()))));
      e.check = Expectation::Check::Contains;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unrecognized expectation: " + line);
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool met(const Expectation& e, const SystemEvent& event) {
  if (event.kind != SystemEvent::Kind::QueryResult) return false;
  switch (e.check) {
    case Expectation::Check::None: return true;
    case Expectation::Check::PingSuccess: return event.payload.value("success", false);
    case Expectation::Check::PingFailure: return !event.payload.value("success", true);
    case Expectation::Check::Contains: return event.text.find(e.needle) != std::string::npos;
  }
  return false;
}

}  // namespace

int exit_code_for(std::string_view code) {
  static const std::set<std::string_view> kBackend{
      "BackendUnreachable", "BackendTimeout", "MalformedModelOutput", "FixtureMiss", "AuthFailure", "ApiError",
      "PlanAborted",        "MissingTemplate", "InvalidConfig",       "UnresolvedRoute", "MultiAccessLinkUnsupported"};
  return kBackend.count(code) ? kExitBackend : kExitInvalid;
}

int run_repl(const CliConfig& config, std::istream& in, std::ostream& out) {
  Session session(config);
  out << kWelcomeBanner << std::flush;
  std::string line;
  for (;;) {
    out << "\n" << (session.state().phase == Phase::AwaitingClarification ? "reply> " : "text2net> ") << std::flush;
    if (!std::getline(in, line)) break;
    const auto trimmed = std::string(trim(line));
    if (trimmed == "quit" || trimmed == "exit") break;
    if (trimmed.empty()) continue;
    const auto event = trimmed == "reset" ? UserEvent::reset() : event_for(session.state().phase, trimmed);
    const auto reply = session.send(event);
    out << reply.text;
    if (!reply.text.empty() && reply.text.back() != '\n') out << "\n";
    if (reply.kind == SystemEvent::Kind::Error) {
      const auto& c = reply.code;
      if (c == "BackendUnreachable" || c == "BackendTimeout" || c == "AuthFailure") return kExitBackend;
    }
  }
  return kExitOk;
}

int run_batch(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.scenario_file) {
    err << "batch mode requires --scenario\n";
    return kExitInvalid;
  }
  const auto scenario = read_text(*config.scenario_file);
  if (!scenario) {
    err << "cannot read " << *config.scenario_file << "\n";
    return kExitInvalid;
  }
  std::vector<Expectation> expectations;
  if (config.expect_file) {
    const auto text = read_text(*config.expect_file);
    if (!text) {
      err << "cannot read " << *config.expect_file << "\n";
      return kExitInvalid;
    }
    try {
      expectations = parse_expectations(*text);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitInvalid;
    }
  }

  std::unique_ptr<Session> session;
  try {
    session = std::make_unique<Session>(config);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitBackend;
  }

  auto reply = session->send(UserEvent::submit(*scenario));
  for (const auto& answer : config.replies) {
    if (reply.kind != SystemEvent::Kind::AskClarification) break;
    reply = session->send(UserEvent::reply(answer));
  }

  if (reply.kind == SystemEvent::Kind::AskClarification) {
    json clarification{{"prompt", reply.text},
                       {"missing_fields", reply.payload.value("missing_fields", json::array())}};
    out << clarification.dump(2) << "\n";
    return kExitClarify;
  }
  if (reply.kind == SystemEvent::Kind::Error) {
    out << to_json(reply).dump(2) << "\n";
    err << reply.text << "\n";
    return exit_code_for(reply.code);
  }

  const auto topology = serialize_canonical(*session->state().topology);
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary | std::ios::trunc);
    file << topology;
    if (!file) {
      err << "cannot write " << *config.output_path << "\n";
      return kExitBackend;
    }
  } else {
    out << topology;
  }

  bool all_met = true;
  json results = json::array();
  for (const auto& e : expectations) {
    const auto result = session->send(UserEvent::query(e.command));
    const bool ok = met(e, result);
    all_met = all_met && ok;
    results.push_back({{"command", e.command}, {"text", result.text}, {"met", ok}});
    err << (ok ? "PASS " : "FAIL ") << e.command << "\n";
  }
  if (!expectations.empty()) {
    json summary{{"step_count", session->state().step_count}, {"queries", results}};
    (config.output_path ? out : err) << summary.dump(2) << "\n";
  }
  return all_met ? kExitOk : kExitInvalid;
}

}  // namespace t2n
