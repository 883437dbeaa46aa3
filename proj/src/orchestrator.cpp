// SPDX-License-Identifier: Apache-2.0
#include "t2n/orchestrator.hpp"

#include <random>

#include "t2n/error.hpp"
#include "t2n/log.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

using json = nlohmann::json;

bool legal(Phase phase, UserEvent::Kind kind) {
  switch (kind) {
    case UserEvent::Kind::SubmitScenario: return phase == Phase::AwaitingScenario;
    case UserEvent::Kind::Reply: return phase == Phase::AwaitingClarification;
    case UserEvent::Kind::Query: return phase == Phase::Provisioned;
    case UserEvent::Kind::Reset: return true;
  }
  return false;
}

SystemEvent error_event(std::string code, std::string text, json payload = json::object()) {
  return SystemEvent{SystemEvent::Kind::Error, std::move(text), std::move(code), std::move(payload)};
}

void clear_dialog(SessionState& s) {
  s.exchange = {};
  s.scs.reset();
  s.topology.reset();
  s.report.reset();
  s.pending_clarification.reset();
  s.sim.reset();
  s.eve.reset();
  s.provision_report.reset();
}

SystemEvent ask(SessionState& s, ClarifyOutcome clarify) {
  s.phase = Phase::AwaitingClarification;
  if (clarify.report) s.report = std::move(clarify.report);
  s.exchange.history.push_back(Message{Role::System, clarify.question});
  json payload = to_json(clarify.request);
  payload["prompt"] = clarify.question;
  s.pending_clarification = std::move(clarify.request);
  return SystemEvent{SystemEvent::Kind::AskClarification, clarify.question, {}, std::move(payload)};
}

std::string plural(std::size_t n, const std::string& word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

SystemEvent provision(const OrchestratorContext& ctx, SessionState& s, const std::vector<std::string>& warnings) {
  const auto& topo = *s.topology;
  std::string where;
  if (s.backend == ProvisionBackend::Sim) {
    s.sim = instantiate(topo);
    where = "in the simulator";
  } else {
    const auto p = plan(topo, ctx.config.templates, ctx.config.lab_name);
    EveSession session;
    try {
      s.provision_report = execute(p, session, ctx.config.eve);
    } catch (const ProvisionError& e) {
      s.provision_report = e.report();
      s.phase = Phase::Failed;
      return error_event(std::string(code_name(e.code())), e.what(), to_json(e.report()));
    }
    s.eve = std::move(session);
    where = "on EVE-NG lab " + s.eve->lab_path;
  }
  s.phase = Phase::Provisioned;
  s.pending_clarification.reset();

  std::string text = std::string(kAcknowledgment) + ". Provisioned " + plural(topo.devices.size(), "device") +
                     " and " + plural(topo.connections.size(), "link") + " " + where + ".";
  json payload{{"topology", to_json(topo)}, {"warnings", warnings}, {"report", to_json(*s.report)}};
  if (s.provision_report) payload["provision_report"] = to_json(*s.provision_report);
  return SystemEvent{SystemEvent::Kind::ProvisionDone, std::move(text), {}, std::move(payload)};
}

SystemEvent handle_outcome(const OrchestratorContext& ctx, SessionState& s, AdapterOutcome outcome) {
  if (auto* reject = std::get_if<RejectOutcome>(&outcome)) {
    clear_dialog(s);
    s.phase = Phase::AwaitingScenario;
    return error_event("REJECTED", reject->reason + ". Please refine the scenario description.");
  }
  if (auto* clarify = std::get_if<ClarifyOutcome>(&outcome)) return ask(s, std::move(*clarify));

  const auto& scs_text = std::get<ScsOutcome>(outcome).scs_text;
  s.scs = parse_scs(scs_text);
  auto extracted = extract_topology(*s.scs, ctx.config.extract);
  s.topology = canonicalize(std::move(extracted.topology));
  s.report = validate_topology(*s.topology);

  switch (s.report->status) {
    case ReportStatus::Invalid: {
      const auto first = std::find_if(s.report->findings.begin(), s.report->findings.end(),
                                      [](const Finding& f) { return f.severity == Severity::Error; });
      json payload{{"report", to_json(*s.report)}};
      std::string text = "The scenario is invalid: " + first->message + ". Please correct it and resubmit.";
      std::string code = first->code;
      clear_dialog(s);
      s.phase = Phase::AwaitingScenario;
      return error_event(std::move(code), std::move(text), std::move(payload));
    }
    case ReportStatus::NeedsClarification: {
      auto request = make_clarification(*s.report);
      return ask(s, ClarifyOutcome{request.prompt, request, s.report});
    }
    case ReportStatus::Valid: break;
  }
  return provision(ctx, s, extracted.warnings);
}

SystemEvent query(const SessionState& s, const std::string& command) {
  const auto words = split_ws(command);
  auto word = [&](std::size_t i) { return i < words.size() ? lower(words[i]) : std::string(); };

  if (word(0) == "ping" && words.size() == 3) {
    if (!s.sim) return error_event("QUERY_UNSUPPORTED", "ping is only available on the simulator backend");
    const auto dst = validate_ipv4(words[2]);
    const auto result = ping(*s.sim, words[1], dst);
    std::string text = "ping " + std::string(words[1]) + " " + to_string(dst) + ": ";
    if (result.success) {
      text += "success, path " + join(result.forward_path, " -> ");
    } else {
      text += "failed (" + std::string(to_string(*result.failure_reason)) + ")";
    }
    return SystemEvent{SystemEvent::Kind::QueryResult, std::move(text), {}, to_json(result)};
  }
  if (word(0) == "show" && word(1) == "config" && words.size() == 3) {
    std::string text;
    if (s.sim) {
      text = show_config(*s.sim, words[2]);
    } else {
      const auto* device = s.topology->find_device(words[2]);
      if (device == nullptr) throw Error(ErrorCode::UnknownDevice, "no device named " + std::string(words[2]));
      text = render_device_config(*device);
    }
    return SystemEvent{SystemEvent::Kind::QueryResult, text, {}, json{{"config", text}}};
  }
  if (word(0) == "show" && word(1) == "topology" && words.size() == 2) {
    return SystemEvent{SystemEvent::Kind::QueryResult, serialize_canonical(*s.topology), {},
                       json{{"topology", to_json(*s.topology)}}};
  }
  return error_event("UNKNOWN_QUERY",
                     "unknown command; use: ping <host> <address> | show config <host> | show topology");
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::AwaitingScenario: return "AwaitingScenario";
    case Phase::AwaitingClarification: return "AwaitingClarification";
    case Phase::Provisioned: return "Provisioned";
    case Phase::Failed: return "Failed";
  }
  return "AwaitingScenario";
}

std::string_view to_string(ProvisionBackend backend) {
  return backend == ProvisionBackend::Sim ? "sim" : "eve";
}

ProvisionBackend parse_provision_backend(std::string_view text) {
  const auto t = lower(text);
  if (t == "sim") return ProvisionBackend::Sim;
  if (t == "eve") return ProvisionBackend::Eve;
  throw Error(ErrorCode::InvalidConfig, "unknown backend '" + std::string(text) + "' (expected sim or eve)");
}

std::string_view to_string(UserEvent::Kind kind) {
  switch (kind) {
    case UserEvent::Kind::SubmitScenario: return "SubmitScenario";
    case UserEvent::Kind::Reply: return "Reply";
    case UserEvent::Kind::Query: return "Query";
    case UserEvent::Kind::Reset: return "Reset";
  }
  return "SubmitScenario";
}

std::string_view to_string(SystemEvent::Kind kind) {
  switch (kind) {
    case SystemEvent::Kind::Welcome: return "Welcome";
    case SystemEvent::Kind::AskClarification: return "AskClarification";
    case SystemEvent::Kind::ProvisionDone: return "ProvisionDone";
    case SystemEvent::Kind::QueryResult: return "QueryResult";
    case SystemEvent::Kind::Error: return "Error";
  }
  return "Error";
}

json to_json(const SystemEvent& event) {
  json out = event.payload.is_object() ? event.payload : json::object();
  out["event"] = to_string(event.kind);
  out["text"] = event.text;
  if (!event.code.empty()) out["code"] = event.code;
  return out;
}

SessionState new_session(std::string session_id, ProvisionBackend backend) {
  SessionState s;
  s.session_id = std::move(session_id);
  s.backend = backend;
  return s;
}

SystemEvent welcome_event() { return SystemEvent{SystemEvent::Kind::Welcome, std::string(kWelcomeBanner), {}, {}}; }

std::pair<SessionState, SystemEvent> advance(const OrchestratorContext& ctx, SessionState state,
                                             const UserEvent& event) {
  if (!legal(state.phase, event.kind)) {
    auto err = error_event(std::string(kIllegalEventCode), std::string(to_string(event.kind)) + " is not allowed while " +
                                                               std::string(to_string(state.phase)));
    return {std::move(state), std::move(err)};
  }

  SessionState next = state;
  SystemEvent reply;
  try {
    switch (event.kind) {
      case UserEvent::Kind::Reset:
        clear_dialog(next);
        next.phase = Phase::AwaitingScenario;
        reply = welcome_event();
        break;
      case UserEvent::Kind::SubmitScenario:
        if (trim(event.text).empty()) {
          reply = error_event("EMPTY_SCENARIO", "Please describe a network topology.");
          break;
        }
        next.exchange = AdapterExchange{event.text, {}};
        reply = handle_outcome(ctx, next, ctx.adapter.generate(next.exchange));
        break;
      case UserEvent::Kind::Reply:
        next.exchange.history.push_back(Message{Role::User, event.text});
        reply = handle_outcome(ctx, next, ctx.adapter.generate(next.exchange));
        break;
      case UserEvent::Kind::Query: reply = query(next, event.text); break;
    }
  } catch (const Error& e) {
    logger()->warn("session {}: {} failed: {}", state.session_id, to_string(event.kind), e.what());
    next = std::move(state);
    reply = error_event(std::string(code_name(e.code())), e.what());
  }

  if (event.kind != UserEvent::Kind::Reset) ++next.step_count;
  next.transcript.push_back(TranscriptEntry{event, reply});
  return {std::move(next), std::move(reply)};
}

int count_steps(const std::vector<TranscriptEntry>& transcript) {
  return static_cast<int>(std::count_if(transcript.begin(), transcript.end(), [](const TranscriptEntry& e) {
    return e.user.kind != UserEvent::Kind::Reset;
  }));
}

json to_json(const std::vector<TranscriptEntry>& transcript) {
  json out = json::array();
  for (const auto& e : transcript) {
    out.push_back({{"user", {{"kind", to_string(e.user.kind)}, {"text", e.user.text}}}, {"system", to_json(e.system)}});
  }
  return out;
}

json to_json(const SessionState& state) {
  json out{{"session_id", state.session_id},
           {"phase", to_string(state.phase)},
           {"backend", to_string(state.backend)},
           {"step_count", state.step_count},
           {"transcript", to_json(state.transcript)}};
  if (state.topology) out["topology"] = to_json(*state.topology);
  if (state.pending_clarification) out["pending_clarification"] = to_json(*state.pending_clarification);
  return out;
}

SessionStore::SessionStore(OrchestratorConfig config, std::chrono::seconds idle_timeout)
    : config_(std::move(config)), adapter_(make_adapter(config_.adapter)), idle_timeout_(idle_timeout) {}

std::string SessionStore::create(ProvisionBackend backend) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char id[33];
  std::snprintf(id, sizeof id, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));

  auto slot = std::make_shared<Slot>();
  slot->state = new_session(id, backend);
  slot->events.push_back(to_json(welcome_event()));
  slot->last_used = std::chrono::steady_clock::now();
  std::lock_guard lock(mu_);
  sessions_.emplace(id, std::move(slot));
  return id;
}

std::shared_ptr<SessionStore::Slot> SessionStore::find(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session " + session_id);
  return it->second;
}

SystemEvent SessionStore::handle(const std::string& session_id, const UserEvent& event) {
  auto slot = find(session_id);
  std::lock_guard lock(slot->mu);
  const OrchestratorContext ctx{*adapter_, config_};
  auto [state, reply] = advance(ctx, std::move(slot->state), event);
  slot->state = std::move(state);
  slot->last_used = std::chrono::steady_clock::now();
  slot->events.push_back(to_json(reply));
  slot->cv.notify_all();
  return reply;
}

SessionState SessionStore::snapshot(const std::string& session_id) const {
  auto slot = find(session_id);
  std::lock_guard lock(slot->mu);
  return slot->state;
}

std::vector<json> SessionStore::events_since(const std::string& session_id, std::size_t from,
                                             std::chrono::milliseconds wait) const {
  auto slot = find(session_id);
  std::unique_lock lock(slot->mu);
  slot->cv.wait_for(lock, wait, [&] { return slot->events.size() > from; });
  if (from >= slot->events.size()) return {};
  return {slot->events.begin() + static_cast<std::ptrdiff_t>(from), slot->events.end()};
}

std::size_t SessionStore::expire_idle() {
  const auto now = std::chrono::steady_clock::now();
  std::lock_guard lock(mu_);
  return std::erase_if(sessions_, [&](const auto& kv) {
    std::lock_guard slot_lock(kv.second->mu);
    return now - kv.second->last_used > idle_timeout_;
  });
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace t2n
