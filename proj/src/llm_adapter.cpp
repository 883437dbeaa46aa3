// SPDX-License-Identifier: Apache-2.0
#include "t2n/llm_adapter.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "t2n/error.hpp"
#include "t2n/log.hpp"
#include "t2n/scs.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

constexpr std::string_view kSystemPrompt =
#include "system_prompt.inc"
    ;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Returns an error description, or empty when the text is acceptable SCS.
std::string scs_problem(std::string_view text) {
  try {
    const auto doc = parse_scs(text);
    for (const auto& entry : doc.entries) {
      for (const auto& line : entry.lines) {
        if (classify_line(line).kind == ScsLineKind::Unknown) {
          return "unrecognized statement '" + entry.key + ": " + line + "'";
        }
      }
    }
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct ParsedReply {
  std::optional<AdapterOutcome> outcome;
  std::string problem;
};

std::string strip_fences(std::string_view text) {
  std::string out;
  for (auto line : split(text, '\n')) {
    if (trim(line).starts_with("```")) continue;
    out += line;
    out += '\n';
  }
  return out;
}

ParsedReply interpret_reply(std::string_view raw) {
  std::string text = strip_fences(trim(raw));
  std::string body = std::string(trim(text));
  if (starts_with_icase(body, "REJECT:")) return {RejectOutcome{std::string(trim(body.substr(7)))}, {}};

  std::string acknowledgment;
  if (starts_with_icase(body, kAcknowledgment)) {
    const auto eol = body.find('\n');
    const std::string first = std::string(trim(body.substr(0, eol)));
    if (first.size() <= kAcknowledgment.size() + 1) {
      acknowledgment = std::string(kAcknowledgment);
      body = eol == std::string::npos ? std::string() : std::string(trim(body.substr(eol + 1)));
    }
  }
  if (!body.empty()) {
    auto problem = scs_problem(body);
    if (problem.empty()) return {ScsOutcome{body + "\n"}, {}};
    if (acknowledgment.empty() && body.find('?') != std::string::npos) {
      ClarifyOutcome clarify;
      clarify.question = body;
      clarify.request.prompt = body;
      return {std::move(clarify), {}};
    }
    return {std::nullopt, problem};
  }
  return {std::nullopt, "reply contains no SCS statements"};
}

struct UrlParts {
  std::string base;  // scheme://host[:port]
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::InvalidConfig, "endpoint_url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

std::string_view to_string(AdapterBackend backend) {
  switch (backend) {
    case AdapterBackend::Http: return "http";
    case AdapterBackend::Rules: return "rules";
    case AdapterBackend::Replay: return "replay";
  }
  return "rules";
}

AdapterBackend parse_adapter_backend(std::string_view text) {
  const auto t = lower(text);
  if (t == "http") return AdapterBackend::Http;
  if (t == "rules") return AdapterBackend::Rules;
  if (t == "replay") return AdapterBackend::Replay;
  throw Error(ErrorCode::InvalidConfig, "unknown adapter backend '" + std::string(text) + "'");
}

std::string_view default_system_prompt() { return kSystemPrompt; }

void AdapterConfig::validate() const {
  if (backend == AdapterBackend::Http && (!endpoint_url || endpoint_url->empty())) {
    throw Error(ErrorCode::InvalidConfig, "http adapter requires endpoint_url");
  }
  if (backend == AdapterBackend::Replay && (!fixture_path || fixture_path->empty())) {
    throw Error(ErrorCode::InvalidConfig, "replay adapter requires fixture_path");
  }
  if (max_retries < 0) throw Error(ErrorCode::InvalidConfig, "max_retries must be non-negative");
}

AdapterOutcome Adapter::generate(const AdapterExchange& exchange) const {
  auto outcome = do_generate(exchange);
  if (const auto* scs = std::get_if<ScsOutcome>(&outcome)) {
    if (auto problem = scs_problem(scs->scs_text); !problem.empty()) {
      throw Error(ErrorCode::MalformedModelOutput, "adapter produced invalid SCS: " + problem);
    }
  }
  return outcome;
}

std::string combined_user_text(const AdapterExchange& exchange) {
  std::string out = exchange.scenario_text;
  for (const auto& m : exchange.history) {
    if (m.role != Role::User) continue;
    out += '\n';
    out += m.text;
  }
  return out;
}

std::uint64_t replay_key(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : collapse_whitespace(text, true)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ReplayAdapter::ReplayAdapter(const std::string& fixture_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(fixture_dir)) throw Error(ErrorCode::InvalidConfig, "no fixture directory " + fixture_dir);
  for (const auto& entry : fs::directory_iterator(fixture_dir)) {
    if (entry.path().extension() != ".txt") continue;
    auto scs_path = entry.path();
    scs_path.replace_extension(".scs");
    auto clarify_path = entry.path();
    clarify_path.replace_extension(".clarify");
    AdapterOutcome outcome;
    if (fs::exists(scs_path)) {
      outcome = ScsOutcome{read_file(scs_path)};
    } else if (fs::exists(clarify_path)) {
      ClarifyOutcome clarify;
      clarify.question = std::string(trim(read_file(clarify_path)));
      clarify.request.prompt = clarify.question;
      outcome = std::move(clarify);
    } else {
      continue;
    }
    fixtures_[replay_key(read_file(entry.path()))] = std::move(outcome);
  }
}

AdapterOutcome ReplayAdapter::do_generate(const AdapterExchange& exchange) const {
  const auto it = fixtures_.find(replay_key(combined_user_text(exchange)));
  if (it == fixtures_.end()) throw Error(ErrorCode::FixtureMiss, "no replay fixture for this scenario");
  return it->second;
}

HttpAdapter::HttpAdapter(AdapterConfig config) : config_(std::move(config)) { config_.validate(); }

AdapterOutcome HttpAdapter::do_generate(const AdapterExchange& exchange) const {
  std::vector<ChatMessage> messages{{"system", config_.system_prompt}, {"user", exchange.scenario_text}};
  for (const auto& m : exchange.history) {
    messages.push_back({m.role == Role::User ? "user" : "assistant", m.text});
  }
  auto reply = http_complete(config_, messages);
  auto parsed = interpret_reply(reply);
  if (parsed.outcome) return std::move(*parsed.outcome);

  logger()->warn("model output did not parse as SCS ({}); asking for a corrected reply", parsed.problem);
  messages.push_back({"assistant", reply});
  messages.push_back({"user", "Your previous reply could not be parsed: " + parsed.problem +
                                  ". Reply again using only the SCS format."});
  reply = http_complete(config_, messages);
  parsed = interpret_reply(reply);
  if (parsed.outcome) return std::move(*parsed.outcome);
  throw Error(ErrorCode::MalformedModelOutput, "model output is not valid SCS: " + parsed.problem);
}

std::string http_complete(const AdapterConfig& config, const std::vector<ChatMessage>& messages) {
  config.validate();
  const auto endpoint = split_url(*config.endpoint_url);

  nlohmann::json body;
  body["model"] = config.model_name.value_or("gpt-4-turbo");
  body["temperature"] = 0;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Client client(endpoint.base);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  ErrorCode last = ErrorCode::BackendUnreachable;
  std::string last_detail;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = config.retry_base_delay * (1 << (attempt - 1));
      logger()->warn("retrying model request (attempt {} of {}) after {}: {}", attempt + 1, config.max_retries + 1,
                     code_name(last), last_detail);
      std::this_thread::sleep_for(delay);
    }
    auto res = client.Post(endpoint.path, headers, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last = (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) ? ErrorCode::BackendTimeout
                                                                                        : ErrorCode::BackendUnreachable;
      last_detail = httplib::to_string(err);
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::AuthFailure, "model endpoint rejected credentials (HTTP " +
                                              std::to_string(res->status) + ")");
    }
    if (res->status >= 500) {
      last = ErrorCode::BackendUnreachable;
      last_detail = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::BackendUnreachable, "model endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedModelOutput, std::string("unexpected completion payload: ") + e.what());
    }
  }
  throw Error(last, "model endpoint failed after " + std::to_string(config.max_retries + 1) +
                        " attempts: " + last_detail);
}

std::unique_ptr<Adapter> make_adapter(const AdapterConfig& config) {
  config.validate();
  switch (config.backend) {
    case AdapterBackend::Http: return std::make_unique<HttpAdapter>(config);
    case AdapterBackend::Replay: return std::make_unique<ReplayAdapter>(*config.fixture_path);
    case AdapterBackend::Rules: break;
  }
  return std::make_unique<RulesAdapter>();
}

AdapterOutcome generate_scs(const AdapterConfig& config, const AdapterExchange& exchange) {
  if (trim(exchange.scenario_text).empty()) return RejectOutcome{"empty scenario"};
  return make_adapter(config)->generate(exchange);
}

}  // namespace t2n
