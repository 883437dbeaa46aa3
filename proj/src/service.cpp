// SPDX-License-Identifier: Apache-2.0
#include "t2n/service.hpp"

#include <future>
#include <map>
#include <random>
#include <thread>

#include <httplib.h>

#include "t2n/error.hpp"
#include "t2n/log.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

using json = nlohmann::json;
using Req = const httplib::Request&;
using Res = httplib::Response&;

void send(Res res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Res res, int status, std::string_view code, const std::string& message) {
  send(res, status, json{{"error", code}, {"message", message}});
}

std::optional<json> body_of(Req req, Res res) {
  auto body = json::parse(req.body.empty() ? std::string("{}") : req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    send_error(res, 400, "BAD_REQUEST", "request body must be a JSON object");
    return std::nullopt;
  }
  return body;
}

int status_for(const SystemEvent& event) {
  return event.kind == SystemEvent::Kind::Error && event.code == kIllegalEventCode ? 409 : 200;
}

UserEvent::Kind kind_for(Phase phase) {
  switch (phase) {
    case Phase::AwaitingClarification: return UserEvent::Kind::Reply;
    case Phase::Provisioned: return UserEvent::Kind::Query;
    default: return UserEvent::Kind::SubmitScenario;
  }
}

std::optional<UserEvent::Kind> parse_kind(std::string_view text) {
  const auto t = lower(text);
  if (t == "submit" || t == "scenario") return UserEvent::Kind::SubmitScenario;
  if (t == "reply") return UserEvent::Kind::Reply;
  if (t == "query") return UserEvent::Kind::Query;
  if (t == "reset") return UserEvent::Kind::Reset;
  return std::nullopt;
}

std::string random_token() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

struct Service::Impl {
  SessionStore& store;
  ServiceConfig config;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  std::mutex pending_mu;
  std::map<std::string, std::shared_future<SystemEvent>> pending;  // "session/token"

  Impl(SessionStore& s, ServiceConfig c) : store(s), config(std::move(c)) {}

  // Wraps a handler: unknown sessions become 404, other library errors 500.
  template <typename F>
  auto guarded(F f) {
    return [f](Req req, Res res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownSession) {
          send_error(res, 404, code_name(e.code()), e.what());
        } else {
          send_error(res, 500, code_name(e.code()), e.what());
        }
      }
    };
  }

  void respond_event(Res res, const SystemEvent& event) { send(res, status_for(event), to_json(event)); }

  void routes() {
    server.set_post_routing_handler([this](Req, Res res) {
      res.set_header(std::string(kApiSchemaHeader), std::string(kApiSchema));
      if (!config.cors_origin.empty()) {
        res.set_header("Access-Control-Allow-Origin", config.cors_origin);
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      }
    });
    server.Options(R"(/api/.*)", [](Req, Res res) { res.status = 204; });

    server.Post("/api/sessions", guarded([this](Req req, Res res) {
      auto body = body_of(req, res);
      if (!body) return;
      ProvisionBackend backend = ProvisionBackend::Sim;
      try {
        backend = parse_provision_backend(body->value("backend", std::string("sim")));
      } catch (const Error& e) {
        send_error(res, 400, "UNKNOWN_BACKEND", e.what());
        return;
      }
      if (backend == ProvisionBackend::Eve && !config.eve_available) {
        send_error(res, 503, "BACKEND_UNAVAILABLE", "no EVE-NG endpoint is configured");
        return;
      }
      const auto id = store.create(backend);
      auto resource = to_json(store.snapshot(id));
      resource["welcome"] = kWelcomeBanner;
      send(res, 201, resource);
    }));

    server.Get(R"(/api/sessions/([0-9a-f]+))", guarded([this](Req req, Res res) {
      send(res, 200, to_json(store.snapshot(req.matches[1])));
    }));

    server.Post(R"(/api/sessions/([0-9a-f]+)/message)", guarded([this](Req req, Res res) {
      const std::string id = req.matches[1];
      auto body = body_of(req, res);
      if (!body) return;
      const auto state = store.snapshot(id);
      auto kind = kind_for(state.phase);
      if (body->contains("kind")) {
        auto parsed = parse_kind(body->value("kind", std::string()));
        if (!parsed) {
          send_error(res, 400, "BAD_REQUEST", "kind must be submit, reply, query or reset");
          return;
        }
        kind = *parsed;
      }
      if (state.phase == Phase::Failed && kind != UserEvent::Kind::Reset) {
        send_error(res, 409, kIllegalEventCode, "session failed; reset it first");
        return;
      }
      UserEvent event{kind, body->value("text", std::string())};
      std::shared_future<SystemEvent> result =
          std::async(std::launch::async, [this, id, event] { return store.handle(id, event); }).share();
      if (result.wait_for(config.message_timeout) == std::future_status::ready) {
        respond_event(res, result.get());
        return;
      }
      const auto token = random_token();
      {
        std::lock_guard lock(pending_mu);
        pending[id + "/" + token] = result;
      }
      send(res, 202, json{{"status", "pending"}, {"poll_token", token},
                          {"poll_url", "/api/sessions/" + id + "/pending/" + token}});
    }));

    server.Get(R"(/api/sessions/([0-9a-f]+)/pending/([0-9a-f]+))", guarded([this](Req req, Res res) {
      const std::string key = std::string(req.matches[1]) + "/" + std::string(req.matches[2]);
      std::shared_future<SystemEvent> result;
      {
        std::lock_guard lock(pending_mu);
        auto it = pending.find(key);
        if (it == pending.end()) {
          send_error(res, 404, "UNKNOWN_TOKEN", "no pending request " + key);
          return;
        }
        result = it->second;
      }
      if (result.wait_for(std::chrono::milliseconds(0)) != std::future_status::ready) {
        send(res, 202, json{{"status", "pending"}, {"poll_token", std::string(req.matches[2])}});
        return;
      }
      {
        std::lock_guard lock(pending_mu);
        pending.erase(key);
      }
      respond_event(res, result.get());
    }));

    server.Get(R"(/api/sessions/([0-9a-f]+)/topology)", guarded([this](Req req, Res res) {
      const auto state = store.snapshot(req.matches[1]);
      if (state.phase != Phase::Provisioned || !state.topology) {
        send_error(res, 409, kIllegalEventCode, "no provisioned topology in phase " + std::string(to_string(state.phase)));
        return;
      }
      res.status = 200;
      res.set_content(serialize_canonical(*state.topology), "application/json");
    }));

    server.Post(R"(/api/sessions/([0-9a-f]+)/query)", guarded([this](Req req, Res res) {
      auto body = body_of(req, res);
      if (!body) return;
      respond_event(res, store.handle(req.matches[1], UserEvent::query(body->value("command", std::string()))));
    }));

    server.Get(R"(/api/sessions/([0-9a-f]+)/events)", guarded([this](Req req, Res res) {
      const std::string id = req.matches[1];
      store.snapshot(id);  // 404 before the stream starts
      const bool follow = req.get_param_value("follow") != "0";
      auto next = std::make_shared<std::size_t>(0);
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream", [this, id, follow, next](std::size_t, httplib::DataSink& sink) {
        std::vector<json> events;
        try {
          events = store.events_since(id, *next, std::chrono::milliseconds(follow ? 1000 : 0));
        } catch (const Error&) {
          sink.done();
          return true;
        }
        for (const auto& e : events) {
          const std::string frame = "id: " + std::to_string((*next)++) + "\nevent: " + e.value("event", "") +
                                    "\ndata: " + e.dump() + "\n\n";
          if (!sink.write(frame.data(), frame.size())) return false;
        }
        if (!follow) sink.done();
        return sink.is_writable();
      });
    }));

    if (!config.static_dir.empty() && !server.set_mount_point("/", config.static_dir)) {
      logger()->warn("static directory {} not found; serving the API only", config.static_dir);
    }
  }
};

Service::Service(SessionStore& store, ServiceConfig config) : impl_(std::make_unique<Impl>(store, std::move(config))) {
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind() {
  auto& s = impl_->server;
  if (impl_->config.port == 0) {
    impl_->port = s.bind_to_any_port(impl_->config.bind_address);
  } else {
    impl_->port = s.bind_to_port(impl_->config.bind_address, impl_->config.port) ? impl_->config.port : -1;
  }
  if (impl_->port <= 0) {
    throw Error(ErrorCode::InvalidConfig,
                "cannot bind " + impl_->config.bind_address + ":" + std::to_string(impl_->config.port));
  }
  return impl_->port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::start() {
  bind();
  impl_->thread = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const noexcept { return impl_->port; }

}  // namespace t2n
