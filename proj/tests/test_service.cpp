// SPDX-License-Identifier: Apache-2.0
#include <thread>

#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include "process.hpp"
#include "support.hpp"
#include "t2n/service.hpp"

using namespace t2n;
using namespace t2n::test;
using json = nlohmann::json;

namespace {

struct Running {
  int port_ = 0;
  SessionStore store{OrchestratorConfig{}};
  Service service;
  httplib::Client client;

  explicit Running(ServiceConfig config = {}) : service(store, with_free_port(std::move(config))), client(url()) {
    client.set_read_timeout(10, 0);
  }

  static ServiceConfig with_free_port(ServiceConfig c) {
    c.port = 0;
    return c;
  }

  std::string url() {
    if (port_ == 0) {
      service.start();
      port_ = service.port();
    }
    return "http://127.0.0.1:" + std::to_string(port_);
  }

  std::string create() {
    auto res = client.Post("/api/sessions", R"({"backend":"sim"})", "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 201);
    return json::parse(res->body)["session_id"].get<std::string>();
  }

  httplib::Result message(const std::string& id, const json& body) {
    return client.Post("/api/sessions/" + id + "/message", body.dump(), "application/json");
  }

};

}  // namespace

TEST_CASE("session creation") {
  Running r;
  auto res = r.client.Post("/api/sessions", R"({"backend":"sim"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  CHECK(res->get_header_value("X-T2N-Schema") == "t2n-api/1");
  const auto j = json::parse(res->body);
  CHECK(j["phase"] == "AwaitingScenario");
  CHECK(j["welcome"] == fixture("welcome_banner.txt"));
  CHECK(j["step_count"] == 0);

  CHECK(r.create() != r.create());
  CHECK(r.client.Post("/api/sessions", "", "application/json")->status == 201);
  CHECK(r.client.Post("/api/sessions", "[1,2]", "application/json")->status == 400);
  CHECK(r.client.Post("/api/sessions", R"({"backend":"gns3"})", "application/json")->status == 400);
  const auto eve = r.client.Post("/api/sessions", R"({"backend":"eve"})", "application/json");
  CHECK(eve->status == 503);
  CHECK(json::parse(eve->body)["error"] == "BACKEND_UNAVAILABLE");
}

TEST_CASE("unknown sessions are 404") {
  Running r;
  CHECK(r.client.Get("/api/sessions/abcdef")->status == 404);
  CHECK(r.message("abcdef", {{"text", "x"}})->status == 404);
  CHECK(r.client.Get("/api/sessions/abcdef/topology")->status == 404);
  CHECK(r.client.Get("/api/sessions/abcdef/events?follow=0")->status == 404);
}

TEST_CASE("message flow with clarification, topology and queries") {
  Running r;
  const auto id = r.create();
  CHECK(r.client.Get("/api/sessions/" + id + "/topology")->status == 409);

  auto res = r.message(id, {{"text", scenario("story_vague")}});
  REQUIRE(res);
  CHECK(res->status == 200);
  auto j = json::parse(res->body);
  CHECK(j["event"] == "AskClarification");
  CHECK(j["missing_fields"].size() == 1);

  res = r.message(id, {{"text", scenario("story_vague_reply")}});
  j = json::parse(res->body);
  CHECK(j["event"] == "ProvisionDone");
  CHECK(topology_from_json(j["topology"]) == three_router_lab());

  const auto topo = r.client.Get("/api/sessions/" + id + "/topology");
  CHECK(topo->status == 200);
  CHECK(topo->body == serialize_canonical(three_router_lab()));

  const auto ping = r.client.Post("/api/sessions/" + id + "/query", R"({"command":"ping R-1 192.168.100.2"})",
                                  "application/json");
  CHECK(ping->status == 200);
  j = json::parse(ping->body);
  CHECK(j["event"] == "QueryResult");
  CHECK(j["forward_path"] == json::array({"R-1", "R-2", "R-3"}));

  // Without an explicit kind the phase decides: Provisioned means query.
  j = json::parse(r.message(id, {{"text", "show config R-2"}})->body);
  CHECK(j["event"] == "QueryResult");

  const auto session = json::parse(r.client.Get("/api/sessions/" + id)->body);
  CHECK(session["phase"] == "Provisioned");
  CHECK(session["step_count"] == 4);
  CHECK(session["transcript"].size() == 4);
}

TEST_CASE("illegal events are 409") {
  Running r;
  const auto id = r.create();
  auto res = r.message(id, {{"kind", "reply"}, {"text", "hello"}});
  CHECK(res->status == 409);
  CHECK(json::parse(res->body)["code"] == "ILLEGAL_EVENT");
  CHECK(r.client.Post("/api/sessions/" + id + "/query", R"({"command":"show topology"})", "application/json")
            ->status == 409);
  CHECK(r.message(id, {{"kind", "dance"}})->status == 400);
  CHECK(r.client.Post("/api/sessions/" + id + "/message", "not json", "application/json")->status == 400);
  CHECK(json::parse(r.client.Get("/api/sessions/" + id)->body)["step_count"] == 0);
}

TEST_CASE("invalid scenarios return the finding code") {
  Running r;
  const auto id = r.create();
  auto res = r.message(id, {{"text", scenario("invalid_ip")}});
  CHECK(res->status == 200);
  const auto j = json::parse(res->body);
  CHECK(j["event"] == "Error");
  CHECK(j["code"] == "IP_OCTET_RANGE");
}

TEST_CASE("reset through the message endpoint") {
  Running r;
  const auto id = r.create();
  r.message(id, {{"text", scenario("eval_s1")}});
  const auto j = json::parse(r.message(id, {{"kind", "reset"}})->body);
  CHECK(j["event"] == "Welcome");
  CHECK(json::parse(r.client.Get("/api/sessions/" + id)->body)["phase"] == "AwaitingScenario");
}

TEST_CASE("topology matches the command-line output") {
  Running r;
  for (const std::string name : {"story_a", "eval_s2", "eval_s3"}) {
    CAPTURE(name);
    const auto id = r.create();
    r.message(id, {{"text", scenario(name)}});
    const auto served = r.client.Get("/api/sessions/" + id + "/topology")->body;
    const auto cli = run_cli("batch --scenario " + fixture_dir() + "/scenarios/" + name + ".txt 2>/dev/null").out;
    CHECK(json::parse(served) == json::parse(cli));
    CHECK(served == cli);
  }
}

TEST_CASE("slow messages are answered with a poll token") {
  ServiceConfig c;
  c.message_timeout = std::chrono::milliseconds(0);
  Running r(c);
  const auto id = r.create();
  auto res = r.message(id, {{"text", scenario("eval_s3")}});
  json j = json::parse(res->body);
  if (res->status == 202) {
    const auto token = j["poll_token"].get<std::string>();
    CHECK(j["poll_url"] == "/api/sessions/" + id + "/pending/" + token);
    for (int k = 0; k < 200 && res->status == 202; ++k) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      res = r.client.Get("/api/sessions/" + id + "/pending/" + token);
    }
    REQUIRE(res->status == 200);
    j = json::parse(res->body);
    CHECK(r.client.Get("/api/sessions/" + id + "/pending/" + token)->status == 404);
  }
  CHECK(j["event"] == "ProvisionDone");
}

TEST_CASE("event stream") {
  Running r;
  const auto id = r.create();
  r.message(id, {{"text", scenario("eval_s1")}});
  r.message(id, {{"text", "show config R1"}});
  const auto res = r.client.Get("/api/sessions/" + id + "/events?follow=0");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type").starts_with("text/event-stream"));
  const auto& body = res->body;
  const auto welcome = body.find("event: Welcome");
  const auto done = body.find("event: ProvisionDone");
  const auto query = body.find("event: QueryResult");
  CHECK(welcome != std::string::npos);
  CHECK(done != std::string::npos);
  CHECK(query != std::string::npos);
  CHECK(welcome < done);
  CHECK(done < query);
  CHECK(body.find("id: 2\n") != std::string::npos);
}

TEST_CASE("followed event stream delivers later events") {
  Running r;
  const auto id = r.create();
  std::string received;
  std::thread reader([&] {
    httplib::Client c(r.url());
    c.Get("/api/sessions/" + id + "/events", [&](const char* data, std::size_t n) {
      received.append(data, n);
      return received.find("event: ProvisionDone") == std::string::npos;
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  r.message(id, {{"text", scenario("eval_s1")}});
  reader.join();
  CHECK(received.find("event: Welcome") != std::string::npos);
  CHECK(received.find("event: ProvisionDone") != std::string::npos);
}

TEST_CASE("CORS headers follow configuration") {
  {
    Running r;
    const auto res = r.client.Get("/api/sessions/abcdef");
    CHECK_FALSE(res->has_header("Access-Control-Allow-Origin"));
  }
  {
    ServiceConfig c;
    c.cors_origin = "http://localhost:5173";
    Running r(c);
    const auto res = r.client.Post("/api/sessions", "{}", "application/json");
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    const auto pre = r.client.Options("/api/sessions");
    CHECK(pre->status == 204);
    CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
  }
}
