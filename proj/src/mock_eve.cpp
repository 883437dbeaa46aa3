// SPDX-License-Identifier: Apache-2.0
#include "t2n/mock_eve.hpp"

#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace t2n {

namespace {

using json = nlohmann::json;

struct MockNode {
  json attributes;
  std::map<int, int> links;  // ethernet index -> network id
  bool started = false;
  std::string config;
};

struct MockLab {
  json attributes;
  std::map<int, MockNode> nodes;
  std::map<int, json> networks;
};

void reply(httplib::Response& res, int status, json body) {
  body["code"] = status;
  if (!body.contains("status")) body["status"] = status < 400 ? "success" : "fail";
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct MockEveServer::Impl {
  std::string username;
  std::string password;
  MockEveFaults faults;

  httplib::Server server;
  std::thread thread;
  int port = 0;

  mutable std::mutex mu;
  std::vector<RecordedCall> calls;
  std::vector<std::string> bodies;
  std::map<std::string, MockLab> labs;
  std::vector<std::string> tokens;
  int token_counter = 0;
  int authenticated_calls = 0;
  int create_node_calls = 0;
  int login_calls = 0;

  void record(const std::string& kind, const httplib::Request& req, const httplib::Response& res) {
    calls.push_back(RecordedCall{kind, req.method, req.path, res.status});
  }

  bool authorized(const httplib::Request& req, httplib::Response& res) {
    const auto cookie = req.get_header_value("Cookie");
    const std::string prefix = "unetlab_session=";
    const auto pos = cookie.find(prefix);
    const std::string token = pos == std::string::npos ? std::string() : cookie.substr(pos + prefix.size());
    if (std::find(tokens.begin(), tokens.end(), token) == tokens.end() || token.empty()) {
      reply(res, 401, {{"message", "Unauthorized: user is not logged in"}});
      return false;
    }
    ++authenticated_calls;
    if (authenticated_calls == faults.expire_session_at_call) {
      tokens.clear();
      reply(res, 401, {{"message", "Session timed out"}});
      return false;
    }
    return true;
  }

  MockLab* lab(const httplib::Request& req, httplib::Response& res) {
    auto it = labs.find(req.matches[1]);
    if (it == labs.end()) {
      reply(res, 404, {{"message", "Lab does not exist"}});
      return nullptr;
    }
    return &it->second;
  }

  MockNode* node(MockLab& l, const httplib::Request& req, httplib::Response& res) {
    auto it = l.nodes.find(std::stoi(req.matches[2]));
    if (it == l.nodes.end()) {
      reply(res, 404, {{"message", "Node does not exist"}});
      return nullptr;
    }
    return &it->second;
  }

  void routes() {
    using Req = const httplib::Request&;
    using Res = httplib::Response&;

    server.Post("/api/auth/login", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      ++login_calls;
      const auto body = json::parse(req.body, nullptr, false);
      if (login_calls <= faults.server_errors_before_login) {
        reply(res, 503, {{"message", "Service unavailable"}});
      } else if (body.is_discarded() || body.value("username", "") != username ||
                 body.value("password", "") != password) {
        reply(res, 400, {{"message", "Authentication failed"}});
        res.status = 401;
      } else {
        const auto token = "mock-" + std::to_string(++token_counter);
        tokens.push_back(token);
        res.set_header("Set-Cookie", "unetlab_session=" + token + "; path=/");
        reply(res, 200, {{"message", "User logged in"}});
      }
      record("login", req, res);
    });

    server.Post("/api/labs", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      if (authorized(req, res)) {
        const auto body = json::parse(req.body, nullptr, false);
        const auto name = body.is_discarded() ? std::string() : body.value("name", "");
        if (name.empty()) {
          reply(res, 400, {{"message", "Lab name is required"}});
        } else if (labs.count(name + ".unl")) {
          reply(res, 409, {{"message", "Lab already exists"}});
        } else {
          labs[name + ".unl"].attributes = body;
          reply(res, 200, {{"message", "Lab has been created"}});
        }
      }
      record("create_lab", req, res);
    });

    server.Post(R"(/api/labs/(.+\.unl)/nodes)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          ++create_node_calls;
          const auto body = json::parse(req.body, nullptr, false);
          if (create_node_calls == faults.fail_create_node_at) {
            --create_node_calls;  // the same node fails again on retry
            reply(res, 500, {{"message", "Cannot create node"}});
          } else if (body.is_discarded() || !body.contains("name")) {
            reply(res, 400, {{"message", "Node name is required"}});
          } else {
            const int id = static_cast<int>(l->nodes.size()) + 1;
            auto& n = l->nodes[id];
            n.attributes = body;
            n.attributes["id"] = id;
            reply(res, 201, {{"message", "Lab has been saved"}, {"data", {{"id", id}}}});
          }
        }
      }
      record("create_node", req, res);
    });

    server.Post(R"(/api/labs/(.+\.unl)/networks)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          const auto body = json::parse(req.body, nullptr, false);
          const int id = static_cast<int>(l->networks.size()) + 1;
          l->networks[id] = body.is_discarded() ? json::object() : body;
          l->networks[id]["id"] = id;
          reply(res, 201, {{"message", "Network has been added to the lab"}, {"data", {{"id", id}}}});
        }
      }
      record("create_network", req, res);
    });

    server.Put(R"(/api/labs/(.+\.unl)/nodes/(\d+)/interfaces)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          if (auto* n = node(*l, req, res)) {
            const auto body = json::parse(req.body, nullptr, false);
            bool ok = body.is_object();
            if (ok) {
              for (const auto& [idx, net] : body.items()) {
                const int net_id = std::stoi(net.get<std::string>());
                if (!l->networks.count(net_id)) ok = false;
                n->links[std::stoi(idx)] = net_id;
              }
            }
            if (ok) {
              reply(res, 201, {{"message", "Lab has been saved"}});
            } else {
              reply(res, 400, {{"message", "Invalid interface mapping"}});
            }
          }
        }
      }
      record("link", req, res);
    });

    server.Get(R"(/api/labs/(.+\.unl)/nodes/(\d+)/start)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          if (auto* n = node(*l, req, res)) {
            n->started = true;
            reply(res, 200, {{"message", "Node started"}});
          }
        }
      }
      record("start", req, res);
    });

    server.Put(R"(/api/labs/(.+\.unl)/configs/(\d+))", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      bodies.push_back(req.body);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          if (auto* n = node(*l, req, res)) {
            const auto body = json::parse(req.body, nullptr, false);
            n->config = body.is_discarded() ? std::string() : body.value("data", "");
            reply(res, 201, {{"message", "Lab has been saved"}});
          }
        }
      }
      record("push_config", req, res);
    });

    server.Get(R"(/api/labs/(.+\.unl)/configs/(\d+))", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          if (auto* n = node(*l, req, res)) {
            reply(res, 200, {{"data", {{"id", std::stoi(req.matches[2])}, {"data", n->config}}}});
          }
        }
      }
      record(req.path, req, res);
    });

    server.Get(R"(/api/labs/(.+\.unl)/nodes)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          json data = json::object();
          for (const auto& [id, n] : l->nodes) {
            data[std::to_string(id)] = n.attributes;
            data[std::to_string(id)]["status"] = n.started ? 2 : 0;
          }
          reply(res, 200, {{"data", data}});
        }
      }
      record(req.path, req, res);
    });

    server.Get(R"(/api/labs/(.+\.unl)/networks)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          json data = json::object();
          for (const auto& [id, net] : l->networks) data[std::to_string(id)] = net;
          reply(res, 200, {{"data", data}});
        }
      }
      record(req.path, req, res);
    });

    server.Get(R"(/api/labs/(.+\.unl)/nodes/(\d+)/interfaces)", [this](Req req, Res res) {
      std::lock_guard lock(mu);
      if (authorized(req, res)) {
        if (auto* l = lab(req, res)) {
          if (auto* n = node(*l, req, res)) {
            json ethernet = json::array();
            const int count = n->attributes.value("ethernet", 0);
            for (int k = 0; k < count; ++k) {
              const auto it = n->links.find(k);
              ethernet.push_back({{"name", "e" + std::to_string(k)},
                                  {"network_id", it == n->links.end() ? 0 : it->second}});
            }
            reply(res, 200, {{"data", {{"ethernet", ethernet}, {"serial", json::array()}}}});
          }
        }
      }
      record(req.path, req, res);
    });
  }
};

MockEveServer::MockEveServer(std::string username, std::string password, MockEveFaults faults)
    : impl_(std::make_unique<Impl>()) {
  impl_->username = std::move(username);
  impl_->password = std::move(password);
  impl_->faults = faults;
  impl_->routes();
}

MockEveServer::~MockEveServer() { stop(); }

void MockEveServer::start() {
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockEveServer::stop() {
  if (!impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

std::string MockEveServer::base_url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

std::vector<RecordedCall> MockEveServer::calls() const {
  std::lock_guard lock(impl_->mu);
  return impl_->calls;
}

std::vector<std::string> MockEveServer::successful_kinds() const {
  std::lock_guard lock(impl_->mu);
  std::vector<std::string> out;
  for (const auto& c : impl_->calls) {
    if (c.status < 300 && !c.kind.starts_with("/")) out.push_back(c.kind);
  }
  return out;
}

std::vector<std::string> MockEveServer::request_bodies() const {
  std::lock_guard lock(impl_->mu);
  return impl_->bodies;
}

nlohmann::json MockEveServer::state() const {
  std::lock_guard lock(impl_->mu);
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, l] : impl_->labs) {
    nlohmann::json nodes = nlohmann::json::object();
    for (const auto& [id, n] : l.nodes) {
      nlohmann::json links = nlohmann::json::object();
      for (const auto& [idx, net] : n.links) links[std::to_string(idx)] = net;
      nodes[std::to_string(id)] = {
          {"attributes", n.attributes}, {"links", links}, {"started", n.started}, {"config", n.config}};
    }
    nlohmann::json nets = nlohmann::json::object();
    for (const auto& [id, net] : l.networks) nets[std::to_string(id)] = net;
    out[name] = {{"nodes", nodes}, {"networks", nets}};
  }
  return out;
}

}  // namespace t2n
