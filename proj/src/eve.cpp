// SPDX-License-Identifier: Apache-2.0
#include "t2n/eve.hpp"

#include <algorithm>
#include <cstdlib>

#include "eve_wire.hpp"
#include "t2n/ipv4.hpp"
#include "t2n/log.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

constexpr std::string_view kNetworkPrefix = "t2n-net-";

std::vector<const InterfaceSpec*> ethernet_interfaces(const DeviceSpec& d) {
  std::vector<const InterfaceSpec*> out;
  for (const auto& i : d.interfaces) {
    if (!i.is_loopback) out.push_back(&i);
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->name < b->name; });
  return out;
}

int ethernet_index(const DeviceSpec& d, std::string_view ifname) {
  const auto eth = ethernet_interfaces(d);
  for (std::size_t k = 0; k < eth.size(); ++k) {
    if (eth[k]->name == ifname) return static_cast<int>(k);
  }
  return -1;
}

std::string response_detail(const WireResponse& r) {
  if (r.status == 0) return r.transport_error;
  if (r.body.is_object() && r.body.contains("message") && r.body["message"].is_string()) {
    return "HTTP " + std::to_string(r.status) + ": " + r.body["message"].get<std::string>();
  }
  return "HTTP " + std::to_string(r.status) + ": " + r.body.dump();
}

std::optional<int> returned_id(const WireResponse& r) {
  const auto& data = r.data();
  if (data.is_object() && data.contains("id") && data["id"].is_number_integer()) return data["id"].get<int>();
  return std::nullopt;
}

int as_int(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) return std::stoi(j.get<std::string>());
  return 0;
}

class Executor {
 public:
  Executor(const ProvisionPlan& plan, EveSession& session, const EveConfig& config)
      : plan_(plan), session_(session), config_(config), wire_(config.base_url, config.timeout) {
    session_.base_url = config.base_url;
    report_.calls.reserve(plan.calls.size());
    for (const auto& call : plan.calls) {
      report_.calls.push_back(CallRecord{call.describe(), call.kind, CallStatus::Skipped, 0, 0, {}});
    }
  }

  ProvisionReport run() {
    const char* password = std::getenv(std::string(kEvePasswordEnv).c_str());
    if (password == nullptr) {
      throw ProvisionError(ErrorCode::AuthFailure, std::string(kEvePasswordEnv) + " is not set", report_);
    }
    password_ = password;
    if (!session_.session_cookie.empty()) wire_.set_cookie(session_.session_cookie);

    for (std::size_t n = 0; n < plan_.calls.size(); ++n) run_call(n);
    report_.success = true;
    report_.lab_path = session_.lab_path;
    return report_;
  }

 private:
  void run_call(std::size_t n) {
    const auto& call = plan_.calls[n];
    auto& record = report_.calls[n];
    bool relogged = false;
    for (;;) {
      ++record.attempts;
      const auto response = perform(call);
      record.http_status = response.status;
      logger()->info("eve {} -> {}", record.call, response.status == 0 ? response.transport_error
                                                                        : "HTTP " + std::to_string(response.status));
      if (response.ok() && accept(call, response)) {
        record.status = CallStatus::Completed;
        record.detail.clear();
        return;
      }
      record.detail = response.ok() ? "response lacks the created object's id" : response_detail(response);

      if (response.status == 401 || response.status == 403) {
        if (call.kind == CallKind::Login) abort(n, ErrorCode::AuthFailure, "login rejected: " + record.detail);
        if (relogged) abort(n, ErrorCode::AuthFailure, "session rejected after re-login: " + record.detail);
        relogin(n);
        relogged = true;
        --record.attempts;
        continue;
      }
      const bool transient = response.status == 0 || response.status >= 500 || response.ok();
      if (!transient) abort(n, ErrorCode::ApiError, record.call + " failed: " + record.detail);
      if (record.attempts > config_.max_retries) {
        abort(n, ErrorCode::PlanAborted,
              record.call + " failed after " + std::to_string(record.attempts) + " attempts: " + record.detail);
      }
    }
  }

  void relogin(std::size_t n) {
    logger()->warn("eve session expired; logging in again");
    ++report_.relogins;
    const auto response = wire_.login(config_.username, password_);
    if (!response.ok()) abort(n, ErrorCode::AuthFailure, "re-login failed: " + response_detail(response));
    session_.session_cookie = wire_.cookie();
  }

  [[noreturn]] void abort(std::size_t n, ErrorCode code, const std::string& message) {
    report_.calls[n].status = CallStatus::Failed;
    report_.lab_path = session_.lab_path;
    logger()->error("eve provisioning aborted: {}", message);
    throw ProvisionError(code, message, report_);
  }

  WireResponse perform(const PlannedCall& call) {
    switch (call.kind) {
      case CallKind::Login: return wire_.login(config_.username, password_);
      case CallKind::CreateLab: return wire_.create_lab(plan_.lab_name);
      case CallKind::CreateNode: return wire_.create_node(session_.lab_path, node_body(call.device));
      case CallKind::CreateNetwork:
        return wire_.create_network(session_.lab_path, std::string(kNetworkPrefix) + std::to_string(call.network_id));
      case CallKind::Link:
        return wire_.link(session_.lab_path, session_.node_id_map.at(call.device), call.ethernet_index,
                          session_.net_id_map.at(call.network_id));
      case CallKind::Start: return wire_.start(session_.lab_path, session_.node_id_map.at(call.device));
      case CallKind::PushConfig:
        return wire_.push_config(session_.lab_path, session_.node_id_map.at(call.device),
                                 render_device_config(*plan_.topology.find_device(call.device)));
    }
    return {};
  }

  bool accept(const PlannedCall& call, const WireResponse& response) {
    switch (call.kind) {
      case CallKind::Login: session_.session_cookie = wire_.cookie(); return true;
      case CallKind::CreateLab: session_.lab_path = EveWire::lab_path_for(plan_.lab_name); return true;
      case CallKind::CreateNode:
        if (auto id = returned_id(response)) {
          session_.node_id_map[call.device] = *id;
          return true;
        }
        return false;
      case CallKind::CreateNetwork:
        if (auto id = returned_id(response)) {
          session_.net_id_map[call.network_id] = *id;
          return true;
        }
        return false;
      default: return true;
    }
  }

  nlohmann::json node_body(const std::string& hostname) const {
    const auto* device = plan_.topology.find_device(hostname);
    const auto& tpl = plan_.templates.at(device->node_type);
    const auto index = static_cast<int>(device - plan_.topology.devices.data());
    nlohmann::json body{{"type", "qemu"},
                        {"template", tpl.template_name},
                        {"image", tpl.image},
                        {"name", hostname},
                        {"cpu", tpl.cpu},
                        {"ram", tpl.ram_mb},
                        {"ethernet", std::max<int>(tpl.ethernets, static_cast<int>(ethernet_interfaces(*device).size()))},
                        {"console", "telnet"},
                        {"left", 100 + 200 * (index % 5)},
                        {"top", 100 + 200 * (index / 5)}};
    body.update(tpl.extra);
    return body;
  }

  const ProvisionPlan& plan_;
  EveSession& session_;
  const EveConfig& config_;
  EveWire wire_;
  std::string password_;
  ProvisionReport report_;
};

}  // namespace

TemplateTable default_templates() {
  return {
      {NodeType::Router, NodeTemplate{"vios", "vios-adventerprisek9-m.SPA.159-3.M6", 1, 1024, 4, nlohmann::json::object()}},
      {NodeType::Switch, NodeTemplate{"viosl2", "viosl2-adventerprisek9-m.SSA.high_iron_20200929", 1, 1024, 8,
                                      nlohmann::json::object()}},
  };
}

std::string_view to_string(CallKind kind) {
  switch (kind) {
    case CallKind::Login: return "login";
    case CallKind::CreateLab: return "create_lab";
    case CallKind::CreateNode: return "create_node";
    case CallKind::CreateNetwork: return "create_network";
    case CallKind::Link: return "link";
    case CallKind::Start: return "start";
    case CallKind::PushConfig: return "push_config";
  }
  return "login";
}

std::string_view to_string(CallStatus status) {
  switch (status) {
    case CallStatus::Completed: return "completed";
    case CallStatus::Failed: return "failed";
    case CallStatus::Skipped: return "skipped";
  }
  return "skipped";
}

std::string PlannedCall::describe() const {
  std::string out(to_string(kind));
  switch (kind) {
    case CallKind::CreateNode:
    case CallKind::Start:
    case CallKind::PushConfig: out += " " + device; break;
    case CallKind::CreateNetwork: out += " net " + std::to_string(network_id); break;
    case CallKind::Link: out += " " + device + "." + interface + " net " + std::to_string(network_id); break;
    default: break;
  }
  return out;
}

std::size_t ProvisionPlan::count(CallKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(calls.begin(), calls.end(), [&](const PlannedCall& c) { return c.kind == kind; }));
}

std::size_t ProvisionReport::count(CallStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(calls.begin(), calls.end(), [&](const CallRecord& c) { return c.status == status; }));
}

ProvisionPlan plan(const TopologyDocument& topo, const TemplateTable& templates, const std::string& lab_name) {
  ProvisionPlan p;
  p.lab_name = lab_name;
  p.topology = canonicalize(topo);
  p.templates = templates;
  for (const auto& d : p.topology.devices) {
    if (!templates.count(d.node_type)) {
      throw Error(ErrorCode::MissingTemplate,
                  "no node template for type '" + std::string(to_string(d.node_type)) + "' (" + d.hostname + ")");
    }
  }

  auto add = [&](CallKind kind, std::string device = {}, int network_id = 0) {
    PlannedCall call;
    call.kind = kind;
    call.device = std::move(device);
    call.network_id = network_id;
    p.calls.push_back(std::move(call));
  };
  add(CallKind::Login);
  add(CallKind::CreateLab);
  for (const auto& d : p.topology.devices) add(CallKind::CreateNode, d.hostname);
  for (const auto& c : p.topology.connections) add(CallKind::CreateNetwork, {}, c.network_id);
  for (const auto& c : p.topology.connections) {
    for (const auto* e : {&c.endpoint_a, &c.endpoint_b}) {
      const auto* d = p.topology.find_device(e->device);
      p.calls.push_back({CallKind::Link, e->device, e->interface, c.network_id, ethernet_index(*d, e->interface)});
    }
  }
  for (const auto& d : p.topology.devices) add(CallKind::Start, d.hostname);
  for (const auto& d : p.topology.devices) add(CallKind::PushConfig, d.hostname);
  return p;
}

ProvisionReport execute(const ProvisionPlan& plan, EveSession& session, const EveConfig& config) {
  return Executor(plan, session, config).run();
}

nlohmann::json to_json(const ProvisionReport& report) {
  nlohmann::json calls = nlohmann::json::array();
  for (const auto& c : report.calls) {
    calls.push_back({{"call", c.call},
                     {"kind", to_string(c.kind)},
                     {"status", to_string(c.status)},
                     {"http_status", c.http_status},
                     {"attempts", c.attempts},
                     {"detail", c.detail}});
  }
  return {{"success", report.success},
          {"lab_path", report.lab_path},
          {"relogins", report.relogins},
          {"completed", report.count(CallStatus::Completed)},
          {"failed", report.count(CallStatus::Failed)},
          {"skipped", report.count(CallStatus::Skipped)},
          {"calls", calls}};
}

std::string render_device_config(const DeviceSpec& device) {
  std::string out = "hostname " + device.hostname + "\n!\n";
  for (const auto& i : device.interfaces) {
    out += "interface " + i.name + "\n";
    const auto net = i.subnet();
    if (net) {
      out += " ip address " + i.address + " " + to_string(net->mask()) + "\n";
    } else {
      out += " no ip address\n";
    }
    out += " no shutdown\n!\n";
  }
  for (const auto& r : device.static_routes) {
    const auto dest = r.destination_network();
    if (!dest || !r.resolved_next_hop) {
      throw Error(ErrorCode::UnresolvedRoute, device.hostname + ": static route '" + r.destination + " via " + r.via +
                                                  "' has no resolved next hop");
    }
    out += "ip route " + to_string(dest->address) + " " + to_string(dest->mask()) + " " +
           to_string(*r.resolved_next_hop);
    if (!r.via_is_address()) out += " name " + r.via;
    out += "\n";
  }
  if (!device.static_routes.empty()) out += "!\n";
  out += "end\n";
  return out;
}

DeviceSpec parse_device_config(std::string_view text) {
  DeviceSpec device;
  InterfaceSpec* current = nullptr;
  for (auto raw : split(text, '\n')) {
    const auto line = trim(raw);
    const auto words = split_ws(line);
    if (words.empty() || words[0] == "!") continue;
    if (words[0] == "hostname" && words.size() == 2) {
      device.hostname = std::string(words[1]);
      current = nullptr;
    } else if (words[0] == "interface" && words.size() == 2) {
      InterfaceSpec spec;
      spec.name = std::string(words[1]);
      spec.is_loopback = spec.name.starts_with("Loopback");
      device.interfaces.push_back(std::move(spec));
      current = &device.interfaces.back();
    } else if (current != nullptr && words.size() == 4 && words[0] == "ip" && words[1] == "address") {
      current->address = std::string(words[2]);
      current->mask = std::to_string(mask_to_prefix(validate_ipv4(words[3])));
    } else if (words.size() >= 5 && words[0] == "ip" && words[1] == "route") {
      current = nullptr;
      StaticRoute route;
      const Ipv4Network dest{validate_ipv4(words[2]), mask_to_prefix(validate_ipv4(words[3]))};
      route.destination = to_string(dest);
      route.resolved_next_hop = validate_ipv4(words[4]);
      route.via = words.size() == 7 && words[5] == "name" ? std::string(words[6]) : std::string(words[4]);
      device.static_routes.push_back(std::move(route));
    }
  }
  return device;
}

TopologyDocument read_back(const EveSession& session, const EveConfig& config, const TemplateTable& templates) {
  EveWire wire(config.base_url, config.timeout);
  wire.set_cookie(session.session_cookie);
  auto require = [](WireResponse r, const std::string& what) {
    if (!r.ok()) throw Error(ErrorCode::ApiError, what + " failed: " + response_detail(r));
    return r;
  };

  std::map<int, int> network_ids;  // emulator id -> topology network id
  const auto networks = require(wire.list_networks(session.lab_path), "list networks");
  for (const auto& [key, net] : networks.data().items()) {
    const auto name = net.value("name", std::string());
    const int id = as_int(net.at("id"));
    network_ids[id] = name.starts_with(kNetworkPrefix) ? std::stoi(name.substr(kNetworkPrefix.size())) : id;
  }

  TopologyDocument topo;
  std::map<int, std::vector<Endpoint>> members;
  const auto nodes = require(wire.list_nodes(session.lab_path), "list nodes");
  for (const auto& [key, node] : nodes.data().items()) {
    const int id = as_int(node.at("id"));
    const auto config_text = require(wire.get_config(session.lab_path, id), "get config").data().value("data", "");
    DeviceSpec device = parse_device_config(config_text);
    if (device.hostname.empty()) device.hostname = node.value("name", std::string());
    const auto tpl = node.value("template", std::string());
    for (const auto& [type, t] : templates) {
      if (t.template_name == tpl) device.node_type = type;
    }

    const auto eth = ethernet_interfaces(device);
    const auto ifaces = require(wire.node_interfaces(session.lab_path, id), "list interfaces").data();
    const auto& ethernet = ifaces.contains("ethernet") ? ifaces["ethernet"] : nlohmann::json::array();
    for (std::size_t k = 0; k < ethernet.size() && k < eth.size(); ++k) {
      const int net = as_int(ethernet[k].value("network_id", nlohmann::json(0)));
      if (net == 0 || !network_ids.count(net)) continue;
      members[network_ids[net]].push_back(Endpoint{device.hostname, eth[k]->name});
      device.find_interface(eth[k]->name)->network_id = network_ids[net];
    }
    topo.devices.push_back(std::move(device));
  }
  for (const auto& [id, ends] : members) {
    if (ends.size() == 2) topo.connections.push_back(Connection{ends[0], ends[1], id});
  }
  return canonicalize(topo);
}

}  // namespace t2n
