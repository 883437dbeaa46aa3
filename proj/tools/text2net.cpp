// SPDX-License-Identifier: Apache-2.0
#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "t2n/cli.hpp"
#include "t2n/error.hpp"
#include "t2n/log.hpp"
#include "t2n/service.hpp"

namespace {

t2n::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"text2net: plain-language network scenarios to running topologies"};
  app.require_subcommand(0, 1);

  std::string backend = "sim";
  std::string adapter = "rules";
  std::string fixtures;
  std::string endpoint;
  std::string model;
  std::string eve_url;
  std::string eve_user = "admin";
  bool strict = false;
  int verbosity = 0;

  app.add_option("--backend", backend, "Provisioning backend")->check(CLI::IsMember({"sim", "eve"}));
  app.add_option("--adapter", adapter, "Scenario converter")->check(CLI::IsMember({"rules", "replay", "http"}));
  app.add_option("--fixtures", fixtures, "Replay fixture directory (--adapter replay)");
  app.add_option("--endpoint", endpoint, "Chat-completion URL (--adapter http); key from T2N_LLM_API_KEY");
  app.add_option("--model", model, "Model name (--adapter http)");
  app.add_option("--eve-url", eve_url, "EVE-NG base URL (--backend eve); password from T2N_EVE_PASSWORD");
  app.add_option("--eve-user", eve_user, "EVE-NG user name");
  app.add_flag("--strict", strict, "Reject unrecognized SCS statements");
  app.add_flag("-v,--verbose", verbosity, "More log output (repeatable)");

  auto* repl = app.add_subcommand("repl", "Interactive session (default)");
  auto* batch = app.add_subcommand("batch", "Convert one scenario file and check expectations");
  std::string scenario;
  std::string out_path;
  std::string expect;
  std::vector<std::string> replies;
  batch->add_option("--scenario", scenario, "Scenario text file")->required()->check(CLI::ExistingFile);
  batch->add_option("--out", out_path, "Write the canonical topology JSON here");
  batch->add_option("--expect", expect, "Expectation file")->check(CLI::ExistingFile);
  batch->add_option("--reply", replies, "Answer to a clarification question (repeatable)");

  auto* serve = app.add_subcommand("serve", "HTTP service for the web UI");
  t2n::ServiceConfig service_config;
  int timeout_ms = 20000;
  serve->add_option("--bind", service_config.bind_address, "Bind address");
  serve->add_option("--port", service_config.port, "Port (0 picks a free one)");
  serve->add_option("--cors-origin", service_config.cors_origin, "Allowed browser origin");
  serve->add_option("--static-dir", service_config.static_dir, "Directory of web UI assets");
  serve->add_option("--message-timeout-ms", timeout_ms, "Answer 202 with a poll token after this long");

  CLI11_PARSE(app, argc, argv);

  if (verbosity == 1) t2n::logger()->set_level(spdlog::level::info);
  if (verbosity >= 2) t2n::logger()->set_level(spdlog::level::debug);

  t2n::CliConfig config;
  try {
    config.backend = t2n::parse_provision_backend(backend);
    auto& adapter_config = config.orchestrator.adapter;
    adapter_config.backend = t2n::parse_adapter_backend(adapter);
    if (!fixtures.empty()) adapter_config.fixture_path = fixtures;
    if (!endpoint.empty()) adapter_config.endpoint_url = endpoint;
    if (!model.empty()) adapter_config.model_name = model;
    adapter_config.validate();
    config.orchestrator.extract.strict = strict;
    config.orchestrator.eve.base_url = eve_url;
    config.orchestrator.eve.username = eve_user;
    if (config.backend == t2n::ProvisionBackend::Eve && eve_url.empty()) {
      throw t2n::Error(t2n::ErrorCode::InvalidConfig, "--backend eve requires --eve-url");
    }
  } catch (const t2n::Error& e) {
    std::cerr << "text2net: " << e.what() << "\n";
    return t2n::kExitBackend;
  }

  if (*batch) {
    config.scenario_file = scenario;
    if (!out_path.empty()) config.output_path = out_path;
    if (!expect.empty()) config.expect_file = expect;
    config.replies = replies;
    return t2n::run_batch(config, std::cout, std::cerr);
  }
  if (*serve) {
    try {
      service_config.message_timeout = std::chrono::milliseconds(timeout_ms);
      service_config.eve_available = !eve_url.empty();
      t2n::SessionStore store(config.orchestrator);
      t2n::Service service(store, service_config);
      const int port = service.bind();
      std::cerr << "text2net: serving on http://" << service_config.bind_address << ":" << port << "\n";
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service.listen();
      g_service = nullptr;
    } catch (const t2n::Error& e) {
      std::cerr << "text2net: " << e.what() << "\n";
      return t2n::kExitBackend;
    }
    return t2n::kExitOk;
  }
  (void)repl;
  return t2n::run_repl(config, std::cin, std::cout);
}
