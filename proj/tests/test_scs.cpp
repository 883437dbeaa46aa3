// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "t2n/error.hpp"
#include "t2n/scs.hpp"

using namespace t2n;

namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    parse_scs(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse_scs to throw");
  return ErrorCode::MalformedLine;
}

}  // namespace

TEST_CASE("entries group lines by key in first-appearance order") {
  const auto doc = parse_scs(
      "R-1: type router\n"
      "# comment\n"
      "\n"
      "R-2: type router\r\n"
      "R-1: interface Gi0/0 ip 10.0.0.1/30\n"
      "R-1 , R-2: R-1.Gi0/0 <-> R-2.Gi0/0\n");
  REQUIRE(doc.entries.size() == 3);
  CHECK(doc.entries[0].key == "R-1");
  CHECK(doc.entries[0].lines == std::vector<std::string>{"type router", "interface Gi0/0 ip 10.0.0.1/30"});
  CHECK(doc.entries[1].key == "R-2");
  CHECK(doc.entries[2].key == "R-1,R-2");
  CHECK(doc.line_count() == 4);
  REQUIRE(doc.find("R-1,R-2") != nullptr);
  CHECK(doc.find("R-9") == nullptr);
}

TEST_CASE("structural errors") {
  CHECK(parse_error("") == ErrorCode::EmptyDocument);
  CHECK(parse_error("# only a comment\n\n") == ErrorCode::EmptyDocument);
  CHECK(parse_error("R-1 type router") == ErrorCode::MalformedLine);
  CHECK(parse_error("R-1:") == ErrorCode::MalformedLine);
  CHECK(parse_error("R 1: type router") == ErrorCode::MalformedLine);
  CHECK(parse_error("R-1,R-2,R-3: R-1.a <-> R-2.b") == ErrorCode::KeyArityError);
}

TEST_CASE("statement classification") {
  CHECK(classify_line("type router").kind == ScsLineKind::TypeDecl);
  CHECK(classify_line("type PC").kind == ScsLineKind::TypeDecl);
  CHECK(classify_line("type firewall").kind == ScsLineKind::Unknown);
  CHECK(classify_line("name R-1").kind == ScsLineKind::NameDecl);
  CHECK(classify_line("interface GigabitEthernet0/0").kind == ScsLineKind::InterfaceDecl);
  CHECK(classify_line("interface gi 0/0 ip 10.0.0.1 mask 255.255.255.0").kind == ScsLineKind::InterfaceDecl);
  CHECK(classify_line("interface gi0/0 ip 10.0.0.1/24 mask 255.255.255.0").kind == ScsLineKind::Unknown);
  CHECK(classify_line("interface gi0/0 ip").kind == ScsLineKind::Unknown);
  CHECK(classify_line("static_route 10.0.0.0/8 via R-2").kind == ScsLineKind::StaticRouteDecl);
  CHECK(classify_line("static_route via R-2").kind == ScsLineKind::StaticRouteDecl);
  CHECK(classify_line("static_route").kind == ScsLineKind::StaticRouteDecl);
  CHECK(classify_line("static_route 10.0.0.0/8 through R-2").kind == ScsLineKind::Unknown);
  CHECK(classify_line("R-1.Gi0/0 <-> R-2.Gi0/0").kind == ScsLineKind::ConnectionDecl);
  CHECK(classify_line("R-1.Gi0/0 -> R-2.Gi0/0").kind == ScsLineKind::Unknown);
  CHECK(classify_line("enable ospf").kind == ScsLineKind::Unknown);
}

TEST_CASE("statement payloads") {
  const auto iface = std::get<InterfaceDecl>(parse_statement("interface Fast Ethernet 0/1 ip 192.168.0.1 mask 255.255.255.0"));
  CHECK(iface.ifname == "Fast Ethernet 0/1");
  CHECK(iface.address == "192.168.0.1");
  CHECK(iface.mask == "255.255.255.0");

  const auto slash = std::get<InterfaceDecl>(parse_statement("interface Gi0/0 ip 192.168.0.300/24"));
  CHECK(slash.address == "192.168.0.300");
  CHECK(slash.mask == "24");

  const auto route = std::get<StaticRouteDecl>(parse_statement("static_route 192.168.100.0/24 via R-2"));
  CHECK(route.destination == "192.168.100.0/24");
  CHECK(route.via == "R-2");
  const auto partial = std::get<StaticRouteDecl>(parse_statement("static_route via 10.0.0.2"));
  CHECK(partial.destination.empty());
  CHECK(partial.via == "10.0.0.2");

  const auto link = std::get<ConnectionDecl>(parse_statement("R-1.Gi0/0 <-> R-2.Gi0/1"));
  CHECK(link.device_a == "R-1");
  CHECK(link.iface_b == "Gi0/1");
}

TEST_CASE("identifiers and keys") {
  CHECK(is_device_identifier("R-1"));
  CHECK(is_device_identifier("core_sw2"));
  CHECK_FALSE(is_device_identifier(""));
  CHECK_FALSE(is_device_identifier("R.1"));
  CHECK(is_connection_key("R1,R2"));
  CHECK(split_key(" R1 , R2 ") == std::vector<std::string>{"R1", "R2"});
}

TEST_CASE("render then parse is the identity on documents") {
  std::mt19937 rng(7);
  const std::vector<std::string> devices{"R1", "R-2", "sw_3", "PC4"};
  const std::vector<std::string> lines{"type router", "interface Gi0/0 ip 10.0.0.1/24", "static_route 10.1.0.0/16 via R1",
                                       "name host-a", "enable ospf"};
  for (int round = 0; round < 200; ++round) {
    ScsDocument doc;
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int e = 0; e < n; ++e) {
      ScsEntry entry;
      const auto a = devices[rng() % devices.size()];
      const auto b = devices[rng() % devices.size()];
      if (rng() % 3 == 0 && a != b) {
        entry.key = a + "," + b;
        entry.lines.push_back(a + ".Gi0/0 <-> " + b + ".Gi0/1");
      } else {
        entry.key = a;
        const int m = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int k = 0; k < m; ++k) entry.lines.push_back(lines[rng() % lines.size()]);
      }
      if (doc.find(entry.key) == nullptr) doc.entries.push_back(entry);
    }
    const auto text = render_scs(doc);
    CAPTURE(text);
    CHECK(parse_scs(text) == doc);
    CHECK(render_scs(parse_scs(text)) == text);
  }
}
