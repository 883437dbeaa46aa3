// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "t2n/error.hpp"
#include "t2n/ipv4.hpp"

using namespace t2n;

TEST_CASE("dotted quads parse and print") {
  CHECK(validate_ipv4("192.168.0.1").value == 0xC0A80001u);
  CHECK(to_string(validate_ipv4("0.0.0.0")) == "0.0.0.0");
  CHECK(to_string(validate_ipv4("255.255.255.255")) == "255.255.255.255");
}

TEST_CASE("octet out of range is IP_OCTET_RANGE") {
  for (const char* bad : {"192.168.0.300", "256.1.1.1", "1.1.1.1000"}) {
    CAPTURE(bad);
    CHECK(check_ipv4(bad) == ErrorCode::IpOctetRange);
  }
}

TEST_CASE("malformed addresses are IP_MALFORMED") {
  for (const char* bad : {"", "1.2.3", "1.2.3.4.5", "a.b.c.d", "1..2.3", "01.2.3.4", " 1.2.3.4", "1.2.3.4/24"}) {
    CAPTURE(bad);
    CHECK(check_ipv4(bad) == ErrorCode::IpMalformed);
  }
  CHECK_FALSE(check_ipv4("10.0.0.1").has_value());
}

TEST_CASE("masks and prefixes convert both ways") {
  CHECK(mask_to_prefix(validate_ipv4("255.255.255.0")) == 24);
  CHECK(mask_to_prefix(validate_ipv4("255.255.255.252")) == 30);
  CHECK(mask_to_prefix(validate_ipv4("0.0.0.0")) == 0);
  CHECK(to_string(prefix_to_mask(20)) == "255.255.240.0");
  CHECK_THROWS_AS(mask_to_prefix(validate_ipv4("255.0.255.0")), Error);
  for (int p = 0; p <= 32; ++p) CHECK(mask_to_prefix(prefix_to_mask(p)) == p);
}

TEST_CASE("prefix-or-mask accepts either notation") {
  CHECK(parse_prefix_or_mask("24") == 24);
  CHECK(parse_prefix_or_mask("255.255.255.0") == 24);
  CHECK_FALSE(parse_prefix_or_mask("33").has_value());
  CHECK_FALSE(parse_prefix_or_mask("255.0.255.0").has_value());
  CHECK_FALSE(parse_prefix_or_mask("").has_value());
}

TEST_CASE("network arithmetic") {
  const auto net = parse_ipv4_network("192.168.100.7/24");
  CHECK(net.has_host_bits());
  CHECK(to_string(net.network()) == "192.168.100.0/24");
  CHECK(net.contains(validate_ipv4("192.168.100.254")));
  CHECK_FALSE(net.contains(validate_ipv4("192.168.101.1")));
  CHECK(Ipv4Network{validate_ipv4("10.0.0.0"), 0}.contains(validate_ipv4("200.1.1.1")));
  CHECK_THROWS_AS(parse_ipv4_network("10.0.0.0"), Error);
  CHECK_THROWS_AS(parse_ipv4_network("10.0.0.0/40"), Error);
}
