// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "t2n/error.hpp"

namespace t2n {

/// IPv4 address held in host byte order.
struct Ipv4 {
  std::uint32_t value = 0;

  auto operator<=>(const Ipv4&) const = default;
};

std::string to_string(Ipv4 address);

/// Address plus prefix length. `address` may carry host bits; use network().
struct Ipv4Network {
  Ipv4 address;
  int prefix_len = 0;

  Ipv4 mask() const noexcept;
  Ipv4Network network() const noexcept;
  bool contains(Ipv4 candidate) const noexcept;
  bool has_host_bits() const noexcept { return network().address != address; }

  auto operator<=>(const Ipv4Network&) const = default;
};

std::string to_string(const Ipv4Network& net);

/// Strict dotted-quad parser. Throws Error{IpMalformed} on anything that is
/// not four decimal octets without leading zeros, Error{IpOctetRange} when a
/// well-formed octet exceeds 255.
Ipv4 validate_ipv4(std::string_view text);

/// Non-throwing variant; returns the failure code instead.
std::optional<ErrorCode> check_ipv4(std::string_view text) noexcept;

Ipv4 prefix_to_mask(int prefix_len);

/// Throws Error{NonContiguousMask}.
int mask_to_prefix(Ipv4 mask);

/// Parses "a.b.c.d/len". Throws IpMalformed / IpOctetRange.
Ipv4Network parse_ipv4_network(std::string_view text);

/// Accepts either a prefix length ("24") or a dotted mask ("255.255.255.0").
/// Returns nullopt when neither form is valid.
std::optional<int> parse_prefix_or_mask(std::string_view text) noexcept;

}  // namespace t2n
