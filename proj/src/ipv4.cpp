// SPDX-License-Identifier: Apache-2.0
#include "t2n/ipv4.hpp"

#include <array>
#include <bit>
#include <charconv>

namespace t2n {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

struct ParsedQuad {
  std::array<std::uint32_t, 4> octets{};
  std::optional<ErrorCode> error;
};

ParsedQuad parse_quad(std::string_view text) noexcept {
  ParsedQuad out;
  bool out_of_range = false;
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t dot = text.find('.', pos);
    if ((i < 3) != (dot != std::string_view::npos)) {
      out.error = ErrorCode::IpMalformed;
      return out;
    }
    std::string_view part = text.substr(pos, i < 3 ? dot - pos : std::string_view::npos);
    if (!all_digits(part) || (part.size() > 1 && part.front() == '0')) {
      out.error = ErrorCode::IpMalformed;
      return out;
    }
    if (part.size() > 3) {
      out_of_range = true;
    } else {
      std::uint32_t v = 0;
      std::from_chars(part.data(), part.data() + part.size(), v);
      if (v > 255) out_of_range = true;
      out.octets[i] = v;
    }
    pos = dot + 1;
  }
  if (out_of_range) out.error = ErrorCode::IpOctetRange;
  return out;
}

}  // namespace

std::string to_string(Ipv4 address) {
  const auto v = address.value;
  return std::to_string(v >> 24) + '.' + std::to_string((v >> 16) & 0xff) + '.' +
         std::to_string((v >> 8) & 0xff) + '.' + std::to_string(v & 0xff);
}

Ipv4 Ipv4Network::mask() const noexcept {
  return prefix_len <= 0 ? Ipv4{0} : Ipv4{~std::uint32_t{0} << (32 - prefix_len)};
}

Ipv4Network Ipv4Network::network() const noexcept {
  return {Ipv4{address.value & mask().value}, prefix_len};
}

bool Ipv4Network::contains(Ipv4 candidate) const noexcept {
  return (candidate.value & mask().value) == network().address.value;
}

std::string to_string(const Ipv4Network& net) {
  return to_string(net.address) + '/' + std::to_string(net.prefix_len);
}

Ipv4 validate_ipv4(std::string_view text) {
  auto parsed = parse_quad(text);
  if (parsed.error) {
    const std::string what = *parsed.error == ErrorCode::IpOctetRange
                                 ? "octet out of range in address '"
                                 : "malformed IPv4 address '";
    throw Error(*parsed.error, what + std::string(text) + "'");
  }
  const auto& o = parsed.octets;
  return Ipv4{(o[0] << 24) | (o[1] << 16) | (o[2] << 8) | o[3]};
}

std::optional<ErrorCode> check_ipv4(std::string_view text) noexcept {
  return parse_quad(text).error;
}

Ipv4 prefix_to_mask(int prefix_len) {
  if (prefix_len < 0 || prefix_len > 32) {
    throw Error(ErrorCode::IpMalformed, "prefix length out of range: " + std::to_string(prefix_len));
  }
  return Ipv4Network{Ipv4{0}, prefix_len}.mask();
}

int mask_to_prefix(Ipv4 mask) {
  const std::uint32_t inverted = ~mask.value;
  // Contiguous ones then zeros <=> the inverted mask is 2^k - 1.
  if ((inverted & (inverted + 1)) != 0) {
    throw Error(ErrorCode::NonContiguousMask, "non-contiguous subnet mask " + to_string(mask));
  }
  return std::popcount(mask.value);
}

Ipv4Network parse_ipv4_network(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorCode::IpMalformed, "missing prefix length in '" + std::string(text) + "'");
  }
  Ipv4 address = validate_ipv4(text.substr(0, slash));
  auto len = text.substr(slash + 1);
  int prefix = -1;
  if (all_digits(len) && len.size() <= 2) {
    std::from_chars(len.data(), len.data() + len.size(), prefix);
  }
  if (prefix < 0 || prefix > 32) {
    throw Error(ErrorCode::IpMalformed, "invalid prefix length in '" + std::string(text) + "'");
  }
  return {address, prefix};
}

std::optional<int> parse_prefix_or_mask(std::string_view text) noexcept {
  if (all_digits(text) && text.size() <= 2) {
    int prefix = 0;
    std::from_chars(text.data(), text.data() + text.size(), prefix);
    if (prefix <= 32) return prefix;
    return std::nullopt;
  }
  if (check_ipv4(text)) return std::nullopt;
  try {
    return mask_to_prefix(validate_ipv4(text));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace t2n
