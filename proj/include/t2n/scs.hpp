// SPDX-License-Identifier: Apache-2.0
//
// Structured Command Strings: one statement per line, "KEY: content".
//
//   R-1: type router
//   R-1: name R-1
//   R-1: interface GigabitEthernet0/0 ip 192.168.0.1/24
//   R-1: interface gi 0/1 ip 10.0.0.1 mask 255.255.255.0
//   R-1: static_route 192.168.100.0/24 via R-2
//   R-1,R-2: R-1.GigabitEthernet0/0 <-> R-2.GigabitEthernet0/0
//
// A key is a device identifier or two identifiers joined by one comma.
// Blank lines and lines starting with '#' are ignored.
#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace t2n {

struct ScsEntry {
  std::string key;
  std::vector<std::string> lines;

  bool operator==(const ScsEntry&) const = default;
};

struct ScsDocument {
  std::vector<ScsEntry> entries;  // first-appearance order of keys
  std::string source_text;

  const ScsEntry* find(std::string_view key) const;
  std::size_t line_count() const;

  // source_text is provenance only; equality is over entries.
  bool operator==(const ScsDocument& other) const { return entries == other.entries; }
};

enum class ScsLineKind { TypeDecl, NameDecl, InterfaceDecl, StaticRouteDecl, ConnectionDecl, Unknown };

std::string_view to_string(ScsLineKind kind);

struct ScsLine {
  ScsLineKind kind = ScsLineKind::Unknown;
  std::string raw;
};

struct TypeDecl {
  std::string node_type;  // lowercase: router, switch or pc
};
struct NameDecl {
  std::string hostname;
};
struct InterfaceDecl {
  std::string ifname;   // as written; normalized by the extractor
  std::string address;  // empty when absent
  std::string mask;     // prefix length digits or dotted mask; empty when absent
};
struct StaticRouteDecl {
  std::string destination;  // "a.b.c.d/len"; empty when absent
  std::string via;          // address or device name; empty when absent
};
struct ConnectionDecl {
  std::string device_a, iface_a, device_b, iface_b;
};
struct UnknownDecl {};

using ScsStatement =
    std::variant<TypeDecl, NameDecl, InterfaceDecl, StaticRouteDecl, ConnectionDecl, UnknownDecl>;

ScsStatement parse_statement(std::string_view line);
ScsLine classify_line(std::string_view line);

bool is_device_identifier(std::string_view text) noexcept;
bool is_connection_key(std::string_view key) noexcept;
/// Splits "A,B" into {"A","B"}; a single identifier yields one element.
std::vector<std::string> split_key(std::string_view key);

/// Throws Error{MalformedLine | KeyArityError | EmptyDocument}.
ScsDocument parse_scs(std::string_view text);

std::string render_scs(const ScsDocument& doc);

}  // namespace t2n
