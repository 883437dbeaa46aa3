// SPDX-License-Identifier: Apache-2.0
#include "t2n/scs.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "t2n/error.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

const ScsEntry* ScsDocument::find(std::string_view key) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const ScsEntry& e) { return e.key == key; });
  return it == entries.end() ? nullptr : &*it;
}

std::size_t ScsDocument::line_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.lines.size();
  return n;
}

std::string_view to_string(ScsLineKind kind) {
  switch (kind) {
    case ScsLineKind::TypeDecl: return "TypeDecl";
    case ScsLineKind::NameDecl: return "NameDecl";
    case ScsLineKind::InterfaceDecl: return "InterfaceDecl";
    case ScsLineKind::StaticRouteDecl: return "StaticRouteDecl";
    case ScsLineKind::ConnectionDecl: return "ConnectionDecl";
    case ScsLineKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool is_device_identifier(std::string_view text) noexcept {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
}

bool is_connection_key(std::string_view key) noexcept {
  return key.find(',') != std::string_view::npos;
}

std::vector<std::string> split_key(std::string_view key) {
  std::vector<std::string> parts;
  for (auto part : split(key, ',')) parts.emplace_back(trim(part));
  return parts;
}

namespace {

bool split_endpoint(std::string_view token, std::string& device, std::string& iface) {
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return false;
  device = std::string(token.substr(0, dot));
  iface = std::string(token.substr(dot + 1));
  return is_device_identifier(device) && !iface.empty();
}

ScsStatement parse_interface(const std::vector<std::string_view>& tok) {
  InterfaceDecl decl;
  std::size_t i = 1;
  std::vector<std::string_view> name;
  while (i < tok.size() && lower(tok[i]) != "ip") name.push_back(tok[i++]);
  if (name.empty()) return UnknownDecl{};
  decl.ifname = join(name, " ");
  if (i == tok.size()) return decl;
  // "ip" seen
  if (++i == tok.size()) return UnknownDecl{};
  std::string_view addr = tok[i++];
  if (auto slash = addr.find('/'); slash != std::string_view::npos) {
    decl.address = std::string(addr.substr(0, slash));
    decl.mask = std::string(addr.substr(slash + 1));
    if (decl.mask.empty()) return UnknownDecl{};
  } else {
    decl.address = std::string(addr);
  }
  if (i == tok.size()) return decl;
  if (!decl.mask.empty() || lower(tok[i]) != "mask" || i + 2 != tok.size()) return UnknownDecl{};
  decl.mask = std::string(tok[i + 1]);
  return decl;
}

ScsStatement parse_route(const std::vector<std::string_view>& tok) {
  StaticRouteDecl decl;
  std::size_t i = 1;
  if (i < tok.size() && lower(tok[i]) != "via") decl.destination = std::string(tok[i++]);
  if (i < tok.size()) {
    if (lower(tok[i]) != "via" || i + 2 != tok.size()) return UnknownDecl{};
    decl.via = std::string(tok[i + 1]);
  }
  return decl;
}

}  // namespace

ScsStatement parse_statement(std::string_view line) {
  const auto tok = split_ws(line);
  if (tok.empty()) return UnknownDecl{};
  const std::string head = lower(tok[0]);

  if (head == "type") {
    if (tok.size() != 2) return UnknownDecl{};
    std::string value = lower(tok[1]);
    if (value != "router" && value != "switch" && value != "pc") return UnknownDecl{};
    return TypeDecl{value};
  }
  if (head == "name") {
    if (tok.size() != 2 || !is_device_identifier(tok[1])) return UnknownDecl{};
    return NameDecl{std::string(tok[1])};
  }
  if (head == "interface") return parse_interface(tok);
  if (head == "static_route") return parse_route(tok);
  if (tok.size() == 3 && tok[1] == "<->") {
    ConnectionDecl decl;
    if (split_endpoint(tok[0], decl.device_a, decl.iface_a) &&
        split_endpoint(tok[2], decl.device_b, decl.iface_b)) {
      return decl;
    }
  }
  return UnknownDecl{};
}

ScsLine classify_line(std::string_view line) {
  return ScsLine{static_cast<ScsLineKind>(parse_statement(line).index()), std::string(line)};
}

ScsDocument parse_scs(std::string_view text) {
  ScsDocument doc;
  doc.source_text = std::string(text);
  std::unordered_map<std::string, std::size_t> index;

  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": missing 'KEY:' prefix");
    }
    std::string_view key_text = trim(line.substr(0, colon));
    std::string_view content = trim(line.substr(colon + 1));

    const auto parts = split_key(key_text);
    if (parts.size() > 2) {
      throw Error(ErrorCode::KeyArityError, "line " + std::to_string(line_no) + ": key '" +
                                                std::string(key_text) + "' names more than two devices");
    }
    for (const auto& p : parts) {
      if (!is_device_identifier(p)) {
        throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) +
                                                  ": invalid device identifier '" + p + "'");
      }
    }
    if (content.empty()) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": empty statement");
    }

    std::string key = parts.size() == 2 ? parts[0] + "," + parts[1] : parts[0];
    auto [it, inserted] = index.try_emplace(key, doc.entries.size());
    if (inserted) doc.entries.push_back(ScsEntry{key, {}});
    doc.entries[it->second].lines.emplace_back(content);
  }

  if (doc.entries.empty()) throw Error(ErrorCode::EmptyDocument, "SCS document has no statements");
  return doc;
}

std::string render_scs(const ScsDocument& doc) {
  std::string out;
  for (const auto& entry : doc.entries) {
    for (const auto& line : entry.lines) {
      out += entry.key;
      out += ": ";
      out += line;
      out += '\n';
    }
  }
  return out;
}

}  // namespace t2n
