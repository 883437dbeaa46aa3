// SPDX-License-Identifier: Apache-2.0
//
// Constrained-English to SCS. Covers the sentence families used to describe
// small static-routing labs: device declarations, interface + address in
// slash or mask form, links, loopbacks as internal networks, and static
// route statements with or without detail. Not an open-domain parser.
#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <span>

#include "t2n/error.hpp"
#include "t2n/extractor.hpp"
#include "t2n/llm_adapter.hpp"
#include "t2n/text_util.hpp"

namespace t2n {

namespace {

struct Token {
  std::string text;    // punctuation stripped, original case
  std::string folded;  // lowercase
  bool device = false;
};

bool is_device_name(std::string_view s) {
  std::size_t i = 0;
  if (s.starts_with("PC") || s.starts_with("SW")) {
    i = 2;
  } else if (s.starts_with("R")) {
    i = 1;
  } else {
    return false;
  }
  if (i < s.size() && s[i] == '-') ++i;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

bool is_interface_number(std::string_view s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())) || s.back() == '/') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) || c == '/'; });
}

// Dotted quad with any digit counts (range checks belong to the validator),
// optionally followed by /len.
bool is_address_token(std::string_view s) {
  const auto slash = s.find('/');
  std::string_view quad = s.substr(0, slash);
  int dots = 0;
  bool digit_run = false;
  for (char c : quad) {
    if (c == '.') {
      if (!digit_run) return false;
      ++dots;
      digit_run = false;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digit_run = true;
    } else {
      return false;
    }
  }
  if (dots != 3 || !digit_run) return false;
  if (slash == std::string_view::npos) return true;
  std::string_view len = s.substr(slash + 1);
  return !len.empty() && std::all_of(len.begin(), len.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string replace_typography(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // UTF-8 curly quotes: E2 80 98/99 (single), E2 80 9C/9D (double).
    if (static_cast<unsigned char>(text[i]) == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto third = static_cast<unsigned char>(text[i + 2]);
      if (third == 0x98 || third == 0x99) {
        out += '\'';
        i += 2;
        continue;
      }
      if (third == 0x9C || third == 0x9D) {
        out += ' ';
        i += 2;
        continue;
      }
    }
    out += text[i] == '"' ? ' ' : text[i];
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!trim(current).empty()) out.emplace_back(trim(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool boundary_next = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (c == '\n' || ((c == '.' || c == '?' || c == '!') && boundary_next)) {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> out;
  for (auto raw : split_ws(sentence)) {
    std::string_view t = raw;
    auto strip = [](char c) { return std::string_view(",;:()[]{}'.").find(c) != std::string_view::npos; };
    while (!t.empty() && strip(t.front())) t.remove_prefix(1);
    while (!t.empty() && strip(t.back())) t.remove_suffix(1);
    if (t.ends_with("'s")) t.remove_suffix(2);
    if (t.empty()) continue;
    Token tok{std::string(t), lower(t), false};
    tok.device = is_device_name(tok.text);
    out.push_back(std::move(tok));
  }
  return out;
}

struct InterfaceHit {
  std::size_t end = 0;  // one past the last consumed token
  std::string raw;
};

std::optional<InterfaceHit> match_interface(std::span<const Token> tok, std::size_t i) {
  static const std::set<std::string> kShort{"gi", "gig", "fa", "lo", "gigabitethernet", "fastethernet"};
  const std::string& t = tok[i].folded;
  auto at = [&](std::size_t k) -> std::string_view {
    return k < tok.size() ? std::string_view(tok[k].folded) : std::string_view();
  };

  for (std::string_view family : {"gigabitethernet", "fastethernet", "loopback", "gig", "gi", "fa", "lo"}) {
    if (t.size() > family.size() && t.starts_with(family) && is_interface_number(std::string_view(t).substr(family.size()))) {
      return InterfaceHit{i + 1, t};
    }
  }
  if (kShort.count(t) && is_interface_number(at(i + 1))) return InterfaceHit{i + 2, t + " " + std::string(at(i + 1))};
  if ((t == "gigabit" || t == "fast") && at(i + 1) == "ethernet" && is_interface_number(at(i + 2))) {
    return InterfaceHit{i + 3, t + " ethernet " + std::string(at(i + 2))};
  }
  if (t == "loopback") {
    if (is_interface_number(at(i + 1))) return InterfaceHit{i + 2, "loopback " + std::string(at(i + 1))};
    if (at(i + 1) == "interface" && is_interface_number(at(i + 2))) {
      return InterfaceHit{i + 3, "loopback " + std::string(at(i + 2))};
    }
  }
  return std::nullopt;
}

struct DraftInterface {
  std::string name;
  std::string address;
  std::string mask;
  std::string peer;
};

struct DraftDevice {
  std::string name;
  std::vector<DraftInterface> interfaces;

  DraftInterface& interface(const std::string& canonical) {
    for (auto& i : interfaces) {
      if (i.name == canonical) return i;
    }
    interfaces.push_back(DraftInterface{canonical, {}, {}, {}});
    return interfaces.back();
  }
};

struct PendingAddress {
  std::string owner;
  std::string peer;
  std::string address;
  std::string mask;
  std::size_t sentence = 0;
};

struct RouteIntent {
  std::string owner;
  std::string target;       // device to reach, or
  std::string destination;  // explicit network
  std::string via;
};

struct DraftRoute {
  std::string destination;
  std::string via;
};

[[noreturn]] void unparsable(std::size_t sentence, const std::string& why) {
  throw Error(ErrorCode::UnparsableSentence, "sentence " + std::to_string(sentence) + ": " + why);
}

bool subset_of(std::span<const Token> tokens, const std::set<std::string_view>& allowed) {
  return std::all_of(tokens.begin(), tokens.end(), [&](const Token& t) { return allowed.count(t.folded) > 0; });
}

class Converter {
 public:
  void sentence(std::span<const Token> tok, std::size_t index) {
    for (const auto& t : tok) {
      if (t.device) device(t.text);
    }
    const auto first_device = std::find_if(tok.begin(), tok.end(), [](const Token& t) { return t.device; });
    const bool pronoun = !tok.empty() && tok.front().folded == "it";
    if (!pronoun && first_device != tok.end()) subject_ = first_device->text;

    if (mentions_static_route(tok)) {
      routes_in(tok);
      return;
    }

    static const std::set<std::string_view> kOwnerFillers{"interface", "corresponding", "has", "a", "an", "also"};
    static const std::set<std::string_view> kAddressFillers{"ip", "address", "assigned", "is", "the", "set", "to",
                                                            "on", "this", "interface", "being", "has", "an"};
    std::vector<std::pair<std::string, std::string>> mentioned;  // (owner, interface) in order
    std::set<std::size_t> consumed;
    std::optional<std::size_t> last_device;

    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (consumed.count(i)) continue;
      if (tok[i].device) {
        last_device = i;
        continue;
      }
      if (auto hit = match_interface(tok, i)) {
        std::string owner;
        std::string peer;
        if (last_device && subset_of(tok.subspan(*last_device + 1, i - *last_device - 1), kOwnerFillers)) {
          owner = tok[*last_device].text;
        } else {
          if (subject_.empty()) unparsable(index, "interface mentioned before any device");
          owner = subject_;
          if (last_device && tok[*last_device].text != owner) peer = tok[*last_device].text;
        }
        std::string canonical;
        try {
          canonical = normalize_interface_name(hit->raw);
        } catch (const Error& e) {
          unparsable(index, e.what());
        }
        auto& iface = device(owner).interface(canonical);
        if (iface.peer.empty()) iface.peer = peer;
        mentioned.emplace_back(owner, canonical);
        i = hit->end - 1;
        continue;
      }
      if (is_address_token(tok[i].text)) {
        std::string address = tok[i].text;
        std::string mask;
        if (auto slash = address.find('/'); slash != std::string::npos) {
          mask = address.substr(slash + 1);
          address.resize(slash);
        } else {
          for (std::size_t k = i + 1; k + 1 < tok.size() && k <= i + 3; ++k) {
            if (tok[k].folded == "mask" && is_address_token(tok[k + 1].text)) {
              mask = tok[k + 1].text;
              consumed.insert(k + 1);
              break;
            }
          }
        }
        std::string explicit_owner;
        if (last_device && subset_of(tok.subspan(*last_device + 1, i - *last_device - 1), kAddressFillers)) {
          explicit_owner = tok[*last_device].text;
        }
        const std::pair<std::string, std::string>* target = nullptr;
        for (auto it = mentioned.rbegin(); it != mentioned.rend(); ++it) {
          if (explicit_owner.empty() || it->first == explicit_owner) {
            target = &*it;
            break;
          }
        }
        if (target != nullptr && device(target->first).interface(target->second).address.empty()) {
          auto& iface = device(target->first).interface(target->second);
          iface.address = address;
          iface.mask = mask;
        } else {
          std::string owner = explicit_owner.empty() ? subject_ : explicit_owner;
          if (owner.empty()) unparsable(index, "address " + address + " has no owning device");
          pending_.push_back(PendingAddress{owner, owner != subject_ ? subject_ : std::string(), address, mask, index});
        }
      }
    }
  }

  RulesResult finish() {
    if (devices_.empty()) unparsable(0, "no network devices recognized");
    for (const auto& p : pending_) place_pending(p);

    compute_links();
    std::map<std::string, std::vector<DraftRoute>> routes;
    for (const auto& intent : intents_) expand(intent, routes);

    if (intents_.empty() && vague_routes_) {
      Finding finding{Severity::MissingInfo, std::string(codes::kRouteDetailsMissing), "static_routes",
                      "static routes are mentioned without source, destination or next hop",
                      "source,destination,via"};
      ClarifyOutcome clarify;
      clarify.report = make_report({finding});
      clarify.request = make_clarification(*clarify.report);
      clarify.question = clarify.request.prompt;
      return clarify;
    }

    std::string out;
    for (const auto& d : devices_) {
      out += d.name + ": type " + node_type_for(d.name) + "\n";
      for (const auto& i : d.interfaces) {
        out += d.name + ": interface " + i.name;
        if (!i.address.empty()) {
          out += " ip " + i.address;
          if (auto len = parse_prefix_or_mask(i.mask)) {
            out += "/" + std::to_string(*len);
          } else if (!i.mask.empty()) {
            out += (i.mask.find('.') == std::string::npos ? "/" : " mask ") + i.mask;
          }
        }
        out += "\n";
      }
      for (const auto& r : routes[d.name]) {
        out += d.name + ": static_route";
        if (!r.destination.empty()) out += " " + r.destination;
        if (!r.via.empty()) out += " via " + r.via;
        out += "\n";
      }
    }
    for (const auto& [a, b] : links_) {
      out += a.device + "," + b.device + ": " + a.device + "." + a.interface + " <-> " + b.device + "." +
             b.interface + "\n";
    }
    return out;
  }

 private:
  DraftDevice& device(const std::string& name) {
    for (auto& d : devices_) {
      if (d.name == name) return d;
    }
    devices_.push_back(DraftDevice{name, {}});
    return devices_.back();
  }

  static std::string node_type_for(const std::string& name) {
    if (name.starts_with("PC")) return "pc";
    if (name.starts_with("SW")) return "switch";
    return "router";
  }

  static bool mentions_static_route(std::span<const Token> tok) {
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      if (tok[i].folded == "static" && tok[i + 1].folded.starts_with("rout")) return true;
    }
    return false;
  }

  void routes_in(std::span<const Token> tok) {
    struct Anchor {
      std::size_t start;
      std::string owner;
      std::string second;  // "between A and B" partner
    };
    std::vector<Anchor> anchors;
    bool both_ways = false;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      const auto& w = tok[i].folded;
      if ((w == "on" || w == "from") && tok[i + 1].device) {
        anchors.push_back({i, tok[i + 1].text, {}});
      } else if (w == "between" && tok[i + 1].device && i + 3 < tok.size() && tok[i + 2].folded == "and" &&
                 tok[i + 3].device) {
        anchors.push_back({i, tok[i + 1].text, tok[i + 3].text});
      } else if (w == "vice" && tok[i + 1].folded == "versa") {
        both_ways = true;
      }
    }
    if (anchors.empty()) {
      vague_routes_ = true;
      return;
    }

    std::string sentence_via;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      if ((tok[i].folded == "through" || tok[i].folded == "via") &&
          (tok[i + 1].device || is_address_token(tok[i + 1].text))) {
        sentence_via = tok[i + 1].text;
      }
    }

    for (std::size_t a = 0; a < anchors.size(); ++a) {
      const auto& anchor = anchors[a];
      if (!anchor.second.empty()) {
        intents_.push_back({anchor.owner, anchor.second, {}, sentence_via});
        intents_.push_back({anchor.second, anchor.owner, {}, sentence_via});
        continue;
      }
      const std::size_t end = a + 1 < anchors.size() ? anchors[a + 1].start : tok.size();
      RouteIntent intent{anchor.owner, {}, {}, {}};
      for (std::size_t i = anchor.start + 2; i < end; ++i) {
        if ((tok[i].folded == "through" || tok[i].folded == "via") && i + 1 < end) {
          intent.via = tok[++i].text;
        } else if (tok[i].device && intent.target.empty() && intent.destination.empty()) {
          intent.target = tok[i].text;
        } else if (is_address_token(tok[i].text) && tok[i].text.find('/') != std::string::npos &&
                   intent.destination.empty() && intent.target.empty()) {
          intent.destination = tok[i].text;
        }
      }
      if (intent.via.empty() && (!intent.target.empty() || !intent.destination.empty())) {
        intent.via = sentence_via;
      }
      intents_.push_back(intent);
      if (both_ways && !intent.target.empty()) {
        intents_.push_back({intent.target, intent.owner, {}, intent.via});
      }
    }
  }

  void place_pending(const PendingAddress& p) {
    auto& dev = device(p.owner);
    DraftInterface* chosen = nullptr;
    std::vector<DraftInterface*> free;
    for (auto& i : dev.interfaces) {
      if (!i.address.empty()) continue;
      free.push_back(&i);
      if (!p.peer.empty() && i.peer == p.peer && chosen == nullptr) chosen = &i;
    }
    if (chosen == nullptr && free.size() == 1) chosen = free.front();
    if (chosen == nullptr) {
      unparsable(p.sentence, "cannot tell which interface of " + p.owner + " holds " + p.address);
    }
    chosen->address = p.address;
    chosen->mask = p.mask;
  }

  static std::optional<Ipv4Network> subnet_of(const DraftInterface& i) {
    if (i.address.empty() || check_ipv4(i.address)) return std::nullopt;
    auto len = parse_prefix_or_mask(i.mask);
    if (!len) return std::nullopt;
    return Ipv4Network{validate_ipv4(i.address), *len}.network();
  }

  static bool is_loopback(const DraftInterface& i) { return i.name.starts_with("Loopback"); }

  void compute_links() {
    std::map<Ipv4Network, std::vector<Endpoint>> by_subnet;
    for (const auto& d : devices_) {
      for (const auto& i : d.interfaces) {
        if (is_loopback(i)) continue;
        if (auto net = subnet_of(i)) by_subnet[*net].push_back(Endpoint{d.name, i.name});
      }
    }
    for (auto& [net, members] : by_subnet) {
      if (members.size() != 2 || members[0].device == members[1].device) continue;
      std::sort(members.begin(), members.end());
      links_.emplace_back(members[0], members[1]);
    }
    std::sort(links_.begin(), links_.end());
  }

  std::vector<std::string> neighbours(const std::string& name) const {
    std::vector<std::string> out;
    for (const auto& [a, b] : links_) {
      if (a.device == name) out.push_back(b.device);
      if (b.device == name) out.push_back(a.device);
    }
    return out;
  }

  // Shortest device path from `from` to `to`, empty when disconnected.
  std::vector<std::string> path(const std::string& from, const std::string& to) const {
    std::map<std::string, std::string> parent{{from, from}};
    std::deque<std::string> queue{from};
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      if (cur == to) break;
      for (const auto& n : neighbours(cur)) {
        if (parent.emplace(n, cur).second) queue.push_back(n);
      }
    }
    if (!parent.count(to)) return {};
    std::vector<std::string> out{to};
    while (out.back() != from) out.push_back(parent.at(out.back()));
    std::reverse(out.begin(), out.end());
    return out;
  }

  const DraftDevice* find(const std::string& name) const {
    for (const auto& d : devices_) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  bool directly_connected(const std::string& name, const Ipv4Network& net) const {
    const auto* d = find(name);
    if (d == nullptr) return false;
    return std::any_of(d->interfaces.begin(), d->interfaces.end(),
                       [&](const DraftInterface& i) { return subnet_of(i) == net; });
  }

  // Loopback networks of the target when it has any, otherwise its subnets
  // the owner is not already attached to.
  std::vector<Ipv4Network> destinations(const std::string& target, const std::string& owner) const {
    std::vector<Ipv4Network> loopbacks;
    std::vector<Ipv4Network> others;
    if (const auto* d = find(target)) {
      for (const auto& i : d->interfaces) {
        auto net = subnet_of(i);
        if (!net) continue;
        if (is_loopback(i)) {
          loopbacks.push_back(*net);
        } else if (!directly_connected(owner, *net)) {
          others.push_back(*net);
        }
      }
    }
    return loopbacks.empty() ? others : loopbacks;
  }

  static void add_route(std::map<std::string, std::vector<DraftRoute>>& routes, const std::string& owner,
                        DraftRoute route) {
    auto& list = routes[owner];
    const bool duplicate = std::any_of(list.begin(), list.end(), [&](const DraftRoute& r) {
      return !route.destination.empty() && r.destination == route.destination;
    });
    if (!duplicate) list.push_back(std::move(route));
  }

  void expand(const RouteIntent& intent, std::map<std::string, std::vector<DraftRoute>>& routes) const {
    if (intent.target.empty()) {
      add_route(routes, intent.owner, DraftRoute{intent.destination, intent.via});
      return;
    }
    // Route the path through the named next hop when one was given.
    std::vector<std::string> hops;
    if (!intent.via.empty() && find(intent.via) != nullptr && intent.via != intent.target) {
      auto tail = path(intent.via, intent.target);
      if (!tail.empty()) {
        hops.push_back(intent.owner);
        hops.insert(hops.end(), tail.begin(), tail.end());
      }
    } else {
      hops = path(intent.owner, intent.target);
    }
    std::string via = intent.via;
    if (via.empty() && hops.size() >= 2) via = hops[1];

    const auto nets = destinations(intent.target, intent.owner);
    if (nets.empty()) {
      add_route(routes, intent.owner, DraftRoute{{}, via});
      return;
    }
    for (const auto& net : nets) {
      add_route(routes, intent.owner, DraftRoute{to_string(net), via});
      // Transit devices need the same destination unless they are attached to it.
      for (std::size_t h = 1; h + 1 < hops.size(); ++h) {
        if (!directly_connected(hops[h], net)) add_route(routes, hops[h], DraftRoute{to_string(net), hops[h + 1]});
      }
    }
  }

  std::vector<DraftDevice> devices_;
  std::vector<PendingAddress> pending_;
  std::vector<RouteIntent> intents_;
  std::vector<std::pair<Endpoint, Endpoint>> links_;
  bool vague_routes_ = false;
  std::string subject_;
};

}  // namespace

RulesResult rules_convert(std::string_view text) {
  Converter converter;
  const auto sentences = split_sentences(replace_typography(text));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto tokens = tokenize(sentences[i]);
    converter.sentence(tokens, i + 1);
  }
  return converter.finish();
}

AdapterOutcome RulesAdapter::do_generate(const AdapterExchange& exchange) const {
  const std::string text = combined_user_text(exchange);
  if (trim(text).empty()) return RejectOutcome{"empty scenario"};
  try {
    auto result = rules_convert(text);
    if (auto* clarify = std::get_if<ClarifyOutcome>(&result)) return std::move(*clarify);
    return ScsOutcome{std::get<std::string>(std::move(result))};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnparsableSentence) throw;
    return RejectOutcome{std::string("could not interpret the scenario (") + e.what() + ")"};
  }
}

}  // namespace t2n
