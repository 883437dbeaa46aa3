// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace t2n {

std::string_view trim(std::string_view s) noexcept;
std::string lower(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);
std::string join(const std::vector<std::string_view>& parts, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_icase(std::string_view s, std::string_view prefix) noexcept;
/// Lowercases and collapses every whitespace run to a single space.
std::string collapse_whitespace(std::string_view s, bool to_lower);

}  // namespace t2n
