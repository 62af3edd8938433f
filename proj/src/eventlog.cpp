/*
 * Copyright 2026 The RAC Simulator Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rac/eventlog.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace rac {

namespace {

template <class T>
T to_number(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

LogRecord parse_line(std::string_view line, std::size_t number) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (int i = 0; i < 5; ++i) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(number) + ": expected 6 fields");
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  fields.push_back(line.substr(start));
  LogRecord r;
  r.time = to_number<SimTime>(fields[0], number);
  r.actor = fields[1];
  r.term = to_number<std::uint64_t>(fields[2], number);
  r.role = fields[3];
  r.event = fields[4];
  r.detail = fields[5];
  return r;
}

}  // namespace

std::string format_record(const LogRecord& r) {
  std::string out = std::to_string(r.time);
  out += '\t';
  out += r.actor;
  out += '\t';
  out += std::to_string(r.term);
  out += '\t';
  out += r.role;
  out += '\t';
  out += r.event;
  out += '\t';
  out += r.detail;
  return out;
}

LogRecord parse_record(std::string_view line) { return parse_line(line, 1); }

void write_log(std::ostream& os, const EventLog& log) {
  os << kLogHeader << '\n';
  for (const auto& r : log) os << format_record(r) << '\n';
}

EventLog read_log(std::istream& is) {
  EventLog log;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (number == 1 && line == kLogHeader) continue;
    if (line.empty()) continue;
    log.push_back(parse_line(line, number));
  }
  return log;
}

std::optional<std::string_view> detail_field(std::string_view detail, std::string_view key) {
  std::size_t pos = 0;
  while (pos < detail.size()) {
    auto end = detail.find(' ', pos);
    if (end == std::string_view::npos) end = detail.size();
    auto token = detail.substr(pos, end - pos);
    if (token.size() > key.size() && token.substr(0, key.size()) == key &&
        token[key.size()] == '=') {
      return token.substr(key.size() + 1);
    }
    pos = end + 1;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> detail_uint(std::string_view detail, std::string_view key) {
  auto v = detail_field(detail, key);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) return std::nullopt;
  return out;
}

}  // namespace rac
