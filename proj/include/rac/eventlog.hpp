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

#ifndef RAC_EVENTLOG_HPP_
#define RAC_EVENTLOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rac/core.hpp"

namespace rac {

// One line of an event log. Actors are "n<value>" for nodes, "c<id>" for
// clients and "sim" for the harness.
struct LogRecord {
  SimTime time = 0;
  std::string actor;
  std::uint64_t term = 0;
  std::string role;
  std::string event;
  // Space-separated key=value pairs.
  std::string detail;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

using EventLog = std::vector<LogRecord>;

inline constexpr std::string_view kLogHeader = "time_us\tactor\tterm\trole\tevent\tdetail";

// Tab-separated, fields in declaration order.
std::string format_record(const LogRecord& record);
LogRecord parse_record(std::string_view line);
void write_log(std::ostream& os, const EventLog& log);
// Throws kParseError with the line number.
EventLog read_log(std::istream& is);

std::optional<std::string_view> detail_field(std::string_view detail, std::string_view key);
std::optional<std::uint64_t> detail_uint(std::string_view detail, std::string_view key);

}  // namespace rac

#endif  // RAC_EVENTLOG_HPP_
