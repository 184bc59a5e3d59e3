/*
 * Copyright 2026 The cstk Authors.
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

#ifndef CSTK_SESSION_IO_H_
#define CSTK_SESSION_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/dataset.h"
#include "cstk/session.h"

namespace cstk {

enum class DataFormat { kJsonl, kCsv };

DataFormat parse_format(std::string_view text);

// Reads session records, one JSON object per line (blank lines skipped).
// Unknown keys are rejected. Every record is validated; the first violation
// aborts with a ParseError carrying the line number, session id and field.
// The CSV format holds assembled feature rows, not sessions: asking for it
// here throws std::invalid_argument (use read_features_csv).
std::vector<SessionRecord> parse_sessions(std::istream& in, DataFormat format);
std::vector<SessionRecord> parse_sessions_file(const std::string& path);

std::string session_to_json(const SessionRecord& session);
SessionRecord session_from_json(std::string_view text);
void write_sessions_jsonl(std::ostream& out,
                          std::span<const SessionRecord> sessions);

// Flat feature CSV: schema columns, then label, session_id, timestamp.
void write_features_csv(std::ostream& out, const Dataset& dataset);

// Reads a feature CSV written for `scheme`. The header must be exactly the
// registry names followed by label, session_id, timestamp.
Dataset read_features_csv(std::istream& in, LabelScheme scheme);

// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace cstk

#endif  // CSTK_SESSION_IO_H_
