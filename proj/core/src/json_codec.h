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

#ifndef CSTK_SRC_JSON_CODEC_H_
#define CSTK_SRC_JSON_CODEC_H_

// Internal JSON mapping of the session types. Not installed.

#include <initializer_list>
#include <string>

#include "cstk/session.h"
#include "json.hpp"

namespace cstk::internal {

using Json = nlohmann::json;

// Throws ParseError if `object` has a key outside `allowed`.
void require_known_keys(const Json& object, const char* context,
                        std::initializer_list<const char*> allowed);

Json to_json(const UserProfile& profile);
Json to_json(const VrsqReport& report);
Json to_json(const GameConfig& config);
Json to_json(const TelemetryFrame& frame);
Json to_json(const SessionRecord& session);

UserProfile profile_from_json(const Json& j);
VrsqReport questionnaire_from_json(const Json& j);
GameConfig config_from_json(const Json& j);
TelemetryFrame frame_from_json(const Json& j);
SessionRecord session_from_json(const Json& j);

}  // namespace cstk::internal

#endif  // CSTK_SRC_JSON_CODEC_H_
