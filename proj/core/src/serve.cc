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

#include "cstk/serve.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "cstk/attributes.h"
#include "cstk/dataset.h"
#include "cstk/errors.h"
#include "json_codec.h"

namespace cstk {
namespace {

using internal::Json;

constexpr std::size_t kMaxLineBytes = 1 << 20;

Json error_reply(const std::string& message) {
  return {{"ok", false}, {"kind", "error"}, {"error", message}};
}

Json suggestions_json(const std::vector<Suggestion>& suggestions) {
  Json out = Json::array();
  for (const auto& s : suggestions) {
    Json strategies = Json::array();
    for (const auto st : s.strategies) strategies.push_back(std::string(to_string(st)));
    Json evidence = Json::array();
    for (const auto& e : s.evidence) evidence.push_back({{"attribute", e.attribute}, {"note", e.note}});
    out.push_back({{"cause", std::string(to_string(s.cause))},
                   {"strategies", strategies},
                   {"evidence", evidence}});
  }
  return out;
}

const Json& required(const Json& message, const char* key) {
  const auto it = message.find(key);
  if (it == message.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string session_id_of(const Json& message) {
  const Json& id = required(message, "session_id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw ParseError("'session_id' must be a non-empty string");
  }
  return id.get<std::string>();
}

}  // namespace

struct ServeConnection::Impl {
  struct Session {
    SessionRecord record;  // profile, questionnaire and config; frames unused
    LabelScheme scheme = LabelScheme::kBinary;
    std::optional<TelemetryFrame> last_frame;
    std::size_t frames_seen = 0;
    double level_sum = 0.0;
    std::vector<AttributeStats> stats{kNumAttributes};
    std::vector<CauseEvidence> causes;
  };

  explicit Impl(const ServeContext& c) : context(c) {}

  void infer(Session& s) const {
    if (!context.model.ranking) {
      s.causes.clear();
      return;
    }
    FrameStats stats;
    if (s.frames_seen > 0) {
      const auto reg = registry();
      for (std::size_t a = 0; a < kNumAttributes; ++a) {
        AttributeStats st = s.stats[a];
        st.mean /= static_cast<double>(s.frames_seen);
        stats.emplace(std::string(reg[a].name), st);
      }
    }
    s.causes = infer_causes(*context.model.ranking, stats, context.top_n, context.mapping).causes;
  }

  Json hello(const Json& m) {
    internal::require_known_keys(m, "hello",
                                 {"kind", "session_id", "profile", "config", "scheme",
                                  "pre_questionnaire"});
    const auto id = session_id_of(m);
    if (sessions.count(id) != 0) return error_reply("session '" + id + "' is already open");
    auto s = std::make_unique<Session>();
    s->record.session_id = id;
    s->record.profile = internal::profile_from_json(required(m, "profile"));
    s->record.config = internal::config_from_json(required(m, "config"));
    if (const auto it = m.find("pre_questionnaire"); it != m.end()) {
      s->record.pre_questionnaire = internal::questionnaire_from_json(*it);
    }
    const Json& scheme = required(m, "scheme");
    if (!scheme.is_string()) throw ParseError("'scheme' must be a string");
    s->scheme = parse_scheme(scheme.get<std::string>());
    if (s->scheme != model_scheme(context.model.model)) {
      return error_reply("scheme '" + scheme.get<std::string>() +
                         "' does not match the model's scheme '" +
                         std::string(to_string(model_scheme(context.model.model))) + "'");
    }
    for (const auto& v : validate_session(s->record).violations) {
      if (v.field != "frames") return error_reply(v.to_string());
    }
    infer(*s);
    Json causes = Json::array();
    for (const auto& c : s->causes) causes.push_back(std::string(to_string(c.cause)));
    Json reply = {{"ok", true},
                  {"kind", "ack"},
                  {"session_id", id},
                  {"scheme", std::string(to_string(s->scheme))},
                  {"causes", causes}};
    sessions.emplace(id, std::move(s));
    return reply;
  }

  Json frame(const Json& m) {
    const auto id = session_id_of(m);
    const auto it = sessions.find(id);
    if (it == sessions.end()) return error_reply("unknown session '" + id + "'");
    Session& s = *it->second;
    internal::require_known_keys(
        m, "frame",
        {"kind", "session_id", "timestamp", "speed", "acceleration", "rotation_x", "rotation_y",
         "rotation_z", "position_x", "position_y", "position_z", "region_of_interest", "fov_size",
         "frame_rate", "reported_discomfort"});
    const TelemetryFrame f = internal::frame_from_json(m);
    const auto violations =
        validate_frame(f, s.last_frame ? &*s.last_frame : nullptr, s.frames_seen);
    for (const auto& v : violations) {
      if (v.message == "timestamp order") {
        sessions.erase(it);
        Json reply = error_reply(v.to_string() + "; session closed");
        reply["session_id"] = id;
        reply["closed"] = true;
        return reply;
      }
    }
    if (!violations.empty()) {
      Json reply = error_reply(violations.front().to_string());
      reply["session_id"] = id;
      return reply;
    }

    const auto values = encode_features(s.record, f);
    const auto dist = predict_distribution(context.model.model, values);
    const int label = predict_label(context.model.model, values);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
      auto& st = s.stats[a];
      if (s.frames_seen == 0) {
        st = {values[a], values[a], values[a]};
      } else {
        st.mean += values[a];
        st.min = std::min(st.min, values[a]);
        st.max = std::max(st.max, values[a]);
      }
    }
    s.last_frame = f;
    ++s.frames_seen;
    s.level_sum += label;
    if (context.refresh_every > 0 && s.frames_seen % context.refresh_every == 0) infer(s);

    const auto suggestions = advise(dist, s.causes, context.threshold);
    return {{"ok", true},
            {"kind", "prediction"},
            {"session_id", id},
            {"frame_index", s.frames_seen - 1},
            {"predicted_class", label},
            {"distribution", dist},
            {"discomfort_probability", discomfort_probability(dist)},
            {"suggestions", suggestions_json(suggestions)}};
  }

  Json end(const Json& m) {
    internal::require_known_keys(m, "end", {"kind", "session_id"});
    const auto id = session_id_of(m);
    const auto it = sessions.find(id);
    if (it == sessions.end()) return error_reply("unknown session '" + id + "'");
    const Session& s = *it->second;
    const double mean =
        s.frames_seen == 0 ? 0.0 : s.level_sum / static_cast<double>(s.frames_seen);
    Json reply = {{"ok", true},
                  {"kind", "summary"},
                  {"session_id", id},
                  {"frames_seen", s.frames_seen},
                  {"mean_predicted_level", mean}};
    sessions.erase(it);
    return reply;
  }

  const ServeContext& context;
  std::map<std::string, std::unique_ptr<Session>, std::less<>> sessions;
};

void check_servable(const ServeContext& context) {
  if (model_checksum(context.model.model) != registry_checksum() ||
      model_attribute_count(context.model.model) != kNumAttributes) {
    throw SchemaMismatch("model was not trained on the registry attribute layout");
  }
}

ServeConnection::ServeConnection(const ServeContext& context)
    : impl_(std::make_unique<Impl>(context)) {}

ServeConnection::~ServeConnection() = default;

std::size_t ServeConnection::open_sessions() const { return impl_->sessions.size(); }

std::string ServeConnection::handle_line(std::string_view line, std::size_t stream_offset) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  Json message;
  try {
    message = Json::parse(line);
  } catch (const Json::parse_error& e) {
    // nlohmann reports the 1-based position of the offending byte.
    const std::size_t within = e.byte > 0 ? e.byte - 1 : 0;
    Json reply = error_reply(std::string("malformed JSON: ") + e.what());
    reply["byte_offset"] = stream_offset + std::min(within, line.size());
    return reply.dump();
  }
  try {
    if (!message.is_object()) throw ParseError("request must be a JSON object");
    const Json& kind = required(message, "kind");
    if (!kind.is_string()) throw ParseError("'kind' must be a string");
    const auto& k = kind.get_ref<const std::string&>();
    if (k == "hello") return impl_->hello(message).dump();
    if (k == "frame") return impl_->frame(message).dump();
    if (k == "end") return impl_->end(message).dump();
    throw ParseError("unknown message kind '" + k + "'");
  } catch (const std::exception& e) {
    Json reply = error_reply(e.what());
    if (message.is_object()) {
      if (const auto it = message.find("session_id"); it != message.end() && it->is_string()) {
        reply["session_id"] = *it;
      }
    }
    return reply.dump();
  }
}

void serve_stream(const ServeContext& context, std::istream& in, std::ostream& out) {
  ServeConnection connection(context);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    out << connection.handle_line(line, offset) << '\n' << std::flush;
    offset += line.size() + 1;
  }
}

TcpServer::TcpServer(const ServeContext& context, std::uint16_t port, const std::string& host)
    : context_(context) {
  check_servable(context);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::runtime_error("invalid IPv4 address '" + host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  stop();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::run() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 200);
    if (ready <= 0 || stopping_) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    clients_.push_back(fd);
    workers_.emplace_back([this, fd] { handle_client(fd); });
  }
}

void TcpServer::stop() {
  stopping_ = true;
  std::lock_guard lock(mutex_);
  for (const int fd : clients_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::handle_client(int fd) {
  ServeConnection connection(context_);
  std::string buffer;
  std::size_t consumed = 0;  // stream offset of buffer[0]
  char chunk[4096];
  const auto send_all = [fd](std::string reply) {
    reply += '\n';
    std::size_t sent = 0;
    while (sent < reply.size()) {
      const auto n = ::send(fd, reply.data() + sent, reply.size() - sent, MSG_NOSIGNAL);
      if (n <= 0) return false;
      sent += static_cast<std::size_t>(n);
    }
    return true;
  };
  bool open = true;
  while (open && !stopping_) {
    const auto n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n', start)) {
      const std::string_view line(buffer.data() + start, nl - start);
      if (!send_all(connection.handle_line(line, consumed + start))) {
        open = false;
        break;
      }
      start = nl + 1;
    }
    buffer.erase(0, start);
    consumed += start;
    if (buffer.size() > kMaxLineBytes) {
      send_all(error_reply("request line exceeds 1 MiB").dump());
      break;
    }
  }
  std::lock_guard lock(mutex_);
  clients_.erase(std::remove(clients_.begin(), clients_.end(), fd), clients_.end());
  ::close(fd);
}

}  // namespace cstk
