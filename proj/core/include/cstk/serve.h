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

#ifndef CSTK_SERVE_H_
#define CSTK_SERVE_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cstk/advisor.h"
#include "cstk/model_io.h"

namespace cstk {

// Shared, read-only state of the scorer.
struct ServeContext {
  SavedModel model;
  CauseMapping mapping = CauseMapping::defaults();
  std::size_t top_n = 5;                       // ranked attributes used for causes
  double threshold = kDefaultAdviceThreshold;  // discomfort probability cutoff
  std::size_t refresh_every = 100;             // frames between cause refreshes
};

// Throws SchemaMismatch unless the model was trained on the registry layout.
void check_servable(const ServeContext& context);

// Message handling for one connection. Each request line yields exactly one
// reply line; state for a session lives from its hello to its end.
class ServeConnection {
 public:
  explicit ServeConnection(const ServeContext& context);
  ~ServeConnection();
  ServeConnection(const ServeConnection&) = delete;
  ServeConnection& operator=(const ServeConnection&) = delete;

  // `line` excludes the terminating LF; `stream_offset` is the byte offset
  // of its first character within the connection. Returns the reply
  // without a trailing LF.
  std::string handle_line(std::string_view line, std::size_t stream_offset = 0);

  std::size_t open_sessions() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Reads LF-terminated requests from `in` until EOF and writes one reply line
// per request to `out`, flushing after each.
void serve_stream(const ServeContext& context, std::istream& in, std::ostream& out);

// Line-delimited JSON over TCP; one thread per connection.
class TcpServer {
 public:
  // Binds and listens immediately; port 0 picks an ephemeral port. Throws
  // std::runtime_error on socket errors.
  TcpServer(const ServeContext& context, std::uint16_t port,
            const std::string& host = "127.0.0.1");
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Accepts connections until stop() is called.
  void run();
  // Safe to call from any thread; wakes run() and closes client sockets.
  void stop();

 private:
  void handle_client(int fd);

  const ServeContext& context_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> clients_;
  std::vector<std::thread> workers_;
};

}  // namespace cstk

#endif  // CSTK_SERVE_H_
