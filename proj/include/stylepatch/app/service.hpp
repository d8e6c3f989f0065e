#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "stylepatch/app/persona.hpp"
#include "stylepatch/engine.hpp"

namespace stylepatch::app {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON, UTF-8
};

struct PersonaSource {
  std::filesystem::path bundle;
  std::optional<std::filesystem::path> repository;  // overrides the bundle's
};

/// JSON chat API over one active persona at a time.
///
///   POST /api/chat[?debug=true]  {session_id, text} -> ApiMessage
///   GET  /api/personas           -> [{name, active}]
///   GET  /api/config             -> {persona, trigger_rate, threshold}
///   PUT  /api/config             {persona?, trigger_rate?} -> same as GET
///   GET  /api/session/{id}       -> {session_id, turns: [{user, reply, triggered}]}
///   GET  /api/health             -> {status: "ok"}
///
/// Errors are {code, message}: 400 malformed request, 404 unknown route or
/// session, 422 unknown persona.
class ChatService {
 public:
  /// The first source is active. With `preload` every persona is loaded up
  /// front; otherwise on first activation.
  ChatService(std::vector<PersonaSource> personas, std::shared_ptr<const Repository> generic,
              bool preload = false);

  ApiResponse handle(const ApiRequest& request);

  [[nodiscard]] std::shared_ptr<Engine> active_engine() const;

 private:
  struct Slot {
    PersonaSource source;
    std::string name;
    std::shared_ptr<Engine> engine;  // null until loaded
  };
  struct Active {
    std::string name;
    std::shared_ptr<Engine> engine;
  };

  std::shared_ptr<Engine> ensure_loaded(Slot& slot);
  ApiResponse chat(const ApiRequest& request);
  ApiResponse get_config() const;
  ApiResponse put_config(const ApiRequest& request);
  ApiResponse personas() const;
  ApiResponse session(const std::string& id) const;

  std::shared_ptr<const Repository> generic_;
  std::vector<Slot> slots_;
  mutable std::mutex slots_mutex_;   // guards slot loading and config writes
  mutable std::mutex active_mutex_;  // guards the active pointer swap
  std::shared_ptr<const Active> active_;
  SessionStore sessions_;
  std::atomic<std::size_t> next_session_{1};
};

/// Runs a ChatService behind cpp-httplib on a background thread.
class HttpServer {
 public:
  explicit HttpServer(ChatService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and starts listening; port 0 picks a free port. Returns the port.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread.
  bool listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stylepatch::app
