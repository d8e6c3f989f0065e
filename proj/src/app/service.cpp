#include "stylepatch/app/service.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "stylepatch/error.hpp"

namespace stylepatch::app {
namespace {

using nlohmann::json;

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }

ApiResponse error(int status, const std::string& message) {
  return reply(status, json{{"code", status}, {"message", message}});
}

json threshold_json(double tau) { return std::isinf(tau) ? json(nullptr) : json(tau); }

bool flag(const ApiRequest& request, const char* name) {
  const auto it = request.query.find(name);
  return it != request.query.end() && (it->second == "true" || it->second == "1");
}

}  // namespace

ChatService::ChatService(std::vector<PersonaSource> personas,
                         std::shared_ptr<const Repository> generic, bool preload)
    : generic_(std::move(generic)) {
  if (personas.empty()) throw InputError("at least one persona is required");
  for (auto& source : personas) {
    const auto bundle = PersonaBundle::load(source.bundle);
    for (const auto& s : slots_) {
      if (s.name == bundle.name) throw InputError("persona '" + bundle.name + "' given twice");
    }
    slots_.push_back({std::move(source), bundle.name, nullptr});
  }
  if (preload) {
    for (auto& s : slots_) ensure_loaded(s);
  }
  active_ = std::make_shared<const Active>(Active{slots_.front().name, ensure_loaded(slots_.front())});
}

std::shared_ptr<Engine> ChatService::ensure_loaded(Slot& slot) {
  if (slot.engine) return slot.engine;
  const auto bundle = PersonaBundle::load(slot.source.bundle);
  const auto persona = LoadedPersona::load(bundle);
  const auto repo = slot.source.repository ? *slot.source.repository : bundle.repository;
  if (!repo) throw InputError("persona '" + bundle.name + "' has no repository");
  slot.engine = make_engine(persona, *repo, generic_);
  return slot.engine;
}

std::shared_ptr<Engine> ChatService::active_engine() const {
  const std::lock_guard lock(active_mutex_);
  return active_->engine;
}

ApiResponse ChatService::handle(const ApiRequest& request) {
  try {
    const auto& p = request.path;
    const auto& m = request.method;
    if (p == "/api/chat" && m == "POST") return chat(request);
    if (p == "/api/config" && m == "GET") return get_config();
    if (p == "/api/config" && m == "PUT") return put_config(request);
    if (p == "/api/personas" && m == "GET") return personas();
    if (p == "/api/health" && m == "GET") return reply(200, json{{"status", "ok"}});
    constexpr std::string_view session_prefix = "/api/session/";
    if (m == "GET" && p.size() > session_prefix.size() && p.starts_with(session_prefix)) {
      return session(p.substr(session_prefix.size()));
    }
    return error(404, "no route for " + m + " " + p);
  } catch (const json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

ApiResponse ChatService::chat(const ApiRequest& request) {
  const auto body = json::parse(request.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) return error(400, "body must be a JSON object");
  if (!body.contains("text") || !body["text"].is_string()) return error(400, "'text' must be a string");
  const auto text = body["text"].get<std::string>();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return error(400, "'text' is empty");
  std::string session_id;
  if (body.contains("session_id") && !body["session_id"].is_null()) {
    if (!body["session_id"].is_string()) return error(400, "'session_id' must be a string");
    session_id = body["session_id"].get<std::string>();
  }
  if (session_id.empty()) session_id = "s" + std::to_string(next_session_++);

  const auto engine = active_engine();
  const auto session = sessions_.open(session_id);
  const auto r = engine->respond(*session, text);

  json msg{{"session_id", session_id}, {"text", text}, {"reply", r.reply}, {"triggered", r.triggered}};
  if (flag(request, "debug")) {
    json rows = json::array();
    for (const auto& c : r.styled_debug) {
      const auto& pair = engine->styled().at(c.pair_id);
      rows.push_back({{"pair_id", c.pair_id},
                      {"recall_score", c.recall_score},
                      {"rerank_score", c.rerank_score},
                      {"style_confidence", c.style_confidence},
                      {"r_prime", join(pair.r_prime.tokens)},
                      {"r_styled", join(pair.r_styled.tokens)}});
    }
    msg["debug"] = json{{"candidates", rows},
                        {"source_pair", r.source_pair ? json(*r.source_pair) : json(nullptr)},
                        {"fallback", r.fallback},
                        {"threshold", threshold_json(r.threshold)}};
  }
  return reply(200, msg);
}

ApiResponse ChatService::get_config() const {
  std::shared_ptr<const Active> active;
  {
    const std::lock_guard lock(active_mutex_);
    active = active_;
  }
  const auto cfg = active->engine->config();
  return reply(200, json{{"persona", active->name},
                         {"trigger_rate", cfg.trigger_rate},
                         {"threshold", threshold_json(active->engine->threshold())},
                         {"recall_k", cfg.recall_k}});
}

ApiResponse ChatService::put_config(const ApiRequest& request) {
  const auto body = json::parse(request.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) return error(400, "body must be a JSON object");
  std::optional<double> rate;
  if (body.contains("trigger_rate")) {
    if (!body["trigger_rate"].is_number()) return error(400, "'trigger_rate' must be a number");
    rate = body["trigger_rate"].get<double>();
    if (!(*rate >= 0.0 && *rate <= 1.0)) return error(400, "'trigger_rate' must lie in [0, 1]");
  }
  std::optional<std::string> persona;
  if (body.contains("persona")) {
    if (!body["persona"].is_string()) return error(400, "'persona' must be a string");
    persona = body["persona"].get<std::string>();
  }

  {
    const std::lock_guard lock(slots_mutex_);
    std::string name;
    {
      const std::lock_guard active_lock(active_mutex_);
      name = active_->name;
    }
    if (persona) name = *persona;
    Slot* slot = nullptr;
    for (auto& s : slots_) {
      if (s.name == name) slot = &s;
    }
    if (slot == nullptr) return error(422, "unknown persona '" + name + "'");
    auto engine = ensure_loaded(*slot);
    if (rate) engine->set_trigger_rate(*rate);
    auto next = std::make_shared<const Active>(Active{name, std::move(engine)});
    const std::lock_guard active_lock(active_mutex_);
    active_ = std::move(next);
  }
  return get_config();
}

ApiResponse ChatService::personas() const {
  std::string active;
  {
    const std::lock_guard lock(active_mutex_);
    active = active_->name;
  }
  json list = json::array();
  const std::lock_guard lock(slots_mutex_);
  for (const auto& s : slots_) {
    list.push_back({{"name", s.name}, {"active", s.name == active}, {"loaded", s.engine != nullptr}});
  }
  return reply(200, list);
}

ApiResponse ChatService::session(const std::string& id) const {
  const auto s = sessions_.find(id);
  if (!s) return error(404, "unknown session '" + id + "'");
  json turns = json::array();
  for (const auto& t : s->turns()) {
    turns.push_back({{"user", t.user}, {"reply", t.reply}, {"triggered", t.triggered}});
  }
  return reply(200, json{{"session_id", id}, {"turns", turns}});
}

struct HttpServer::Impl {
  explicit Impl(ChatService& s) : service(s) {
    const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request{req.method, req.path, {}, req.body};
      for (const auto& [k, v] : req.params) request.query.emplace(k, v);
      const auto r = service.handle(request);
      res.status = r.status;
      res.set_content(r.body, "application/json; charset=utf-8");
    };
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
    server.Put(".*", dispatch);
    server.Delete(".*", dispatch);
    server.Patch(".*", dispatch);
  }

  ChatService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(ChatService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw InputError("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

bool HttpServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace stylepatch::app
