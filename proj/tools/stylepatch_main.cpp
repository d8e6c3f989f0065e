// stylepatch: rewrite a generic dialogue corpus into a persona-styled
// repository and serve it.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "stylepatch/app/commands.hpp"
#include "stylepatch/app/persona.hpp"
#include "stylepatch/app/service.hpp"
#include "stylepatch/error.hpp"

namespace {

stylepatch::app::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace stylepatch::app;

  CLI::App app{"Persona style patch for retrieval-based dialogue"};
  app.require_subcommand(1);
  const std::string persona_help =
      std::string("persona bundle (JSON); defaults to $") + kConfigEnv;

  RewriteOptions rewrite;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "rewrite a dialogue corpus into a stylized repository");
  rewrite_cmd->add_option("--corpus", rewrite.corpus, "generic corpus, context TAB response")->required();
  rewrite_cmd->add_option("--persona", rewrite.persona, persona_help);
  rewrite_cmd->add_option("--out", rewrite.out, "stylized repository output (JSON lines)")->required();

  IndexOptions index;
  auto* index_cmd = app.add_subcommand("index", "build the context index and write a postings snapshot");
  index_cmd->add_option("--repository", index.repository, "stylized repository")->required();
  index_cmd->add_option("--out", index.out, "snapshot output")->required();

  auto add_serving = [&](CLI::App* cmd, ServingOptions& o) {
    cmd->add_option("--persona", o.persona, persona_help);
    cmd->add_option("--repository", o.repository, "stylized repository (defaults to the bundle's)");
    cmd->add_option("--corpus", o.corpus, "generic corpus used for fallback")->required();
    cmd->add_option("--trigger-rate", o.trigger_rate, "fraction of stylized pairs allowed to trigger")
        ->check(CLI::Range(0.0, 1.0));
  };

  ChatOptions chat;
  auto* chat_cmd = app.add_subcommand("chat", "interactive REPL on stdin");
  add_serving(chat_cmd, chat);
  chat_cmd->add_flag("--debug", chat.debug, "print ranked candidates");

  EvalOptions eval;
  std::string rates = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  auto* eval_cmd = app.add_subcommand("eval", "trigger-rate sweep with proxy metrics");
  add_serving(eval_cmd, eval);
  eval_cmd->add_option("--queries", eval.queries, "one query per line")->required();
  eval_cmd->add_option("--rates", rates, "comma-separated ascending trigger rates")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "sweep CSV output")->required();

  std::vector<std::string> serve_personas;
  std::filesystem::path serve_corpus;
  std::string host = "127.0.0.1";
  int port = 8080;
  bool preload = false;
  auto* serve_cmd = app.add_subcommand("serve", "JSON chat API over HTTP");
  serve_cmd->add_option("--persona", serve_personas, "persona bundle; repeat for hot-swappable personas");
  serve_cmd->add_option("--corpus", serve_corpus, "generic corpus used for fallback")->required();
  serve_cmd->add_option("--host", host, "listen address")->capture_default_str();
  serve_cmd->add_option("--port", port, "listen port")->capture_default_str();
  serve_cmd->add_flag("--preload", preload, "load every persona at startup");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  return guarded(std::cerr, [&]() -> int {
    if (*rewrite_cmd) {
      cmd_rewrite(rewrite, std::cout, std::cerr);
    } else if (*index_cmd) {
      cmd_index(index, std::cout);
    } else if (*chat_cmd) {
      cmd_chat(chat, std::cin, std::cout);
    } else if (*eval_cmd) {
      eval.rates = parse_rates(rates);
      cmd_eval(eval, std::cout);
    } else if (*serve_cmd) {
      if (serve_personas.empty()) {
        const char* env = std::getenv(kConfigEnv);
        if (env == nullptr || *env == '\0') {
          throw stylepatch::InputError(std::string("no --persona given and $") + kConfigEnv + " is unset");
        }
        serve_personas.emplace_back(env);
      }
      std::vector<PersonaSource> sources;
      for (const auto& p : serve_personas) sources.push_back({p, std::nullopt});
      ChatService service(std::move(sources), load_generic(serve_corpus), preload);
      HttpServer server(service);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving on http://" << host << ":" << port << '\n';
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << '\n';
        return kExitRuntime;
      }
      g_server = nullptr;
    }
    return kExitOk;
  });
}
