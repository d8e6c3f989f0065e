#include "stylepatch/app/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stylepatch/app/persona.hpp"
#include "stylepatch/error.hpp"
#include "stylepatch/metrics.hpp"

namespace stylepatch::app {
namespace {

std::string fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::filesystem::path repository_path(const ServingOptions& options, const PersonaBundle& bundle) {
  if (options.repository) return *options.repository;
  if (bundle.repository) return *bundle.repository;
  throw InputError("no repository given and persona '" + bundle.name + "' names none");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void print_debug(std::ostream& out, const Engine& engine, const EngineResponse& r) {
  for (const auto& c : r.styled_debug) {
    const auto& p = engine.styled().at(c.pair_id);
    out << "  styled #" << c.pair_id << " recall=" << fixed(c.recall_score, 4)
        << " rerank=" << fixed(c.rerank_score, 4) << " conf=" << fixed(c.style_confidence, 4)
        << " r'=" << join(p.r_prime.tokens) << " | rY=" << join(p.r_styled.tokens) << '\n';
  }
  for (const auto& c : r.generic_debug) {
    const auto& p = engine.generic().at(c.pair_id);
    out << "  generic #" << c.pair_id << " recall=" << fixed(c.recall_score, 4)
        << " rerank=" << fixed(c.rerank_score, 4) << " r=" << join(p.r.tokens) << '\n';
  }
  if (r.fallback) out << "  (fallback utterance)\n";
}

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

RewriteStats cmd_rewrite(const RewriteOptions& options, std::ostream& out, std::ostream& err) {
  const auto bundle = PersonaBundle::resolve(options.persona);
  LoadReport corpus_report;
  const auto corpus = load_dialogue_corpus(options.corpus, &corpus_report);
  for (const auto& d : corpus_report.diagnostics) err << options.corpus.string() << ": " << d << '\n';
  const auto persona = LoadedPersona::load(bundle);
  for (const auto& d : persona.lexicon_report.diagnostics) {
    err << bundle.lexicon.string() << ": " << d << '\n';
  }
  const auto result = rewrite_corpus(corpus, persona.style, bundle.policy);
  save_repository(options.out, result.repository);

  const auto& s = result.stats;
  out << "persona\t" << bundle.name << '\n'
      << "pairs\t" << s.pairs << '\n'
      << "skipped_lines\t" << corpus_report.skipped << '\n'
      << "rewritten\t" << s.rewritten << '\n'
      << "copied\t" << s.copied << '\n'
      << "candidates\t" << s.candidates << '\n'
      << "accepted\t" << s.accepted << '\n'
      << "mean_fluency\t" << fixed(s.mean_fluency) << '\n';
  return s;
}

void cmd_index(const IndexOptions& options, std::ostream& out) {
  const auto pairs = load_repository(options.repository);
  const auto index = InvertedIndex::build(pairs);
  std::ofstream snapshot(options.out, std::ios::binary);
  if (!snapshot) throw InputError("cannot write " + options.out.string());
  index.write_snapshot(snapshot);
  out << "documents\t" << index.doc_count() << '\n'
      << "terms\t" << index.postings().size() << '\n'
      << "avg_doc_len\t" << fixed(index.avg_doc_len()) << '\n';
}

void cmd_chat(const ChatOptions& options, std::istream& in, std::ostream& out) {
  const auto bundle = PersonaBundle::resolve(options.persona);
  const auto persona = LoadedPersona::load(bundle);
  const auto engine = make_engine(persona, repository_path(options, bundle),
                                  load_generic(options.corpus), options.trigger_rate);
  Session session("repl");
  bool debug = options.debug;
  out << "persona " << bundle.name << ", trigger_rate " << fixed(engine->config().trigger_rate, 2)
      << " (:rate X, :debug on|off, :quit)\n";
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text == ":quit" || text == ":q") break;
    if (text.rfind(":rate", 0) == 0) {
      double rate = -1.0;
      std::istringstream arg(text.substr(5));
      if (!(arg >> rate) || rate < 0.0 || rate > 1.0) {
        out << "! usage: :rate <value in [0,1]>\n";
        continue;
      }
      const double tau = engine->set_trigger_rate(rate);
      out << "trigger_rate " << fixed(rate, 2) << " threshold "
          << (tau == kNeverTrigger ? std::string("inf") : fixed(tau)) << '\n';
      continue;
    }
    if (text == ":debug on" || text == ":debug off") {
      debug = text == ":debug on";
      out << "debug " << (debug ? "on" : "off") << '\n';
      continue;
    }
    if (text[0] == ':') {
      out << "! unknown command " << text << '\n';
      continue;
    }
    const auto r = engine->respond(session, text);
    out << "> " << r.reply << (r.triggered ? "  [styled]" : "") << '\n';
    if (debug) print_debug(out, *engine, r);
  }
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("bad rate '" + item + "'");
    }
    if (used != item.size() || v < 0.0 || v > 1.0) throw InputError("bad rate '" + item + "'");
    rates.push_back(v);
  }
  if (rates.empty()) throw InputError("no rates given");
  if (!std::is_sorted(rates.begin(), rates.end())) throw InputError("rates must be ascending");
  return rates;
}

void cmd_eval(const EvalOptions& options, std::ostream& out) {
  const auto bundle = PersonaBundle::resolve(options.persona);
  const auto persona = LoadedPersona::load(bundle);
  const auto engine = make_engine(persona, repository_path(options, bundle),
                                  load_generic(options.corpus), options.trigger_rate);
  std::ifstream qin(options.queries);
  if (!qin) throw InputError("cannot open " + options.queries.string());
  std::vector<std::string> queries;
  for (std::string line; std::getline(qin, line);) {
    line = trim(line);
    if (!line.empty()) queries.push_back(line);
  }
  const auto sweep = trigger_sweep(*engine, persona.style.lexicon, queries, options.rates);

  std::ofstream csv(options.out, std::ios::binary);
  if (!csv) throw InputError("cannot write " + options.out.string());
  write_sweep_csv(csv, sweep.points);

  out << "queries\t" << queries.size() << '\n';
  out << "rate\tdistinct_1\tdistinct_2\trelevance_proxy\tstyle_proxy\ttriggered_fraction\n";
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& p = sweep.points[i];
    out << fixed(p.trigger_rate) << '\t' << fixed(distinct_n(sweep.replies[i], 1)) << '\t'
        << fixed(distinct_n(sweep.replies[i], 2)) << '\t' << fixed(p.relevance_proxy) << '\t'
        << fixed(p.style_proxy) << '\t' << fixed(p.triggered_fraction) << '\n';
  }
}

}  // namespace stylepatch::app
