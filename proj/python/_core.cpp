#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <sstream>

#include "stylepatch/app/commands.hpp"
#include "stylepatch/app/persona.hpp"
#include "stylepatch/error.hpp"
#include "stylepatch/metrics.hpp"
#include "stylepatch/pipeline.hpp"

namespace py = pybind11;
namespace sp = stylepatch;
namespace app = stylepatch::app;
using sp::TokenSeq;

namespace {

std::vector<sp::Utterance> utterances(const std::vector<std::string>& lines) {
  std::vector<sp::Utterance> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(sp::tokenize(l));
  return out;
}

sp::StylizedCorpus posts(const std::vector<std::string>& lines) { return {utterances(lines)}; }

py::object threshold_or_none(double tau) {
  if (std::isinf(tau)) return py::none();
  return py::float_(tau);
}

py::dict response_dict(const sp::EngineResponse& r) {
  py::dict d;
  d["reply"] = r.reply;
  d["triggered"] = r.triggered;
  d["source_pair"] = r.source_pair ? py::cast(*r.source_pair) : py::none();
  d["fallback"] = r.fallback;
  d["threshold"] = threshold_or_none(r.threshold);
  return d;
}

// Index that owns its documents; InvertedIndex only borrows the terms.
class PyIndex {
 public:
  explicit PyIndex(std::vector<std::pair<sp::PairId, TokenSeq>> docs) : docs_(std::move(docs)) {
    std::vector<sp::IndexDocument> d;
    for (auto& [id, terms] : docs_) {
      terms = sp::fold_all(terms);
      d.push_back({id, terms});
    }
    index_ = sp::InvertedIndex::build(d);
  }

  std::vector<std::pair<sp::PairId, double>> search(const TokenSeq& query, std::size_t k) const {
    std::vector<std::pair<sp::PairId, double>> out;
    for (const auto& h : index_.search(sp::fold_all(query), k)) out.emplace_back(h.pair_id, h.score);
    return out;
  }

  const sp::InvertedIndex& index() const { return index_; }

 private:
  std::vector<std::pair<sp::PairId, TokenSeq>> docs_;
  sp::InvertedIndex index_;
};

// A loaded persona plus the engine serving it.
struct PyEngine {
  app::LoadedPersona persona;
  std::shared_ptr<sp::Engine> engine;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jargon style patching for retrieval-based chatbots";

  py::register_exception<sp::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<sp::ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  m.def("tokenize", [](const std::string& text) { return sp::tokenize(text).tokens; });
  m.def("fold", [](const std::string& token) { return sp::fold(token); });

  py::class_<sp::Lexicon>(m, "Lexicon")
      .def(py::init([](const std::vector<std::pair<std::string, std::string>>& entries, std::string style) {
             std::vector<sp::JargonEntry> e;
             for (const auto& [j, s] : entries) e.push_back(sp::make_entry(j, s));
             return sp::Lexicon(std::move(style), std::move(e));
           }),
           py::arg("entries"), py::arg("style") = "")
      .def_static("load", [](const std::filesystem::path& p) { return sp::load_lexicon(p); })
      .def("__len__", &sp::Lexicon::size)
      .def_property_readonly("entries", [](const sp::Lexicon& l) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : l.entries()) out.emplace_back(sp::join(e.jargon), sp::join(e.synonym));
        return out;
      });

  py::class_<sp::JargonContextTable>(m, "ContextTable")
      .def_readonly("neighbor_order", &sp::JargonContextTable::neighbor_order)
      .def("contexts", [](const sp::JargonContextTable& t, std::size_t jargon) {
        const auto& c = t.per_jargon.at(jargon);
        return py::make_tuple(c.preceding, c.succeeding);
      });
  m.def("build_context_table",
        [](const std::vector<std::string>& stylized, const sp::Lexicon& lex, std::size_t k) {
          return sp::build_context_table(posts(stylized), lex, k);
        },
        py::arg("stylized_posts"), py::arg("lexicon"), py::arg("k") = 2);

  py::class_<sp::CandidateResponse>(m, "Candidate")
      .def_readonly("tokens", &sp::CandidateResponse::tokens)
      .def_readonly("overlap", &sp::CandidateResponse::overlap)
      .def_readonly("fluency", &sp::CandidateResponse::fluency)
      .def_property_readonly("span_start", [](const sp::CandidateResponse& c) { return c.substitution.span_start; })
      .def_property_readonly("span_end", [](const sp::CandidateResponse& c) { return c.substitution.span_end; })
      .def_property_readonly("jargon_index", [](const sp::CandidateResponse& c) { return c.substitution.jargon_index; })
      .def_property_readonly("matched_side",
                             [](const sp::CandidateResponse& c) { return sp::to_string(c.substitution.matched_side); })
      .def("__repr__", [](const sp::CandidateResponse& c) { return "<Candidate '" + sp::join(c.tokens) + "'>"; });
  m.def("generate_candidates",
        [](const std::string& response, const sp::Lexicon& lex, const sp::JargonContextTable& table) {
          return sp::generate_candidates(sp::tokenize(response), lex, table);
        });

  py::class_<sp::NgramModel>(m, "NgramModel")
      .def_static("train",
                  [](const std::vector<std::string>& stylized, std::size_t order, double smoothing) {
                    return sp::NgramModel::train(posts(stylized), order, smoothing);
                  },
                  py::arg("stylized_posts"), py::arg("order") = sp::NgramModel::kDefaultOrder,
                  py::arg("smoothing") = sp::NgramModel::kDefaultSmoothing)
      .def_property_readonly("order", &sp::NgramModel::order)
      .def_property_readonly("vocab_size", &sp::NgramModel::vocab_size)
      .def("log_prob",
           [](const sp::NgramModel& model, const TokenSeq& history, const std::string& token) {
             TokenSeq h;
             for (const auto& t : history) h.push_back(model.map_token(sp::fold(t)));
             return model.log_prob(h, model.map_token(sp::fold(token)));
           })
      .def("window_logprob",
           [](const sp::NgramModel& model, const TokenSeq& tokens, std::size_t begin, std::size_t length) {
             sp::CandidateResponse c;
             c.tokens = tokens;
             c.substitution.span_start = begin;
             c.substitution.span_end = begin + length;
             c.jargon_length = length;
             return model.window_logprob(c);
           },
           py::arg("tokens"), py::arg("begin"), py::arg("length"))
      .def("filter",
           [](const sp::NgramModel& model, std::vector<sp::CandidateResponse> cands, std::optional<double> threshold) {
             return sp::filter(std::move(cands), model, threshold);
           },
           py::arg("candidates"), py::arg("threshold") = py::none());

  m.def("align", [](const std::string& styled, const sp::Lexicon& lex) {
    return sp::align_response(sp::tokenize(styled), lex).tokens;
  });

  py::class_<sp::EmbeddingTable, std::shared_ptr<sp::EmbeddingTable>>(m, "EmbeddingTable")
      .def_static("load", [](const std::filesystem::path& p) {
        return std::make_shared<sp::EmbeddingTable>(sp::EmbeddingTable::load(p));
      })
      .def("__len__", &sp::EmbeddingTable::size)
      .def_property_readonly("dim", &sp::EmbeddingTable::dim);
  m.def("nearest_keywords", [](const sp::EmbeddingTable& table, const std::string& phrase, std::size_t k) {
    return sp::nearest_keywords(table, sp::tokenize(phrase).folded, k);
  }, py::arg("table"), py::arg("phrase"), py::arg("k") = sp::kContextKeywords);

  py::class_<PyIndex>(m, "Index")
      .def(py::init<std::vector<std::pair<sp::PairId, TokenSeq>>>(), py::arg("documents"))
      .def("search", &PyIndex::search, py::arg("query"), py::arg("k") = sp::kDefaultRecall)
      .def("__len__", [](const PyIndex& i) { return i.index().doc_count(); })
      .def_property_readonly("avg_doc_len", [](const PyIndex& i) { return i.index().avg_doc_len(); });

  m.def("distinct_n", [](const std::vector<std::string>& responses, std::size_t n) {
    return sp::distinct_n(utterances(responses), n);
  });
  m.def("rsa", &sp::rsa);
  m.def("followup_overlap", [](const std::string& r1, const std::string& u2) {
    return sp::followup_overlap(sp::tokenize(r1), sp::tokenize(u2));
  });
  m.def("trigger_threshold", [](const std::vector<double>& conf, double rate) {
    return threshold_or_none(sp::trigger_threshold(conf, rate));
  });

  m.def("rewrite",
        [](const std::filesystem::path& corpus, const std::filesystem::path& persona,
           const std::filesystem::path& out) {
          std::ostringstream log, err;
          const auto s = app::cmd_rewrite({corpus, persona.string(), out}, log, err);
          py::dict d;
          d["pairs"] = s.pairs;
          d["rewritten"] = s.rewritten;
          d["copied"] = s.copied;
          d["candidates"] = s.candidates;
          d["accepted"] = s.accepted;
          d["mean_fluency"] = s.mean_fluency;
          return d;
        },
        py::arg("corpus"), py::arg("persona"), py::arg("out"));

  py::class_<PyEngine>(m, "Engine")
      .def(py::init([](const std::filesystem::path& persona, const std::filesystem::path& repository,
                       const std::filesystem::path& corpus, std::optional<double> rate) {
             auto p = app::LoadedPersona::load(app::PersonaBundle::load(persona));
             auto e = app::make_engine(p, repository, app::load_generic(corpus), rate);
             return PyEngine{std::move(p), std::move(e)};
           }),
           py::arg("persona"), py::arg("repository"), py::arg("corpus"), py::arg("trigger_rate") = py::none())
      .def("respond", [](const PyEngine& e, const std::string& text) { return response_dict(e.engine->respond(text)); })
      .def("generic_respond",
           [](const PyEngine& e, const std::string& text) { return response_dict(e.engine->generic_respond(text)); })
      .def("set_trigger_rate",
           [](PyEngine& e, double rate) { return threshold_or_none(e.engine->set_trigger_rate(rate)); })
      .def_property_readonly("trigger_rate", [](const PyEngine& e) { return e.engine->config().trigger_rate; })
      .def_property_readonly("threshold", [](const PyEngine& e) { return threshold_or_none(e.engine->threshold()); })
      .def_property_readonly("lexicon", [](const PyEngine& e) { return e.persona.style.lexicon; })
      .def("direct_rewrite", [](const PyEngine& e, const std::string& response) {
        return sp::join(sp::direct_rewrite(sp::tokenize(response), e.persona.style, e.persona.bundle.policy).tokens);
      });
}
