#include "stylepatch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "stylepatch/error.hpp"

namespace stylepatch {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void note(LoadReport* report, std::size_t line_no, const std::string& what) {
  if (report == nullptr) return;
  report->diagnostics.push_back("line " + std::to_string(line_no) + ": " + what);
  ++report->skipped;
}

}  // namespace

JargonEntry make_entry(std::string_view jargon, std::string_view synonym) {
  JargonEntry e;
  e.jargon = tokenize(jargon).tokens;
  e.synonym = tokenize(synonym).tokens;
  e.jargon_folded = fold_all(e.jargon);
  e.synonym_folded = fold_all(e.synonym);
  return e;
}

Lexicon::Lexicon(std::string style_name, std::vector<JargonEntry> entries)
    : style_name_(std::move(style_name)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const JargonEntry& a, const JargonEntry& b) {
    return a.jargon_folded < b.jargon_folded;
  });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.jargon.empty() || e.synonym.empty()) throw InputError("lexicon entry with empty phrase");
    if (e.jargon_folded == e.synonym_folded) {
      throw InputError("jargon equals its synonym: " + join(e.jargon));
    }
    if (!by_jargon_.emplace(join(e.jargon_folded, "\x1f"), i).second) {
      throw InputError("duplicate jargon: " + join(e.jargon));
    }
    max_len_ = std::max(max_len_, e.jargon.size());
  }
}

std::optional<std::size_t> Lexicon::find(std::span<const std::string> folded) const {
  const auto it = by_jargon_.find(join(folded, "\x1f"));
  if (it == by_jargon_.end()) return std::nullopt;
  return it->second;
}

Ngram preceding_window(std::span<const std::string> folded, std::size_t begin, std::size_t k) {
  Ngram out;
  out.reserve(k);
  for (std::size_t d = k; d > 0; --d) {
    out.push_back(begin >= d ? folded[begin - d] : std::string(kBoundary));
  }
  return out;
}

Ngram succeeding_window(std::span<const std::string> folded, std::size_t end, std::size_t k) {
  Ngram out;
  out.reserve(k);
  for (std::size_t d = 0; d < k; ++d) {
    out.push_back(end + d < folded.size() ? folded[end + d] : std::string(kBoundary));
  }
  return out;
}

JargonContextTable build_context_table(const StylizedCorpus& corpus, const Lexicon& lexicon,
                                       std::size_t k) {
  if (k == 0) throw ContractViolation("neighbor order must be >= 1");
  JargonContextTable table;
  table.neighbor_order = k;
  table.per_jargon.resize(lexicon.size());
  for (const auto& post : corpus.posts) {
    const std::span<const std::string> toks(post.folded);
    for (std::size_t e = 0; e < lexicon.size(); ++e) {
      const auto& jargon = lexicon[e].jargon_folded;
      if (jargon.size() > toks.size()) continue;
      for (std::size_t i = 0; i + jargon.size() <= toks.size(); ++i) {
        if (!std::equal(jargon.begin(), jargon.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
          continue;
        }
        table.per_jargon[e].preceding.insert(preceding_window(toks, i, k));
        table.per_jargon[e].succeeding.insert(succeeding_window(toks, i + jargon.size(), k));
      }
    }
  }
  return table;
}

std::vector<DialoguePair> read_dialogue_corpus(std::istream& in, LoadReport* report) {
  std::vector<DialoguePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      note(report, line_no, "expected 2 tab-separated fields, got " + std::to_string(fields.size()));
      continue;
    }
    auto context = tokenize(fields[0]);
    auto response = tokenize(fields[1]);
    if (context.empty() || response.empty()) {
      note(report, line_no, "empty context or response");
      continue;
    }
    pairs.push_back({pairs.size(), std::move(context), std::move(response)});
  }
  return pairs;
}

std::vector<DialoguePair> load_dialogue_corpus(const std::filesystem::path& path,
                                               LoadReport* report) {
  auto in = open_input(path);
  return read_dialogue_corpus(in, report);
}

void write_dialogue_corpus(std::ostream& out, const std::vector<DialoguePair>& pairs) {
  for (const auto& p : pairs) {
    out << join(p.context.tokens) << '\t' << join(p.response.tokens) << '\n';
  }
}

Lexicon read_lexicon(std::istream& in, std::string style_name, LoadReport* report) {
  std::vector<JargonEntry> entries;
  std::set<TokenSeq> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      note(report, line_no, "expected 2 tab-separated fields, got " + std::to_string(fields.size()));
      continue;
    }
    auto entry = make_entry(fields[0], fields[1]);
    if (entry.jargon.empty() || entry.synonym.empty()) {
      note(report, line_no, "empty jargon or synonym");
      continue;
    }
    if (entry.jargon_folded == entry.synonym_folded) {
      note(report, line_no, "jargon identical to synonym");
      continue;
    }
    if (!seen.insert(entry.jargon_folded).second) {
      note(report, line_no, "duplicate jargon '" + join(entry.jargon) + "' dropped");
      continue;
    }
    entries.push_back(std::move(entry));
  }
  return Lexicon(std::move(style_name), std::move(entries));
}

Lexicon load_lexicon(const std::filesystem::path& path, LoadReport* report) {
  auto in = open_input(path);
  return read_lexicon(in, path.stem().string(), report);
}

StylizedCorpus read_stylized_corpus(std::istream& in) {
  StylizedCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    auto u = tokenize(line);
    if (!u.empty()) corpus.posts.push_back(std::move(u));
  }
  return corpus;
}

StylizedCorpus load_stylized_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_stylized_corpus(in);
}

}  // namespace stylepatch
