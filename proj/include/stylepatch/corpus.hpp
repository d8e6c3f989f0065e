#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stylepatch/text.hpp"

namespace stylepatch {

using PairId = std::size_t;

struct DialoguePair {
  PairId id = 0;
  Utterance context;
  Utterance response;

  friend bool operator==(const DialoguePair&, const DialoguePair&) = default;
};

struct JargonEntry {
  TokenSeq jargon;   // stylized phrase
  TokenSeq synonym;  // plain-language paraphrase
  TokenSeq jargon_folded;
  TokenSeq synonym_folded;
};

/// Problems found while loading a file. Loaders skip bad lines instead of
/// failing; each skipped line gets one diagnostic naming its line number.
struct LoadReport {
  std::vector<std::string> diagnostics;
  std::size_t skipped = 0;
};

/// Jargon <-> synonym table defining one style.
///
/// Entries are kept sorted by folded jargon so indices do not depend on the
/// order of lines in the source file.
class Lexicon {
 public:
  Lexicon() = default;
  /// Throws InputError on duplicate folded jargon, empty phrases, or jargon
  /// equal to its synonym.
  Lexicon(std::string style_name, std::vector<JargonEntry> entries);

  [[nodiscard]] const std::string& style_name() const { return style_name_; }
  [[nodiscard]] const std::vector<JargonEntry>& entries() const { return entries_; }
  [[nodiscard]] const JargonEntry& operator[](std::size_t i) const { return entries_[i]; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  /// Longest jargon phrase in tokens; 0 for an empty lexicon.
  [[nodiscard]] std::size_t max_jargon_length() const { return max_len_; }

  /// Exact lookup by folded jargon tokens.
  [[nodiscard]] std::optional<std::size_t> find(std::span<const std::string> folded) const;

 private:
  std::string style_name_;
  std::vector<JargonEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_jargon_;
  std::size_t max_len_ = 0;
};

JargonEntry make_entry(std::string_view jargon, std::string_view synonym);

struct StylizedCorpus {
  std::vector<Utterance> posts;
};

using Ngram = std::vector<std::string>;

struct JargonContexts {
  std::set<Ngram> preceding;
  std::set<Ngram> succeeding;
};

/// Neighbor k-grams observed around each jargon phrase in the stylized
/// corpus. Indexed like the lexicon it was built from.
struct JargonContextTable {
  std::size_t neighbor_order = 2;
  std::vector<JargonContexts> per_jargon;
};

/// The k folded tokens before `begin`, padded with the boundary symbol.
Ngram preceding_window(std::span<const std::string> folded, std::size_t begin, std::size_t k);
/// The k folded tokens starting at `end`, padded with the boundary symbol.
Ngram succeeding_window(std::span<const std::string> folded, std::size_t end, std::size_t k);

/// Records the k neighbors on each side of every (case-folded) jargon
/// occurrence in the corpus. Throws ContractViolation when k == 0.
JargonContextTable build_context_table(const StylizedCorpus& corpus, const Lexicon& lexicon,
                                       std::size_t k = 2);

// File formats: UTF-8, one record per line, no BOM.

/// `context TAB response` per line. Blank lines are skipped without
/// consuming an id; lines with a field count other than two are reported.
std::vector<DialoguePair> read_dialogue_corpus(std::istream& in, LoadReport* report = nullptr);
std::vector<DialoguePair> load_dialogue_corpus(const std::filesystem::path& path,
                                               LoadReport* report = nullptr);
void write_dialogue_corpus(std::ostream& out, const std::vector<DialoguePair>& pairs);

/// `jargon TAB synonym` per line. Duplicated jargon keeps the first line.
Lexicon read_lexicon(std::istream& in, std::string style_name, LoadReport* report = nullptr);
Lexicon load_lexicon(const std::filesystem::path& path, LoadReport* report = nullptr);

/// One post per line; blank lines ignored.
StylizedCorpus read_stylized_corpus(std::istream& in);
StylizedCorpus load_stylized_corpus(const std::filesystem::path& path);

}  // namespace stylepatch
