#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "stylepatch/candidate.hpp"
#include "stylepatch/corpus.hpp"
#include "stylepatch/embedding.hpp"

namespace stylepatch {

/// One entry of the stylized repository.
///
/// `r_styled` is what users see; `r_prime` is its plain-language alignment
/// used for matching; `c_prime` is the context plus appended keywords.
struct StylizedPair {
  PairId pair_id = 0;
  Utterance c;
  Utterance c_prime;
  Utterance r;
  Utterance r_prime;
  Utterance r_styled;
  std::vector<std::size_t> jargon_used;
  double style_confidence = 0.0;
  bool copied = true;

  friend bool operator==(const StylizedPair&, const StylizedPair&) = default;
};

/// Where one jargon occurrence was replaced during alignment.
struct AlignedSpan {
  std::size_t jargon_index;
  std::size_t styled_pos;  // start in the stylized tokens
  std::size_t prime_pos;   // start of the synonym in the aligned tokens
};

struct Alignment {
  Utterance aligned;
  std::vector<AlignedSpan> spans;
};

/// Replaces jargon phrases with their synonyms, scanning left to right and
/// preferring the longest phrase at each position. Matches never overlap.
Alignment align_with_spans(const Utterance& styled, const Lexicon& lexicon);
Utterance align_response(const Utterance& styled, const Lexicon& lexicon);

/// Number of keywords appended to a rewritten context.
inline constexpr std::size_t kContextKeywords = 5;

/// Appends the k nearest embedding keywords of the jargon to the context,
/// or the synonym tokens when no keyword is available. k == 0 leaves the
/// context unchanged. Appended tokens are counted in `augmented`.
Utterance rewrite_context(const Utterance& context, std::span<const std::string> jargon,
                          const EmbeddingTable* embeddings, std::span<const std::string> synonym,
                          std::size_t k = kContextKeywords);

/// The copy rule: c' = c and r_styled = r' = r.
StylizedPair copy_pair(const DialoguePair& pair);

/// Builds the stylized pair for an accepted candidate, or the copied pair
/// when `candidate` is null. Throws InternalError if the candidate's jargon
/// is not where its substitution says.
StylizedPair assemble_pair(const DialoguePair& pair, const CandidateResponse* candidate,
                           const Lexicon& lexicon, const EmbeddingTable* embeddings,
                           std::size_t keyword_count = kContextKeywords,
                           double style_confidence = 0.0);

/// True when aligning the candidate replaces its own inserted jargon; false
/// when an overlapping longer phrase would claim those tokens instead.
bool alignment_keeps_jargon(const CandidateResponse& candidate, const Lexicon& lexicon);

// Repository files hold one JSON object per line with the fields
// pair_id, c, c_prime, r, r_prime, r_styled, jargon_used, style_confidence,
// copied. Utterances are stored as space-joined tokens; the keyword
// augmentation of c_prime is whatever follows the tokens of c.
void write_repository(std::ostream& out, const std::vector<StylizedPair>& pairs);
void save_repository(const std::filesystem::path& path, const std::vector<StylizedPair>& pairs);
std::vector<StylizedPair> read_repository(std::istream& in);
std::vector<StylizedPair> load_repository(const std::filesystem::path& path);

}  // namespace stylepatch
