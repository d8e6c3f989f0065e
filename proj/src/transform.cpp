#include "stylepatch/transform.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "stylepatch/error.hpp"

namespace stylepatch {

Alignment align_with_spans(const Utterance& styled, const Lexicon& lexicon) {
  Alignment out;
  TokenSeq tokens;
  const std::span<const std::string> folded(styled.folded);
  const std::size_t longest = lexicon.max_jargon_length();
  std::size_t pos = 0;
  while (pos < styled.size()) {
    std::optional<std::size_t> hit;
    std::size_t hit_len = 0;
    for (std::size_t len = std::min(longest, styled.size() - pos); len > 0; --len) {
      hit = lexicon.find(folded.subspan(pos, len));
      if (hit) {
        hit_len = len;
        break;
      }
    }
    if (!hit) {
      tokens.push_back(styled.tokens[pos]);
      ++pos;
      continue;
    }
    out.spans.push_back({*hit, pos, tokens.size()});
    const auto& synonym = lexicon[*hit].synonym;
    tokens.insert(tokens.end(), synonym.begin(), synonym.end());
    pos += hit_len;
  }
  out.aligned = from_tokens(std::move(tokens));
  return out;
}

Utterance align_response(const Utterance& styled, const Lexicon& lexicon) {
  return align_with_spans(styled, lexicon).aligned;
}

Utterance rewrite_context(const Utterance& context, std::span<const std::string> jargon,
                          const EmbeddingTable* embeddings, std::span<const std::string> synonym,
                          std::size_t k) {
  Utterance out = context;
  if (k == 0) return out;
  std::vector<std::string> extra;
  if (embeddings != nullptr) extra = nearest_keywords(*embeddings, jargon, k);
  if (extra.empty()) extra.assign(synonym.begin(), synonym.end());
  for (auto& word : extra) {
    out.folded.push_back(fold(word));
    out.tokens.push_back(std::move(word));
  }
  out.augmented += extra.size();
  return out;
}

StylizedPair copy_pair(const DialoguePair& pair) {
  StylizedPair s;
  s.pair_id = pair.id;
  s.c = pair.context;
  s.c_prime = pair.context;
  s.r = pair.response;
  s.r_prime = pair.response;
  s.r_styled = pair.response;
  s.copied = true;
  s.style_confidence = 0.0;
  return s;
}

bool alignment_keeps_jargon(const CandidateResponse& candidate, const Lexicon& lexicon) {
  const auto styled = from_tokens(candidate.tokens);
  const auto alignment = align_with_spans(styled, lexicon);
  return std::any_of(alignment.spans.begin(), alignment.spans.end(), [&](const AlignedSpan& s) {
    return s.styled_pos == candidate.jargon_begin() &&
           s.jargon_index == candidate.substitution.jargon_index;
  });
}

StylizedPair assemble_pair(const DialoguePair& pair, const CandidateResponse* candidate,
                           const Lexicon& lexicon, const EmbeddingTable* embeddings,
                           std::size_t keyword_count, double style_confidence) {
  if (candidate == nullptr) return copy_pair(pair);

  const auto& sub = candidate->substitution;
  if (sub.jargon_index >= lexicon.size()) throw InternalError("candidate jargon index out of range");
  const auto& entry = lexicon[sub.jargon_index];
  if (candidate->jargon_end() > candidate->tokens.size() ||
      !std::equal(entry.jargon.begin(), entry.jargon.end(),
                  candidate->tokens.begin() + static_cast<std::ptrdiff_t>(candidate->jargon_begin()))) {
    throw InternalError("jargon missing from stylized response of pair " + std::to_string(pair.id));
  }

  StylizedPair s;
  s.pair_id = pair.id;
  s.c = pair.context;
  s.r = pair.response;
  s.r_styled = from_tokens(candidate->tokens);
  auto alignment = align_with_spans(s.r_styled, lexicon);
  s.r_prime = std::move(alignment.aligned);
  for (const auto& span : alignment.spans) s.jargon_used.push_back(span.jargon_index);
  s.c_prime = rewrite_context(pair.context, entry.jargon, embeddings, entry.synonym, keyword_count);
  s.copied = false;
  s.style_confidence = style_confidence;
  return s;
}

namespace {

Utterance utterance_field(const nlohmann::json& obj, const char* name) {
  return from_tokens(tokenize(obj.at(name).get<std::string>()).tokens);
}

}  // namespace

void write_repository(std::ostream& out, const std::vector<StylizedPair>& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json obj;
    obj["pair_id"] = p.pair_id;
    obj["c"] = join(p.c.tokens);
    obj["c_prime"] = join(p.c_prime.tokens);
    obj["r"] = join(p.r.tokens);
    obj["r_prime"] = join(p.r_prime.tokens);
    obj["r_styled"] = join(p.r_styled.tokens);
    obj["jargon_used"] = p.jargon_used;
    obj["style_confidence"] = p.style_confidence;
    obj["copied"] = p.copied;
    out << obj.dump() << '\n';
  }
}

void save_repository(const std::filesystem::path& path, const std::vector<StylizedPair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_repository(out, pairs);
}

std::vector<StylizedPair> read_repository(std::istream& in) {
  std::vector<StylizedPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      StylizedPair p;
      p.pair_id = obj.at("pair_id").get<PairId>();
      p.c = utterance_field(obj, "c");
      p.c_prime = utterance_field(obj, "c_prime");
      p.r = utterance_field(obj, "r");
      p.r_prime = utterance_field(obj, "r_prime");
      p.r_styled = utterance_field(obj, "r_styled");
      p.jargon_used = obj.at("jargon_used").get<std::vector<std::size_t>>();
      p.style_confidence = obj.at("style_confidence").get<double>();
      p.copied = obj.at("copied").get<bool>();
      if (p.c_prime.size() < p.c.size() ||
          !std::equal(p.c.folded.begin(), p.c.folded.end(), p.c_prime.folded.begin())) {
        throw InputError("c_prime does not extend c");
      }
      p.c_prime.augmented = p.c_prime.size() - p.c.size();
      pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("repository line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("repository line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

std::vector<StylizedPair> load_repository(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_repository(in);
}

}  // namespace stylepatch
