#include "stylepatch/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "stylepatch/error.hpp"

namespace stylepatch {

bool EmbeddingTable::add(std::string_view word, std::span<const double> vector) {
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw InputError("vector for '" + std::string(word) + "' has dimension " +
                     std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  auto key = fold(word);
  if (rows_.contains(key)) return false;
  rows_.emplace(key, words_.size());
  words_.push_back(std::move(key));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::span<const double> EmbeddingTable::vector_at(std::size_t row) const {
  return std::span(data_).subspan(row * dim_, dim_);
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view word) const {
  const auto it = rows_.find(fold(word));
  if (it == rows_.end()) return std::nullopt;
  return vector_at(it->second);
}

EmbeddingTable EmbeddingTable::scaled(double factor) const {
  EmbeddingTable out = *this;
  for (auto& x : out.data_) x *= factor;
  return out;
}

EmbeddingTable EmbeddingTable::read(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    for (std::string v; fields >> v;) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(v, &used));
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw InputError("embedding line " + std::to_string(line_no) + ": bad number '" + v + "'");
      }
    }
    // "N D" header: two integers on the first line.
    if (line_no == 1 && values.size() == 1 &&
        std::all_of(word.begin(), word.end(), [](unsigned char c) { return c >= '0' && c <= '9'; })) {
      table.dim_ = static_cast<std::size_t>(values.front());
      continue;
    }
    if (values.empty()) throw InputError("embedding line " + std::to_string(line_no) + ": no values");
    try {
      table.add(word, values);
    } catch (const InputError& e) {
      throw InputError("embedding line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read(in);
}

std::optional<Vector> phrase_vector(const EmbeddingTable& table, std::span<const std::string> phrase) {
  Vector sum(table.dim(), 0.0);
  std::size_t hits = 0;
  for (const auto& token : phrase) {
    const auto v = table.lookup(token);
    if (!v) continue;
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*v)[d];
    ++hits;
  }
  if (hits == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(hits);
  return sum;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t d = 0; d < a.size() && d < b.size(); ++d) {
    dot += a[d] * b[d];
    na += a[d] * a[d];
    nb += b[d] * b[d];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> nearest_keywords(const EmbeddingTable& table,
                                          std::span<const std::string> phrase, std::size_t k) {
  if (k == 0) return {};
  const auto query = phrase_vector(table, phrase);
  if (!query) return {};
  std::set<std::string> own;
  for (const auto& t : phrase) own.insert(fold(t));

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(table.size());
  for (std::size_t row = 0; row < table.size(); ++row) {
    if (own.contains(table.words()[row])) continue;
    scored.emplace_back(cosine(*query, table.vector_at(row)), row);
  }
  const auto& words = table.words();
  const auto better = [&words](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words[a.second] < words[b.second];
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    better);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(words[scored[i].second]);
  return out;
}

}  // namespace stylepatch
