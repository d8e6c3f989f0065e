#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stylepatch/text.hpp"

namespace stylepatch {

using Vector = std::vector<double>;

/// Word vectors keyed by folded word.
///
/// Text format: an optional "N D" header line, then one word followed by D
/// decimals per line. When a word appears twice after folding the first
/// vector wins.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  static EmbeddingTable read(std::istream& in);
  static EmbeddingTable load(const std::filesystem::path& path);

  /// Returns false if the (folded) word was already present.
  bool add(std::string_view word, std::span<const double> vector);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return words_.size(); }
  [[nodiscard]] bool empty() const { return words_.empty(); }
  [[nodiscard]] const std::vector<std::string>& words() const { return words_; }
  [[nodiscard]] std::span<const double> vector_at(std::size_t row) const;
  [[nodiscard]] std::optional<std::span<const double>> lookup(std::string_view word) const;

  /// Returns a copy with every vector multiplied by `factor`.
  [[nodiscard]] EmbeddingTable scaled(double factor) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> rows_;
};

/// Mean of the vectors of the in-vocabulary tokens; none when all are OOV.
std::optional<Vector> phrase_vector(const EmbeddingTable& table, std::span<const std::string> phrase);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// The k vocabulary words closest to the phrase by cosine, excluding the
/// phrase's own tokens. Ties go to the lexicographically smaller word.
std::vector<std::string> nearest_keywords(const EmbeddingTable& table,
                                          std::span<const std::string> phrase, std::size_t k);

}  // namespace stylepatch
