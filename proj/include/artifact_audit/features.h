#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "artifact_audit/corpus.h"

namespace artifact_audit {

struct FeatureConfig {
  bool use_word_bigrams = true;
  bool use_char_4grams = false;
  int32_t min_word_count = 1;
  int32_t n_buckets = 2'000'000;

  void validate() const;
  bool operator==(const FeatureConfig&) const = default;
};

// Exact word dictionary; ids are assigned in first-seen order.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<std::string> words);

  int32_t size() const { return static_cast<int32_t>(words_.size()); }
  // -1 when the word is absent.
  int32_t find(std::string_view word) const;
  const std::string& word(int32_t id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }

  // Two-column TSV: word<TAB>index, one line per entry in index order.
  void writeTsv(std::ostream& out) const;
  static Vocab readTsv(std::istream& in);

  bool operator==(const Vocab& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int32_t> index_;
};

// Counts tokens of training hypotheses only.
Vocab buildVocab(const Dataset& train, const FeatureConfig& config);

uint32_t fnv1a32(std::string_view bytes);

inline int32_t hashFeature(std::string_view s, int32_t n_buckets) {
  return static_cast<int32_t>(fnv1a32(s) % static_cast<uint32_t>(n_buckets));
}

using FeatureIds = std::vector<int32_t>;

FeatureIds featurize(const TokenSeq& hyp, const Vocab& vocab,
                     const FeatureConfig& config);

// Hypotheses of a whole dataset. The OpenMP version is checked against the
// serial one in tests and in the benchmark.
std::vector<FeatureIds> featurizeAll(const Dataset& dataset, const Vocab& vocab,
                                     const FeatureConfig& config);
std::vector<FeatureIds> featurizeAllSerial(const Dataset& dataset,
                                           const Vocab& vocab,
                                           const FeatureConfig& config);

}  // namespace artifact_audit
