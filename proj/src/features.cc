#include "artifact_audit/features.h"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace artifact_audit {

void FeatureConfig::validate() const {
  if (n_buckets < 1) {
    throw std::invalid_argument("n_buckets must be >= 1");
  }
  if (min_word_count < 1) {
    throw std::invalid_argument("min_word_count must be >= 1");
  }
}

Vocab::Vocab(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int32_t>(i)).second) {
      throw std::invalid_argument("duplicate vocabulary entry \"" + words_[i] +
                                  "\"");
    }
  }
}

int32_t Vocab::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : it->second;
}

void Vocab::writeTsv(std::ostream& out) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    out << words_[i] << '\t' << i << '\n';
  }
}

Vocab Vocab::readTsv(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vocab TSV line without a tab: " + line);
    }
    size_t idx = std::stoul(line.substr(tab + 1));
    if (idx != words.size()) {
      throw std::runtime_error("vocab TSV indices are not dense at \"" +
                               line.substr(0, tab) + "\"");
    }
    words.push_back(line.substr(0, tab));
  }
  return Vocab(std::move(words));
}

Vocab buildVocab(const Dataset& train, const FeatureConfig& config) {
  config.validate();
  if (train.empty()) {
    throw std::invalid_argument("cannot build a vocabulary from an empty set");
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& ex : train.examples) {
    for (auto& tok : tokenize(ex.hypothesis).tokens) {
      auto [it, inserted] = counts.try_emplace(tok, 0);
      if (inserted) {
        order.push_back(tok);
      }
      ++it->second;
    }
  }
  std::vector<std::string> kept;
  for (auto& w : order) {
    if (counts[w] >= config.min_word_count) {
      kept.push_back(std::move(w));
    }
  }
  return Vocab(std::move(kept));
}

uint32_t fnv1a32(std::string_view bytes) {
  uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

FeatureIds featurize(const TokenSeq& hyp, const Vocab& vocab,
                     const FeatureConfig& config) {
  const auto& toks = hyp.tokens;
  const int32_t offset = vocab.size();
  FeatureIds ids;
  ids.reserve(toks.size() * 2);
  for (const auto& t : toks) {
    int32_t id = vocab.find(t);
    if (id >= 0) {
      ids.push_back(id);
    }
  }
  if (config.use_word_bigrams) {
    std::string key;
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
      key.assign(toks[i]);
      key.push_back('_');
      key.append(toks[i + 1]);
      ids.push_back(offset + hashFeature(key, config.n_buckets));
    }
  }
  if (config.use_char_4grams) {
    std::string padded;
    std::string key;
    for (const auto& t : toks) {
      padded.assign("<");
      padded.append(t);
      padded.push_back('>');
      for (size_t i = 0; i + 4 <= padded.size(); ++i) {
        key.assign("#c4:");
        key.append(padded, i, 4);
        ids.push_back(offset + hashFeature(key, config.n_buckets));
      }
    }
  }
  return ids;
}

std::vector<FeatureIds> featurizeAll(const Dataset& dataset, const Vocab& vocab,
                                     const FeatureConfig& config) {
  const auto n = static_cast<int64_t>(dataset.size());
  std::vector<FeatureIds> out(dataset.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    out[i] = featurize(tokenize(dataset.examples[i].hypothesis), vocab, config);
  }
  return out;
}

std::vector<FeatureIds> featurizeAllSerial(const Dataset& dataset,
                                           const Vocab& vocab,
                                           const FeatureConfig& config) {
  std::vector<FeatureIds> out;
  out.reserve(dataset.size());
  for (const auto& ex : dataset.examples) {
    out.push_back(featurize(tokenize(ex.hypothesis), vocab, config));
  }
  return out;
}

}  // namespace artifact_audit
