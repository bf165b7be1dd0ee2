#pragma once

// Brute-force PMI reference: every cell is recomputed from the raw examples
// with nested loops. Slow on purpose; only for fixtures of a few dozen rows.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "artifact_audit/corpus.h"

namespace oracle {

struct NaivePmi {
  std::vector<std::string> words;
  std::vector<std::array<double, 3>> pmi;
  std::vector<std::array<double, 3>> coverage;
  std::vector<std::array<double, 3>> joint;
};

inline bool containsToken(const std::string& text, const std::string& word) {
  const auto toks = artifact_audit::tokenize(text).tokens;
  return std::find(toks.begin(), toks.end(), word) != toks.end();
}

inline NaivePmi naivePmi(const artifact_audit::Dataset& d, double alpha) {
  using artifact_audit::labelIndex;
  std::set<std::string> vocab;
  for (const auto& ex : d.examples)
    for (const auto& t : artifact_audit::tokenize(ex.hypothesis).tokens)
      vocab.insert(t);

  NaivePmi out;
  out.words.assign(vocab.begin(), vocab.end());
  const size_t n = out.words.size();
  std::vector<std::array<double, 3>> count(n, {0, 0, 0});
  for (size_t w = 0; w < n; ++w)
    for (int k = 0; k < 3; ++k)
      for (const auto& ex : d.examples)
        if (labelIndex(ex.label) == k && containsToken(ex.hypothesis, out.words[w]))
          count[w][k] += 1;

  double z = 0;
  for (size_t w = 0; w < n; ++w)
    for (int k = 0; k < 3; ++k) z += count[w][k] + alpha;

  out.joint.assign(n, {});
  for (size_t w = 0; w < n; ++w)
    for (int k = 0; k < 3; ++k) out.joint[w][k] = (count[w][k] + alpha) / z;

  out.pmi.assign(n, {});
  out.coverage.assign(n, {});
  for (size_t w = 0; w < n; ++w) {
    for (int k = 0; k < 3; ++k) {
      double pw = 0;
      for (int j = 0; j < 3; ++j) pw += out.joint[w][j];
      double pk = 0;
      for (size_t v = 0; v < n; ++v) pk += out.joint[v][k];
      out.pmi[w][k] = out.joint[w][k] > 0
                          ? std::log(out.joint[w][k] / (pw * pk))
                          : -std::numeric_limits<double>::infinity();
      double class_total = 0;
      for (const auto& ex : d.examples) class_total += labelIndex(ex.label) == k;
      out.coverage[w][k] = class_total > 0 ? count[w][k] / class_total : 0.0;
    }
  }
  return out;
}

}  // namespace oracle
