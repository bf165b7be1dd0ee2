#include "artifact_audit/artifacts.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace artifact_audit {

namespace {

void requireNonEmpty(const Dataset& dataset, const char* what) {
  if (dataset.empty()) {
    throw std::invalid_argument(std::string(what) + " of an empty dataset");
  }
}

std::vector<std::string> distinctTokens(std::string_view text) {
  auto toks = tokenize(text).tokens;
  std::sort(toks.begin(), toks.end());
  toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
  return toks;
}

// Fills the smoothed joint, marginals, PMI and coverage from words, counts
// and class_totals. Sums run serially in word order so the result does not
// depend on the thread count.
void finalizePmi(PmiTable& t, bool parallel) {
  const auto n = static_cast<int64_t>(t.words.size());
  const double alpha = t.alpha;
  t.z = 0.0;
  for (int64_t w = 0; w < n; ++w) {
    for (int k = 0; k < kNumLabels; ++k) {
      t.z += static_cast<double>(t.counts[w][k]) + alpha;
    }
  }
  t.joint.assign(n, {});
  t.word_marginal.assign(n, 0.0);
  t.pmi.assign(n, {});
  t.coverage.assign(n, {});
  t.class_marginal = {};
  for (int64_t w = 0; w < n; ++w) {
    for (int k = 0; k < kNumLabels; ++k) {
      const double p = (static_cast<double>(t.counts[w][k]) + alpha) / t.z;
      t.joint[w][k] = p;
      t.word_marginal[w] += p;
      t.class_marginal[k] += p;
    }
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t w = 0; w < n; ++w) {
    for (int k = 0; k < kNumLabels; ++k) {
      const double p = t.joint[w][k];
      t.pmi[w][k] = p > 0.0 ? std::log(p) - std::log(t.word_marginal[w]) -
                                  std::log(t.class_marginal[k])
                            : kNegInf;
      t.coverage[w][k] =
          t.class_totals[k] > 0
              ? static_cast<double>(t.counts[w][k]) /
                    static_cast<double>(t.class_totals[k])
              : 0.0;
    }
  }
}

void checkAlpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("smoothing alpha must be finite and >= 0");
  }
}

std::string fixed(double v, int precision) {
  if (std::isinf(v)) {
    return v < 0 ? "-inf" : "inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

// Rounds through the same fixed formatting the TSV reports use, so JSON
// reports stay byte-stable across reruns and platforms.
double rounded(double v, int precision) {
  return std::stod(fixed(v, precision));
}

}  // namespace

std::optional<size_t> PmiTable::find(std::string_view word) const {
  auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it == words.end() || *it != word) {
    return std::nullopt;
  }
  return static_cast<size_t>(it - words.begin());
}

std::vector<std::vector<std::string>> hypothesisTokenSets(
    const Dataset& dataset) {
  const auto n = static_cast<int64_t>(dataset.size());
  std::vector<std::vector<std::string>> sets(dataset.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    sets[i] = distinctTokens(dataset.examples[i].hypothesis);
  }
  return sets;
}

PmiTable pmiTable(const Dataset& train, double alpha) {
  requireNonEmpty(train, "PMI table");
  checkAlpha(alpha);
  const auto sets = hypothesisTokenSets(train);

  PmiTable t;
  t.alpha = alpha;
  std::unordered_map<std::string_view, std::array<int64_t, kNumLabels>> counts;
  for (size_t i = 0; i < sets.size(); ++i) {
    const int k = labelIndex(train.examples[i].label);
    ++t.class_totals[k];
    for (const auto& w : sets[i]) {
      ++counts[w][k];
    }
  }
  t.words.reserve(counts.size());
  for (const auto& [w, _] : counts) {
    t.words.emplace_back(w);
  }
  std::sort(t.words.begin(), t.words.end());
  t.counts.reserve(t.words.size());
  for (const auto& w : t.words) {
    t.counts.push_back(counts.at(w));
  }
  finalizePmi(t, true);
  return t;
}

PmiTable pmiTableSerial(const Dataset& train, double alpha) {
  requireNonEmpty(train, "PMI table");
  checkAlpha(alpha);
  PmiTable t;
  t.alpha = alpha;
  std::map<std::string, std::array<int64_t, kNumLabels>> counts;
  for (const auto& ex : train.examples) {
    const int k = labelIndex(ex.label);
    ++t.class_totals[k];
    for (const auto& w : distinctTokens(ex.hypothesis)) {
      ++counts[w][k];
    }
  }
  for (const auto& [w, c] : counts) {
    t.words.push_back(w);
    t.counts.push_back(c);
  }
  finalizePmi(t, false);
  return t;
}

std::vector<RankedWord> topK(const PmiTable& table, Label label, size_t k) {
  if (k < 1) {
    throw std::invalid_argument("top-k requires k >= 1");
  }
  const int c = labelIndex(label);
  std::vector<size_t> idx(table.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  const size_t take = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(take),
                    idx.end(), [&](size_t a, size_t b) {
                      if (table.pmi[a][c] != table.pmi[b][c]) {
                        return table.pmi[a][c] > table.pmi[b][c];
                      }
                      return table.words[a] < table.words[b];
                    });
  std::vector<RankedWord> out;
  out.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    out.push_back({table.words[idx[i]], table.pmi[idx[i]][c],
                   100.0 * table.coverage[idx[i]][c]});
  }
  return out;
}

std::array<double, kNumLabels> LengthStats::classGivenLength(
    int64_t length) const {
  std::array<double, kNumLabels> out{};
  if (length < 0 || length > maxLength()) {
    return out;
  }
  const auto& row = counts[length];
  const int64_t n = row[0] + row[1] + row[2];
  if (n == 0) {
    return out;
  }
  for (int k = 0; k < kNumLabels; ++k) {
    out[k] = static_cast<double>(row[k]) / static_cast<double>(n);
  }
  return out;
}

double LengthStats::cdf(Label label, int64_t length) const {
  const int k = labelIndex(label);
  const int64_t n = per_class[k].count;
  if (n == 0 || length < 0) {
    return 0.0;
  }
  int64_t cum = 0;
  for (int64_t l = 0; l <= std::min(length, maxLength()); ++l) {
    cum += counts[l][k];
  }
  return static_cast<double>(cum) / static_cast<double>(n);
}

int64_t LengthStats::quantile(Label label, double q) const {
  const int k = labelIndex(label);
  const int64_t n = per_class[k].count;
  if (n == 0) {
    return 0;
  }
  int64_t cum = 0;
  for (int64_t l = 0; l <= maxLength(); ++l) {
    cum += counts[l][k];
    if (static_cast<double>(cum) >= q * static_cast<double>(n)) {
      return l;
    }
  }
  return maxLength();
}

double LengthStats::classShareAtLeast(Label label, int64_t length) const {
  int64_t in_class = 0;
  int64_t all = 0;
  for (int64_t l = std::max<int64_t>(length, 0); l <= maxLength(); ++l) {
    in_class += counts[l][labelIndex(label)];
    all += counts[l][0] + counts[l][1] + counts[l][2];
  }
  return all ? static_cast<double>(in_class) / static_cast<double>(all) : 0.0;
}

namespace {

LengthStats lengthStatsFromLengths(const Dataset& dataset,
                                   const std::vector<int64_t>& lengths) {
  LengthStats s;
  s.total = static_cast<int64_t>(dataset.size());
  const int64_t max_len = *std::max_element(lengths.begin(), lengths.end());
  s.counts.assign(max_len + 1, {});
  std::array<int64_t, kNumLabels> sums{};
  for (size_t i = 0; i < lengths.size(); ++i) {
    const int k = labelIndex(dataset.examples[i].label);
    ++s.counts[lengths[i]][k];
    ++s.per_class[k].count;
    sums[k] += lengths[i];
  }
  for (Label label : kAllLabels) {
    const int k = labelIndex(label);
    auto& pc = s.per_class[k];
    pc.pmf.assign(max_len + 1, 0.0);
    if (pc.count == 0) {
      continue;
    }
    for (int64_t l = 0; l <= max_len; ++l) {
      pc.pmf[l] = static_cast<double>(s.counts[l][k]) /
                  static_cast<double>(pc.count);
    }
    pc.mean = static_cast<double>(sums[k]) / static_cast<double>(pc.count);
    pc.median = s.quantile(label, 0.5);
  }
  return s;
}

}  // namespace

LengthStats lengthStats(const Dataset& dataset) {
  requireNonEmpty(dataset, "length statistics");
  const auto n = static_cast<int64_t>(dataset.size());
  std::vector<int64_t> lengths(dataset.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    lengths[i] =
        static_cast<int64_t>(tokenize(dataset.examples[i].hypothesis).length());
  }
  return lengthStatsFromLengths(dataset, lengths);
}

LengthStats lengthStatsSerial(const Dataset& dataset) {
  requireNonEmpty(dataset, "length statistics");
  std::vector<int64_t> lengths;
  lengths.reserve(dataset.size());
  for (const auto& ex : dataset.examples) {
    lengths.push_back(static_cast<int64_t>(tokenize(ex.hypothesis).length()));
  }
  return lengthStatsFromLengths(dataset, lengths);
}

bool hypothesisContained(const TokenSeq& premise, const TokenSeq& hypothesis,
                         ContainmentMode mode) {
  std::unordered_map<std::string_view, int64_t> available;
  for (const auto& t : premise.tokens) {
    ++available[t];
  }
  if (mode == ContainmentMode::Set) {
    return std::all_of(
        hypothesis.tokens.begin(), hypothesis.tokens.end(),
        [&](const std::string& t) { return available.count(t) > 0; });
  }
  for (const auto& t : hypothesis.tokens) {
    auto it = available.find(t);
    if (it == available.end() || it->second == 0) {
      return false;
    }
    --it->second;
  }
  return true;
}

namespace {

ContainmentStats containmentFromFlags(const Dataset& dataset,
                                      const std::vector<char>& flags,
                                      ContainmentMode mode) {
  ContainmentStats s;
  s.mode = mode;
  for (size_t i = 0; i < flags.size(); ++i) {
    const int k = labelIndex(dataset.examples[i].label);
    ++s.totals[k];
    s.contained[k] += flags[i] ? 1 : 0;
  }
  for (int k = 0; k < kNumLabels; ++k) {
    s.rate[k] = s.totals[k] ? static_cast<double>(s.contained[k]) /
                                  static_cast<double>(s.totals[k])
                            : 0.0;
  }
  return s;
}

}  // namespace

ContainmentStats containmentStats(const Dataset& dataset,
                                  ContainmentMode mode) {
  requireNonEmpty(dataset, "containment statistics");
  const auto n = static_cast<int64_t>(dataset.size());
  std::vector<char> flags(dataset.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    const auto& ex = dataset.examples[i];
    flags[i] = hypothesisContained(tokenize(ex.premise),
                                   tokenize(ex.hypothesis), mode);
  }
  return containmentFromFlags(dataset, flags, mode);
}

ContainmentStats containmentStatsSerial(const Dataset& dataset,
                                        ContainmentMode mode) {
  requireNonEmpty(dataset, "containment statistics");
  std::vector<char> flags;
  flags.reserve(dataset.size());
  for (const auto& ex : dataset.examples) {
    flags.push_back(hypothesisContained(tokenize(ex.premise),
                                        tokenize(ex.hypothesis), mode));
  }
  return containmentFromFlags(dataset, flags, mode);
}

void writePmiTsv(const PmiTable& table, std::ostream& out) {
  out << "word\tclass\tpmi\tcoverage\n";
  for (size_t w = 0; w < table.size(); ++w) {
    for (Label label : kAllLabels) {
      const int k = labelIndex(label);
      out << table.words[w] << '\t' << labelName(label) << '\t'
          << fixed(table.pmi[w][k], 10) << '\t'
          << fixed(table.coverage[w][k], 10) << '\n';
    }
  }
}

void writeLengthPmfTsv(const LengthStats& stats, std::ostream& out) {
  out << "class\tlength\tprobability\n";
  for (Label label : kAllLabels) {
    const auto& pc = stats.per_class[labelIndex(label)];
    for (int64_t l = 0; l <= stats.maxLength(); ++l) {
      const auto& row = stats.counts[l];
      if (row[0] + row[1] + row[2] == 0) {
        continue;
      }
      out << labelName(label) << '\t' << l << '\t' << fixed(pc.pmf[l], 10)
          << '\n';
    }
  }
}

void writeContainmentJson(const ContainmentStats& stats, std::ostream& out) {
  nlohmann::ordered_json j;
  j["mode"] = stats.mode == ContainmentMode::Set ? "set" : "multiset";
  for (Label label : kAllLabels) {
    const int k = labelIndex(label);
    j["classes"][std::string(labelName(label))] = {
        {"contained", stats.contained[k]},
        {"total", stats.totals[k]},
        {"rate", rounded(stats.rate[k], 6)}};
  }
  out << j.dump(2) << '\n';
}

void writeAuditMarkdown(const std::string& dataset_name, const PmiTable& table,
                        const LengthStats& lengths,
                        const ContainmentStats& containment, size_t k,
                        std::ostream& out) {
  out << "# Annotation artifact audit: " << dataset_name << "\n\n";
  out << "## Top " << k << " words by PMI (alpha = " << fixed(table.alpha, 2)
      << ")\n\n";
  out << "Coverage is the share of the class's training hypotheses that "
         "contain the word.\n\n";
  out << "| rank | entailment | coverage | neutral | coverage | contradiction "
         "| coverage |\n";
  out << "|---:|---|---:|---|---:|---|---:|\n";
  std::array<std::vector<RankedWord>, kNumLabels> cols;
  for (Label label : kAllLabels) {
    cols[labelIndex(label)] = topK(table, label, k);
  }
  for (size_t r = 0; r < k; ++r) {
    out << "| " << (r + 1);
    for (const auto& col : cols) {
      if (r < col.size()) {
        out << " | " << col[r].word << " | " << fixed(col[r].coverage_pct, 1)
            << "%";
      } else {
        out << " |  | ";
      }
    }
    out << " |\n";
  }

  out << "\n## Hypothesis length\n\n";
  out << "| class | count | mean | median | P(len <= 7) | P(class \\| len >= "
         "12) |\n";
  out << "|---|---:|---:|---:|---:|---:|\n";
  for (Label label : kAllLabels) {
    const auto& pc = lengths.per_class[labelIndex(label)];
    out << "| " << labelName(label) << " | " << pc.count << " | "
        << fixed(pc.mean, 2) << " | " << pc.median << " | "
        << fixed(lengths.cdf(label, 7), 3) << " | "
        << fixed(lengths.classShareAtLeast(label, 12), 3) << " |\n";
  }

  out << "\n## Hypothesis contained in premise ("
      << (containment.mode == ContainmentMode::Set ? "token sets"
                                                   : "token multisets")
      << ")\n\n";
  out << "| class | contained | total | rate |\n";
  out << "|---|---:|---:|---:|\n";
  for (Label label : kAllLabels) {
    const int c = labelIndex(label);
    out << "| " << labelName(label) << " | " << containment.contained[c]
        << " | " << containment.totals[c] << " | "
        << fixed(100.0 * containment.rate[c], 2) << "% |\n";
  }
}

}  // namespace artifact_audit
