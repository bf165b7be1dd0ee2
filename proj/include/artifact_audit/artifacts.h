#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artifact_audit/corpus.h"

namespace artifact_audit {

// Smoothed word/class PMI over hypothesis vocabulary. Counts are presence
// counts: a hypothesis contributes at most once to c(w, k). Words are kept in
// byte-wise sorted order.
struct PmiTable {
  using Row = std::array<double, kNumLabels>;

  double alpha = 0.0;
  std::vector<std::string> words;
  std::vector<std::array<int64_t, kNumLabels>> counts;
  std::array<int64_t, kNumLabels> class_totals{};
  // Normalizer of the smoothed joint: sum over all cells of (c + alpha).
  double z = 0.0;
  std::vector<Row> joint;
  std::vector<double> word_marginal;
  Row class_marginal{};
  std::vector<Row> pmi;
  std::vector<Row> coverage;

  size_t size() const { return words.size(); }
  std::optional<size_t> find(std::string_view word) const;
};

// Distinct tokens of every hypothesis, in dataset order.
std::vector<std::vector<std::string>> hypothesisTokenSets(
    const Dataset& dataset);

PmiTable pmiTable(const Dataset& train, double alpha = 100.0);
PmiTable pmiTableSerial(const Dataset& train, double alpha = 100.0);

struct RankedWord {
  std::string word;
  double pmi = 0.0;
  // Percentage of the class's hypotheses containing the word.
  double coverage_pct = 0.0;
};

// Descending PMI, ties alphabetical.
std::vector<RankedWord> topK(const PmiTable& table, Label label, size_t k);

struct ClassLengths {
  int64_t count = 0;
  // pmf[L] = P(length = L | class); sized to the dataset's max length + 1.
  std::vector<double> pmf;
  // Lower median; 0 when the class has no examples.
  int64_t median = 0;
  double mean = 0.0;
};

struct LengthStats {
  std::array<ClassLengths, kNumLabels> per_class;
  // counts[L][k]: hypotheses of class k with L tokens.
  std::vector<std::array<int64_t, kNumLabels>> counts;
  int64_t total = 0;

  int64_t maxLength() const { return static_cast<int64_t>(counts.size()) - 1; }
  // P(class | length = L); zeros when no hypothesis has length L.
  std::array<double, kNumLabels> classGivenLength(int64_t length) const;
  // P(length <= L | class).
  double cdf(Label label, int64_t length) const;
  // Smallest L with P(length <= L | class) >= q.
  int64_t quantile(Label label, double q) const;
  // P(class | length >= L).
  double classShareAtLeast(Label label, int64_t length) const;
};

LengthStats lengthStats(const Dataset& dataset);
LengthStats lengthStatsSerial(const Dataset& dataset);

enum class ContainmentMode { Set, Multiset };

struct ContainmentStats {
  ContainmentMode mode = ContainmentMode::Set;
  std::array<int64_t, kNumLabels> contained{};
  std::array<int64_t, kNumLabels> totals{};
  std::array<double, kNumLabels> rate{};
};

bool hypothesisContained(const TokenSeq& premise, const TokenSeq& hypothesis,
                         ContainmentMode mode = ContainmentMode::Set);

ContainmentStats containmentStats(const Dataset& dataset,
                                  ContainmentMode mode = ContainmentMode::Set);
ContainmentStats containmentStatsSerial(
    const Dataset& dataset, ContainmentMode mode = ContainmentMode::Set);

// Report emitters. Reals are printed with fixed precision so reruns are
// byte-identical.
void writePmiTsv(const PmiTable& table, std::ostream& out);
void writeLengthPmfTsv(const LengthStats& stats, std::ostream& out);
void writeContainmentJson(const ContainmentStats& stats, std::ostream& out);
void writeAuditMarkdown(const std::string& dataset_name, const PmiTable& table,
                        const LengthStats& lengths,
                        const ContainmentStats& containment, size_t k,
                        std::ostream& out);

}  // namespace artifact_audit
