#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "artifact_audit/classifier.h"
#include "artifact_audit/corpus.h"
#include "artifact_audit/diagnostics.h"

namespace artifact_audit {

enum class Bucket : uint8_t { Hard, Easy };
std::string_view bucketName(Bucket bucket);

struct SplitEntry {
  std::string id;
  Label gold = Label::Entailment;
  Label predicted = Label::Entailment;
  Bucket bucket = Bucket::Hard;
};

// Hard/Easy assignment of a test set, tied to the audit model that made it.
struct SplitManifest {
  std::string dataset_name;
  std::string model_fingerprint;
  std::vector<SplitEntry> entries;

  size_t count(Bucket bucket) const;
};

// Easy iff predicted == gold. predicted[i] belongs to test.examples[i].
SplitManifest partitionFromPredictions(const Dataset& test,
                                       std::span<const Label> predicted,
                                       std::string model_fingerprint);

SplitManifest partition(const Model& model, const Dataset& test,
                        std::string model_fingerprint);

void writeManifestJson(const SplitManifest& manifest, std::ostream& out);
SplitManifest readManifestJson(std::istream& in);
SplitManifest readManifestFile(const std::string& path);

struct SplitFiles {
  std::string hard_path;
  std::string easy_path;
  size_t hard_count = 0;
  size_t easy_count = 0;
};

// Writes hard.jsonl and easy.jsonl into out_dir. Records are the original
// input lines, in source order. Throws when manifest and test disagree.
SplitFiles writeSplits(const SplitManifest& manifest, const Dataset& test,
                       const std::string& out_dir,
                       const WarningSink& warn = warnToStderr);

struct PredictionRecord {
  std::string id;
  Label label = Label::Entailment;
};

// JSON-lines ({"id": ..., "label": ...}) or two-column TSV (id<TAB>label,
// optional "id\tlabel" header). The format is chosen by the first
// non-blank character.
std::vector<PredictionRecord> parsePredictions(std::string_view contents);
std::vector<PredictionRecord> readPredictionsFile(const std::string& path);

struct ModelScore {
  std::string name;
  size_t full_total = 0;
  size_t full_correct = 0;
  size_t hard_total = 0;
  size_t hard_correct = 0;
  size_t easy_total = 0;
  size_t easy_correct = 0;

  double fullAccuracy() const;
  double hardAccuracy() const;
  double easyAccuracy() const;
  // easy >= full >= hard is an empirical tendency, not a guarantee; a
  // violation is reported, never fatal.
  bool orderingViolated() const;
};

// Every test id must appear exactly once; unknown, duplicate and missing ids
// throw.
ModelScore scorePredictions(const std::string& name,
                            std::span<const PredictionRecord> predictions,
                            const SplitManifest& manifest,
                            const Dataset& test);

struct EvalReport {
  std::string dataset_name;
  std::string model_fingerprint;
  std::vector<ModelScore> scores;
};

void writeReportJson(const EvalReport& report, std::ostream& out);
void writeReportMarkdown(const EvalReport& report, std::ostream& out);

}  // namespace artifact_audit
