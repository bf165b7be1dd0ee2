#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "artifact_audit/corpus.h"
#include "artifact_audit/diagnostics.h"
#include "artifact_audit/features.h"

namespace artifact_audit {

struct TrainConfig {
  int32_t dim = 50;
  int32_t epochs = 5;
  double lr0 = 0.1;
  uint64_t seed = 42;
  FeatureConfig features;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// Averaged-embedding linear classifier: the hidden vector is the mean of the
// input rows selected by the feature ids, logits are hidden^T * output.
struct Model {
  TrainConfig config;
  Vocab vocab;
  // rows() x dim, row-major.
  std::vector<float> input;
  // dim x kNumLabels, row-major.
  std::vector<float> output;

  int64_t rows() const {
    return static_cast<int64_t>(vocab.size()) + config.features.n_buckets;
  }
  int32_t dim() const { return config.dim; }

  // Allocates input/output and fills them as train() does before the first
  // step: input uniform in [-1/dim, 1/dim], output zero.
  static Model initialized(const TrainConfig& config, Vocab vocab);

  bool operator==(const Model& other) const = default;
};

struct Prediction {
  std::array<double, kNumLabels> probs{};
  Label argmax = Label::Entailment;
};

std::array<double, kNumLabels> softmax(const std::array<double, kNumLabels>& z);

// First maximum wins, so ties resolve Entailment < Neutral < Contradiction.
Label argmaxLabel(const std::array<double, kNumLabels>& values);

// Throws std::out_of_range when a feature id is outside the model.
Prediction forward(const Model& model, std::span<const int32_t> feats);

double negLogLikelihood(const Model& model, std::span<const int32_t> feats,
                        Label gold);

// Gradient of the NLL of one example. d_input_row applies once per
// occurrence of an id in feats (duplicates accumulate).
struct Gradient {
  double nll = 0.0;
  std::vector<double> d_output;     // dim x kNumLabels
  std::vector<double> d_input_row;  // dim
};

Gradient nllGradient(const Model& model, std::span<const int32_t> feats,
                     Label gold);

// One plain SGD step; both gradients are taken at the current parameters.
void sgdStep(Model& model, std::span<const int32_t> feats, Label gold,
             double lr);

// Single-threaded and deterministic in (train order, config).
Model train(const Dataset& train_set, const TrainConfig& config,
            const WarningSink& warn = warnToStderr);

struct Evaluation {
  size_t total = 0;
  size_t correct = 0;
  double accuracy = 0.0;
  // confusion[gold][predicted]
  std::array<std::array<size_t, kNumLabels>, kNumLabels> confusion{};
  std::array<double, kNumLabels> precision{};
  std::array<double, kNumLabels> recall{};
};

std::vector<Prediction> predictAll(const Model& model, const Dataset& dataset);
std::vector<Prediction> predictAllSerial(const Model& model,
                                         const Dataset& dataset);

Evaluation evaluate(const Model& model, const Dataset& dataset);
Evaluation evaluateSerial(const Model& model, const Dataset& dataset);
Evaluation summarize(const Dataset& dataset,
                     std::span<const Prediction> predictions);

// Binary model file, little-endian:
//   char[8]  magic "AAUDMDL\0"
//   u32      format version (1)
//   u32      dim
//   u32      vocab size
//   u32      n_buckets
//   u32      flags (bit 0 word bigrams, bit 1 char 4-grams)
//   u32      min_word_count
//   u32      epochs
//   f64      lr0
//   u64      seed
//   u32      number of labels (3)
//   f32[rows * dim]  input matrix, row-major
//   f32[dim * 3]     output matrix, row-major
//   u64      byte length of the vocab TSV, then the TSV itself
void saveModel(const Model& model, std::ostream& out);
Model loadModel(std::istream& in);
void saveModelFile(const Model& model, const std::string& path);
Model loadModelFile(const std::string& path);

uint64_t fnv1a64(std::string_view bytes);
// Hex FNV-1a 64 of the file contents; recorded in split manifests.
std::string fileFingerprint(const std::string& path);

}  // namespace artifact_audit
