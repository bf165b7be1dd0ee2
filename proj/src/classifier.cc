#include "artifact_audit/classifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "artifact_audit/rng.h"

namespace artifact_audit {

namespace {

constexpr char kMagic[8] = {'A', 'A', 'U', 'D', 'M', 'D', 'L', '\0'};
constexpr uint32_t kFormatVersion = 1;
constexpr uint32_t kFlagBigrams = 1u << 0;
constexpr uint32_t kFlagChar4 = 1u << 1;

void checkRange(const Model& model, std::span<const int32_t> feats) {
  const int64_t rows = std::min<int64_t>(
      model.rows(), static_cast<int64_t>(model.input.size()) / model.dim());
  for (int32_t f : feats) {
    if (f < 0 || f >= rows) {
      throw std::out_of_range("feature id " + std::to_string(f) +
                              " outside model rows [0, " +
                              std::to_string(rows) + ")");
    }
  }
}

std::vector<double> hiddenOf(const Model& model,
                             std::span<const int32_t> feats) {
  const int32_t dim = model.dim();
  std::vector<double> h(dim, 0.0);
  if (feats.empty()) {
    return h;
  }
  for (int32_t f : feats) {
    const float* row = model.input.data() + static_cast<int64_t>(f) * dim;
    for (int32_t d = 0; d < dim; ++d) {
      h[d] += row[d];
    }
  }
  const double inv = 1.0 / static_cast<double>(feats.size());
  for (auto& v : h) {
    v *= inv;
  }
  return h;
}

std::array<double, kNumLabels> logitsOf(const Model& model,
                                        const std::vector<double>& h) {
  std::array<double, kNumLabels> z{};
  for (int32_t d = 0; d < model.dim(); ++d) {
    const float* w = model.output.data() + d * kNumLabels;
    for (int k = 0; k < kNumLabels; ++k) {
      z[k] += h[d] * w[k];
    }
  }
  return z;
}

// Little-endian primitive IO, independent of host byte order.
template <typename U>
void putLe(std::ostream& out, U v) {
  unsigned char buf[sizeof(U)];
  for (size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<unsigned char>(v >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U getLe(std::istream& in) {
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) {
    throw std::runtime_error("truncated model file");
  }
  U v = 0;
  for (size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(buf[i]) << (8 * i);
  }
  return v;
}

void putFloats(std::ostream& out, const std::vector<float>& values) {
  std::vector<unsigned char> bytes(values.size() * 4);
  for (size_t i = 0; i < values.size(); ++i) {
    uint32_t bits = std::bit_cast<uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) {
      bytes[i * 4 + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<float> getFloats(std::istream& in, size_t count) {
  std::vector<unsigned char> bytes(count * 4);
  if (!in.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()))) {
    throw std::runtime_error("truncated model file");
  }
  std::vector<float> values(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<uint32_t>(bytes[i * 4 + b]) << (8 * b);
    }
    values[i] = std::bit_cast<float>(bits);
  }
  return values;
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) {
    throw std::invalid_argument("dim must be >= 1");
  }
  if (epochs < 1) {
    throw std::invalid_argument("epochs must be >= 1");
  }
  if (!(lr0 > 0.0)) {
    throw std::invalid_argument("lr0 must be > 0");
  }
  features.validate();
}

Model Model::initialized(const TrainConfig& config, Vocab vocab) {
  config.validate();
  Model m;
  m.config = config;
  m.vocab = std::move(vocab);
  m.input.resize(static_cast<size_t>(m.rows()) * config.dim);
  m.output.assign(static_cast<size_t>(config.dim) * kNumLabels, 0.0f);
  Rng rng(config.seed);
  const double bound = 1.0 / config.dim;
  for (auto& v : m.input) {
    v = static_cast<float>(-bound + 2.0 * bound * rng.uniform01());
  }
  return m;
}

std::array<double, kNumLabels> softmax(const std::array<double, kNumLabels>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  std::array<double, kNumLabels> p{};
  double sum = 0.0;
  for (int k = 0; k < kNumLabels; ++k) {
    p[k] = std::exp(z[k] - mx);
    sum += p[k];
  }
  for (auto& v : p) {
    v /= sum;
  }
  return p;
}

Label argmaxLabel(const std::array<double, kNumLabels>& values) {
  int best = 0;
  for (int k = 1; k < kNumLabels; ++k) {
    if (values[k] > values[best]) {
      best = k;
    }
  }
  return static_cast<Label>(best);
}

Prediction forward(const Model& model, std::span<const int32_t> feats) {
  checkRange(model, feats);
  Prediction p;
  p.probs = softmax(logitsOf(model, hiddenOf(model, feats)));
  p.argmax = argmaxLabel(p.probs);
  return p;
}

double negLogLikelihood(const Model& model, std::span<const int32_t> feats,
                        Label gold) {
  checkRange(model, feats);
  auto z = logitsOf(model, hiddenOf(model, feats));
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) {
    sum += std::exp(v - mx);
  }
  return -(z[labelIndex(gold)] - mx - std::log(sum));
}

Gradient nllGradient(const Model& model, std::span<const int32_t> feats,
                     Label gold) {
  checkRange(model, feats);
  const int32_t dim = model.dim();
  const auto h = hiddenOf(model, feats);
  const auto probs = softmax(logitsOf(model, h));

  std::array<double, kNumLabels> dz = probs;
  dz[labelIndex(gold)] -= 1.0;

  Gradient g;
  g.nll = -std::log(std::max(probs[labelIndex(gold)], 1e-300));
  g.d_output.assign(static_cast<size_t>(dim) * kNumLabels, 0.0);
  g.d_input_row.assign(dim, 0.0);
  const double inv =
      feats.empty() ? 0.0 : 1.0 / static_cast<double>(feats.size());
  for (int32_t d = 0; d < dim; ++d) {
    const float* w = model.output.data() + d * kNumLabels;
    double dh = 0.0;
    for (int k = 0; k < kNumLabels; ++k) {
      g.d_output[d * kNumLabels + k] = h[d] * dz[k];
      dh += w[k] * dz[k];
    }
    g.d_input_row[d] = dh * inv;
  }
  return g;
}

void sgdStep(Model& model, std::span<const int32_t> feats, Label gold,
             double lr) {
  if (feats.empty()) {
    return;
  }
  const Gradient g = nllGradient(model, feats, gold);
  const int32_t dim = model.dim();
  for (size_t i = 0; i < g.d_output.size(); ++i) {
    model.output[i] = static_cast<float>(model.output[i] - lr * g.d_output[i]);
  }
  for (int32_t f : feats) {
    float* row = model.input.data() + static_cast<int64_t>(f) * dim;
    for (int32_t d = 0; d < dim; ++d) {
      row[d] = static_cast<float>(row[d] - lr * g.d_input_row[d]);
    }
  }
}

Model train(const Dataset& train_set, const TrainConfig& config,
            const WarningSink& warn) {
  config.validate();
  if (train_set.empty()) {
    throw std::invalid_argument("cannot train on an empty dataset");
  }
  auto counts = labelCounts(train_set);
  for (Label l : kAllLabels) {
    if (counts[labelIndex(l)] == 0) {
      warn("training set has no " + std::string(labelName(l)) + " examples");
    }
  }

  Model model = Model::initialized(config, buildVocab(train_set, config.features));
  const auto feats = featurizeAll(train_set, model.vocab, config.features);

  // The shuffle stream is separate from the initialization stream so that the
  // visiting order does not depend on the size of the embedding table.
  Rng order_rng(config.seed ^ 0x5deece66dull);
  std::vector<size_t> order(train_set.size());
  const double total_steps =
      static_cast<double>(config.epochs) * static_cast<double>(order.size());
  int64_t step = 0;
  for (int32_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    order_rng.shuffle(std::span<size_t>(order));
    for (size_t idx : order) {
      const double lr =
          config.lr0 * (1.0 - static_cast<double>(step) / total_steps);
      sgdStep(model, feats[idx], train_set.examples[idx].label, lr);
      ++step;
    }
  }
  return model;
}

std::vector<Prediction> predictAll(const Model& model, const Dataset& dataset) {
  const auto n = static_cast<int64_t>(dataset.size());
  std::vector<Prediction> out(dataset.size());
  // Exceptions must not escape an OpenMP region; record the first one.
  std::string error;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    try {
      auto feats = featurize(tokenize(dataset.examples[i].hypothesis),
                             model.vocab, model.config.features);
      out[i] = forward(model, feats);
    } catch (const std::exception& e) {
#pragma omp critical(predict_all_error)
      if (error.empty()) {
        error = e.what();
      }
    }
  }
  if (!error.empty()) {
    throw std::out_of_range(error);
  }
  return out;
}

std::vector<Prediction> predictAllSerial(const Model& model,
                                         const Dataset& dataset) {
  std::vector<Prediction> out;
  out.reserve(dataset.size());
  for (const auto& ex : dataset.examples) {
    auto feats =
        featurize(tokenize(ex.hypothesis), model.vocab, model.config.features);
    out.push_back(forward(model, feats));
  }
  return out;
}

Evaluation summarize(const Dataset& dataset,
                     std::span<const Prediction> predictions) {
  if (dataset.empty()) {
    throw std::invalid_argument("cannot evaluate on an empty dataset");
  }
  if (predictions.size() != dataset.size()) {
    throw std::invalid_argument("prediction count does not match dataset");
  }
  Evaluation ev;
  ev.total = dataset.size();
  for (size_t i = 0; i < dataset.size(); ++i) {
    int gold = labelIndex(dataset.examples[i].label);
    int pred = labelIndex(predictions[i].argmax);
    ++ev.confusion[gold][pred];
    if (gold == pred) {
      ++ev.correct;
    }
  }
  ev.accuracy = static_cast<double>(ev.correct) / static_cast<double>(ev.total);
  for (int k = 0; k < kNumLabels; ++k) {
    size_t predicted_k = 0;
    size_t gold_k = 0;
    for (int j = 0; j < kNumLabels; ++j) {
      predicted_k += ev.confusion[j][k];
      gold_k += ev.confusion[k][j];
    }
    const double tp = static_cast<double>(ev.confusion[k][k]);
    ev.precision[k] = predicted_k ? tp / static_cast<double>(predicted_k) : 0.0;
    ev.recall[k] = gold_k ? tp / static_cast<double>(gold_k) : 0.0;
  }
  return ev;
}

Evaluation evaluate(const Model& model, const Dataset& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("cannot evaluate on an empty dataset");
  }
  return summarize(dataset, predictAll(model, dataset));
}

Evaluation evaluateSerial(const Model& model, const Dataset& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("cannot evaluate on an empty dataset");
  }
  return summarize(dataset, predictAllSerial(model, dataset));
}

void saveModel(const Model& model, std::ostream& out) {
  const auto& c = model.config;
  out.write(kMagic, sizeof(kMagic));
  putLe<uint32_t>(out, kFormatVersion);
  putLe<uint32_t>(out, static_cast<uint32_t>(c.dim));
  putLe<uint32_t>(out, static_cast<uint32_t>(model.vocab.size()));
  putLe<uint32_t>(out, static_cast<uint32_t>(c.features.n_buckets));
  uint32_t flags = 0;
  if (c.features.use_word_bigrams) flags |= kFlagBigrams;
  if (c.features.use_char_4grams) flags |= kFlagChar4;
  putLe<uint32_t>(out, flags);
  putLe<uint32_t>(out, static_cast<uint32_t>(c.features.min_word_count));
  putLe<uint32_t>(out, static_cast<uint32_t>(c.epochs));
  putLe<uint64_t>(out, std::bit_cast<uint64_t>(c.lr0));
  putLe<uint64_t>(out, c.seed);
  putLe<uint32_t>(out, static_cast<uint32_t>(kNumLabels));
  putFloats(out, model.input);
  putFloats(out, model.output);
  std::ostringstream tsv;
  model.vocab.writeTsv(tsv);
  const std::string text = tsv.str();
  putLe<uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error("failed to write model");
  }
}

Model loadModel(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not an artifact-audit model file (bad magic)");
  }
  const uint32_t version = getLe<uint32_t>(in);
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported model format version " +
                             std::to_string(version));
  }
  Model m;
  auto& c = m.config;
  c.dim = static_cast<int32_t>(getLe<uint32_t>(in));
  const uint32_t vocab_size = getLe<uint32_t>(in);
  c.features.n_buckets = static_cast<int32_t>(getLe<uint32_t>(in));
  const uint32_t flags = getLe<uint32_t>(in);
  c.features.use_word_bigrams = (flags & kFlagBigrams) != 0;
  c.features.use_char_4grams = (flags & kFlagChar4) != 0;
  c.features.min_word_count = static_cast<int32_t>(getLe<uint32_t>(in));
  c.epochs = static_cast<int32_t>(getLe<uint32_t>(in));
  c.lr0 = std::bit_cast<double>(getLe<uint64_t>(in));
  c.seed = getLe<uint64_t>(in);
  if (getLe<uint32_t>(in) != kNumLabels) {
    throw std::runtime_error("model file label count is not 3");
  }
  c.validate();
  const int64_t rows = static_cast<int64_t>(vocab_size) + c.features.n_buckets;
  m.input = getFloats(in, static_cast<size_t>(rows) * c.dim);
  m.output = getFloats(in, static_cast<size_t>(c.dim) * kNumLabels);
  const uint64_t tsv_len = getLe<uint64_t>(in);
  std::string text(tsv_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(tsv_len))) {
    throw std::runtime_error("truncated model file");
  }
  std::istringstream tsv(text);
  m.vocab = Vocab::readTsv(tsv);
  if (m.vocab.size() != static_cast<int32_t>(vocab_size)) {
    throw std::runtime_error("model vocab TSV disagrees with header size");
  }
  return m;
}

void saveModelFile(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error(path + " cannot be opened for writing");
  }
  saveModel(model, out);
}

Model loadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error(path + " cannot be opened for reading");
  }
  return loadModel(in);
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fileFingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error(path + " cannot be opened for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return std::string("fnv1a64:") + hex;
}

}  // namespace artifact_audit
