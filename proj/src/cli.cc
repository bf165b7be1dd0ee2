#include "artifact_audit/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "artifact_audit/splits.h"

namespace artifact_audit {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void requireFile(const std::string& path, const char* flag) {
  if (path.empty()) {
    throw std::runtime_error(std::string("missing required option ") + flag);
  }
  if (!fs::is_regular_file(path)) {
    throw std::runtime_error(std::string(flag) + ": no such file: " + path);
  }
}

std::string datasetName(const AuditRunConfig& config, const std::string& path) {
  return config.dataset_name.empty() ? fs::path(path).stem().string()
                                     : config.dataset_name;
}

std::ofstream openOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error(path.string() + " cannot be opened for writing");
  }
  return out;
}

fs::path prepareOutDir(const AuditRunConfig& config) {
  if (config.out_dir.empty()) {
    throw std::runtime_error("missing required option --out");
  }
  fs::create_directories(config.out_dir);
  auto out = openOut(fs::path(config.out_dir) / "run_config.json");
  writeRunConfigJson(config, out);
  return fs::path(config.out_dir);
}

double rounded6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::stod(buf);
}

ojson evaluationJson(const Dataset& dataset, const Evaluation& ev) {
  ojson j;
  j["dataset"] = dataset.name;
  j["n"] = ev.total;
  j["correct"] = ev.correct;
  j["accuracy"] = rounded6(ev.accuracy);
  j["majority_baseline"] = rounded6(majorityBaseline(dataset));
  ojson per_label;
  for (Label l : kAllLabels) {
    const int k = labelIndex(l);
    per_label[std::string(labelName(l))] = {
        {"precision", rounded6(ev.precision[k])},
        {"recall", rounded6(ev.recall[k])}};
  }
  j["per_label"] = std::move(per_label);
  ojson confusion;
  for (Label gold : kAllLabels) {
    ojson row;
    for (Label pred : kAllLabels) {
      row[std::string(labelName(pred))] =
          ev.confusion[labelIndex(gold)][labelIndex(pred)];
    }
    confusion[std::string(labelName(gold))] = std::move(row);
  }
  j["confusion"] = std::move(confusion);
  return j;
}

}  // namespace

void writeRunConfigJson(const AuditRunConfig& c, std::ostream& out) {
  ojson j;
  j["command"] = c.command;
  j["train"] = c.train_path;
  j["dev"] = c.dev_path;
  j["test"] = c.test_path;
  j["model"] = c.model_path;
  j["manifest"] = c.manifest_path;
  j["predictions"] = c.prediction_paths;
  j["name"] = c.dataset_name;
  j["out"] = c.out_dir;
  j["train_config"] = {{"dim", c.train.dim},
                       {"epochs", c.train.epochs},
                       {"lr", c.train.lr0},
                       {"seed", c.train.seed},
                       {"word_bigrams", c.train.features.use_word_bigrams},
                       {"char_ngrams", c.train.features.use_char_4grams},
                       {"min_count", c.train.features.min_word_count},
                       {"buckets", c.train.features.n_buckets}};
  j["alpha"] = c.alpha;
  j["top_k"] = c.top_k;
  j["containment"] = c.containment_multiset ? "multiset" : "set";
  j["threads_env"] = "ARTIFACT_AUDIT_THREADS";
  out << j.dump(2) << '\n';
}

void cmdTrain(const AuditRunConfig& config) {
  requireFile(config.train_path, "--train");
  requireFile(config.test_path, "--test");
  if (!config.dev_path.empty()) {
    requireFile(config.dev_path, "--dev");
  }
  config.train.validate();
  const auto out_dir = prepareOutDir(config);

  auto train_set =
      loadDataset(config.train_path, datasetName(config, config.train_path),
                  Split::Train);
  auto test_set = loadDataset(config.test_path,
                              fs::path(config.test_path).stem().string(),
                              Split::Test);

  Model model = train(train_set.dataset, config.train);
  saveModelFile(model, (out_dir / "model.bin").string());

  ojson metrics;
  metrics["train"] = {{"dataset", train_set.dataset.name},
                      {"n", train_set.dataset.size()},
                      {"skipped", train_set.skipped},
                      {"vocab_size", model.vocab.size()}};
  metrics["test"] = evaluationJson(test_set.dataset,
                                   evaluate(model, test_set.dataset));
  metrics["test"]["skipped"] = test_set.skipped;
  if (!config.dev_path.empty()) {
    auto dev_set = loadDataset(
        config.dev_path, fs::path(config.dev_path).stem().string(), Split::Dev);
    metrics["dev"] =
        evaluationJson(dev_set.dataset, evaluate(model, dev_set.dataset));
    metrics["dev"]["skipped"] = dev_set.skipped;
  }
  auto out = openOut(out_dir / "metrics.json");
  out << metrics.dump(2) << '\n';

  std::cout << "train: " << train_set.dataset.size() << " examples ("
            << train_set.skipped << " skipped), vocab " << model.vocab.size()
            << "\n";
  std::cout << "test accuracy: " << metrics["test"]["accuracy"].get<double>()
            << " (majority " << metrics["test"]["majority_baseline"].get<double>()
            << ")\n";
}

void cmdAudit(const AuditRunConfig& config) {
  requireFile(config.train_path, "--train");
  if (config.top_k < 1) {
    throw std::runtime_error("--top-k must be >= 1");
  }
  const auto out_dir = prepareOutDir(config);
  auto loaded =
      loadDataset(config.train_path, datasetName(config, config.train_path),
                  Split::Train);
  const Dataset& train_set = loaded.dataset;

  const auto table = pmiTable(train_set, config.alpha);
  const auto lengths = lengthStats(train_set);
  const auto containment = containmentStats(
      train_set, config.containment_multiset ? ContainmentMode::Multiset
                                             : ContainmentMode::Set);
  {
    auto out = openOut(out_dir / "pmi.tsv");
    writePmiTsv(table, out);
  }
  {
    auto out = openOut(out_dir / "length_pmf.tsv");
    writeLengthPmfTsv(lengths, out);
  }
  {
    auto out = openOut(out_dir / "containment.json");
    writeContainmentJson(containment, out);
  }
  {
    auto out = openOut(out_dir / "report.md");
    writeAuditMarkdown(train_set.name, table, lengths, containment,
                       config.top_k, out);
  }
  std::cout << "audited " << train_set.size() << " hypotheses ("
            << loaded.skipped << " skipped), vocabulary " << table.size()
            << "\n";
}

void cmdSplit(const AuditRunConfig& config) {
  requireFile(config.model_path, "--model");
  requireFile(config.test_path, "--test");
  const auto out_dir = prepareOutDir(config);
  const Model model = loadModelFile(config.model_path);
  auto loaded = loadDataset(config.test_path,
                            datasetName(config, config.test_path), Split::Test);
  const auto manifest = partition(model, loaded.dataset,
                                  fileFingerprint(config.model_path));
  const auto files = writeSplits(manifest, loaded.dataset, out_dir.string());
  auto out = openOut(out_dir / "manifest.json");
  writeManifestJson(manifest, out);
  std::cout << "hard: " << files.hard_count << ", easy: " << files.easy_count
            << " (of " << loaded.dataset.size() << ")\n";
}

void cmdScore(const AuditRunConfig& config) {
  requireFile(config.manifest_path, "--manifest");
  requireFile(config.test_path, "--test");
  if (config.prediction_paths.empty()) {
    throw std::runtime_error("missing required option --predictions");
  }
  for (const auto& p : config.prediction_paths) {
    requireFile(p, "--predictions");
  }
  const auto out_dir = prepareOutDir(config);
  const auto manifest = readManifestFile(config.manifest_path);
  auto loaded = loadDataset(config.test_path,
                            datasetName(config, config.test_path), Split::Test);

  EvalReport report;
  report.dataset_name = manifest.dataset_name;
  report.model_fingerprint = manifest.model_fingerprint;
  for (const auto& p : config.prediction_paths) {
    const auto preds = readPredictionsFile(p);
    report.scores.push_back(scorePredictions(fs::path(p).stem().string(), preds,
                                             manifest, loaded.dataset));
  }
  {
    auto out = openOut(out_dir / "report.json");
    writeReportJson(report, out);
  }
  {
    auto out = openOut(out_dir / "report.md");
    writeReportMarkdown(report, out);
  }
  for (const auto& s : report.scores) {
    std::cout << s.name << ": full " << s.fullAccuracy() << ", hard "
              << s.hardAccuracy() << ", easy " << s.easyAccuracy() << "\n";
    if (s.orderingViolated()) {
      warnToStderr(s.name + " does not satisfy easy >= full >= hard");
    }
  }
}

}  // namespace artifact_audit
