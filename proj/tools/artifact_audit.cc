#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "artifact_audit/cli.h"
#include "artifact_audit/diagnostics.h"

namespace {

using artifact_audit::AuditRunConfig;

void addTrainOptions(CLI::App* cmd, AuditRunConfig& c) {
  cmd->add_option("--seed", c.train.seed, "PRNG seed")->capture_default_str();
  cmd->add_option("--dim", c.train.dim, "embedding width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", c.train.epochs, "training epochs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr", c.train.lr0, "initial learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--char-ngrams,!--no-char-ngrams",
                c.train.features.use_char_4grams,
                "add hashed character 4-gram features");
  cmd->add_flag("--bigrams,!--no-bigrams", c.train.features.use_word_bigrams,
                "add hashed word bigram features (default on)");
  cmd->add_option("--min-count", c.train.features.min_word_count,
                  "drop words seen fewer times in training hypotheses")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--buckets", c.train.features.n_buckets,
                  "hashed n-gram buckets")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  artifact_audit::applyThreadLimit();

  CLI::App app{"Annotation-artifact audit for sentence-pair inference corpora"};
  app.require_subcommand(1);
  AuditRunConfig c;

  auto* train = app.add_subcommand(
      "train", "train the hypothesis-only classifier and evaluate it");
  train->add_option("--train", c.train_path, "training JSON-lines")->required();
  train->add_option("--test", c.test_path, "test JSON-lines")->required();
  train->add_option("--dev", c.dev_path, "optional dev JSON-lines");
  train->add_option("--name", c.dataset_name, "dataset name for reports");
  train->add_option("--out", c.out_dir, "output directory")->required();
  addTrainOptions(train, c);

  auto* audit = app.add_subcommand(
      "audit", "PMI, length and containment statistics of a training set");
  audit->add_option("--train", c.train_path, "training JSON-lines")->required();
  audit->add_option("--name", c.dataset_name, "dataset name for reports");
  audit->add_option("--out", c.out_dir, "output directory")->required();
  audit->add_option("--alpha", c.alpha, "additive smoothing for PMI")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  audit->add_option("--top-k", c.top_k, "words per class in the report")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  audit->add_flag("--multiset", c.containment_multiset,
                  "containment respects token multiplicity");

  auto* split = app.add_subcommand(
      "split", "partition a test set into hard/easy by the audit model");
  split->add_option("--model", c.model_path, "model.bin from train")
      ->required();
  split->add_option("--test", c.test_path, "test JSON-lines")->required();
  split->add_option("--name", c.dataset_name, "dataset name for the manifest");
  split->add_option("--out", c.out_dir, "output directory")->required();

  auto* score = app.add_subcommand(
      "score", "score prediction files on full, hard and easy subsets");
  score->add_option("--predictions", c.prediction_paths,
                    "prediction files (JSON-lines or TSV), repeatable")
      ->required();
  score->add_option("--manifest", c.manifest_path, "manifest.json from split")
      ->required();
  score->add_option("--test", c.test_path, "test JSON-lines")->required();
  score->add_option("--name", c.dataset_name, "dataset name");
  score->add_option("--out", c.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      c.command = "train";
      artifact_audit::cmdTrain(c);
    } else if (audit->parsed()) {
      c.command = "audit";
      artifact_audit::cmdAudit(c);
    } else if (split->parsed()) {
      c.command = "split";
      artifact_audit::cmdSplit(c);
    } else if (score->parsed()) {
      c.command = "score";
      artifact_audit::cmdScore(c);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
