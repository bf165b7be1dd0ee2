#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "artifact_audit/artifacts.h"
#include "artifact_audit/classifier.h"

namespace artifact_audit {

// Everything a subcommand needs. Written verbatim to run_config.json in the
// output directory of every run.
struct AuditRunConfig {
  std::string command;
  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string model_path;
  std::string manifest_path;
  std::vector<std::string> prediction_paths;
  std::string dataset_name;
  std::string out_dir;
  TrainConfig train;
  double alpha = 100.0;
  size_t top_k = 5;
  bool containment_multiset = false;
};

void writeRunConfigJson(const AuditRunConfig& config, std::ostream& out);

// Each command throws on failure; the executable maps that to a nonzero exit.
void cmdTrain(const AuditRunConfig& config);
void cmdAudit(const AuditRunConfig& config);
void cmdSplit(const AuditRunConfig& config);
void cmdScore(const AuditRunConfig& config);

}  // namespace artifact_audit
