#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "artifact_audit/corpus.h"

inline std::string fixturePath(const std::string& name) {
  return std::string(ARTIFACT_AUDIT_FIXTURE_DIR) + "/" + name;
}

inline std::string goldenPath(const std::string& name) {
  return std::string(ARTIFACT_AUDIT_GOLDEN_DIR) + "/" + name;
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline size_t countLines(const std::string& path) {
  size_t n = 0;
  for (char c : readFile(path)) {
    n += c == '\n';
  }
  return n;
}

inline artifact_audit::Example makeExample(std::string id, std::string hypothesis,
                                           artifact_audit::Label label,
                                           std::string premise = "premise") {
  artifact_audit::Example ex;
  ex.id = std::move(id);
  ex.premise = std::move(premise);
  ex.hypothesis = std::move(hypothesis);
  ex.label = label;
  ex.source = "{\"pairID\":\"" + ex.id + "\"}";
  return ex;
}

inline artifact_audit::Dataset makeDataset(
    std::initializer_list<std::pair<std::string, artifact_audit::Label>> rows,
    std::string name = "toy") {
  artifact_audit::Dataset d;
  d.name = std::move(name);
  int i = 0;
  for (const auto& [hyp, label] : rows) {
    d.examples.push_back(makeExample("id" + std::to_string(i++), hyp, label));
  }
  return d;
}
