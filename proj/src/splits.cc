#include "artifact_audit/splits.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace artifact_audit {

namespace {

using ojson = nlohmann::ordered_json;

Label requireLabel(const std::string& name, const std::string& context) {
  auto label = parseLabel(name);
  if (!label) {
    throw std::runtime_error(context + ": unparseable label \"" + name + "\"");
  }
  return *label;
}

std::unordered_map<std::string_view, size_t> indexById(const Dataset& test) {
  std::unordered_map<std::string_view, size_t> index;
  index.reserve(test.size());
  for (size_t i = 0; i < test.size(); ++i) {
    if (!index.emplace(test.examples[i].id, i).second) {
      throw std::runtime_error("duplicate id \"" + test.examples[i].id +
                               "\" in " + test.name);
    }
  }
  return index;
}

// Returns, for each test example, the manifest entry that covers it.
std::vector<const SplitEntry*> alignManifest(const SplitManifest& manifest,
                                             const Dataset& test) {
  const auto index = indexById(test);
  std::vector<const SplitEntry*> aligned(test.size(), nullptr);
  for (const auto& e : manifest.entries) {
    auto it = index.find(e.id);
    if (it == index.end()) {
      throw std::runtime_error("manifest id \"" + e.id +
                               "\" is not in the test set");
    }
    if (aligned[it->second] != nullptr) {
      throw std::runtime_error("manifest lists id \"" + e.id + "\" twice");
    }
    if (test.examples[it->second].label != e.gold) {
      throw std::runtime_error("manifest gold label for \"" + e.id +
                               "\" disagrees with the test set");
    }
    aligned[it->second] = &e;
  }
  for (size_t i = 0; i < aligned.size(); ++i) {
    if (aligned[i] == nullptr) {
      throw std::runtime_error("test id \"" + test.examples[i].id +
                               "\" is missing from the manifest");
    }
  }
  return aligned;
}

double ratio(size_t num, size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

double rounded6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::stod(buf);
}

}  // namespace

std::string_view bucketName(Bucket bucket) {
  return bucket == Bucket::Easy ? "easy" : "hard";
}

size_t SplitManifest::count(Bucket bucket) const {
  size_t n = 0;
  for (const auto& e : entries) {
    n += e.bucket == bucket ? 1 : 0;
  }
  return n;
}

SplitManifest partitionFromPredictions(const Dataset& test,
                                       std::span<const Label> predicted,
                                       std::string model_fingerprint) {
  if (test.empty()) {
    throw std::invalid_argument("cannot partition an empty test set");
  }
  if (predicted.size() != test.size()) {
    throw std::invalid_argument("prediction count does not match test set");
  }
  indexById(test);
  SplitManifest m;
  m.dataset_name = test.name;
  m.model_fingerprint = std::move(model_fingerprint);
  m.entries.reserve(test.size());
  for (size_t i = 0; i < test.size(); ++i) {
    const auto& ex = test.examples[i];
    m.entries.push_back({ex.id, ex.label, predicted[i],
                         predicted[i] == ex.label ? Bucket::Easy
                                                  : Bucket::Hard});
  }
  return m;
}

SplitManifest partition(const Model& model, const Dataset& test,
                        std::string model_fingerprint) {
  if (test.empty()) {
    throw std::invalid_argument("cannot partition an empty test set");
  }
  const auto preds = predictAll(model, test);
  std::vector<Label> labels;
  labels.reserve(preds.size());
  for (const auto& p : preds) {
    labels.push_back(p.argmax);
  }
  return partitionFromPredictions(test, labels, std::move(model_fingerprint));
}

void writeManifestJson(const SplitManifest& manifest, std::ostream& out) {
  ojson j;
  j["dataset"] = manifest.dataset_name;
  j["model"] = manifest.model_fingerprint;
  j["counts"] = {{"hard", manifest.count(Bucket::Hard)},
                 {"easy", manifest.count(Bucket::Easy)}};
  ojson entries = ojson::array();
  for (const auto& e : manifest.entries) {
    entries.push_back({{"id", e.id},
                       {"gold", labelName(e.gold)},
                       {"predicted", labelName(e.predicted)},
                       {"bucket", bucketName(e.bucket)}});
  }
  j["entries"] = std::move(entries);
  out << j.dump(1) << '\n';
}

SplitManifest readManifestJson(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("manifest is not a JSON object");
  }
  SplitManifest m;
  try {
    m.dataset_name = j.at("dataset").get<std::string>();
    m.model_fingerprint = j.at("model").get<std::string>();
    std::unordered_set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      SplitEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.gold = requireLabel(e.at("gold").get<std::string>(), "manifest");
      entry.predicted =
          requireLabel(e.at("predicted").get<std::string>(), "manifest");
      const auto bucket = e.at("bucket").get<std::string>();
      if (bucket != "hard" && bucket != "easy") {
        throw std::runtime_error("manifest: unknown bucket \"" + bucket + "\"");
      }
      entry.bucket = bucket == "easy" ? Bucket::Easy : Bucket::Hard;
      if ((entry.bucket == Bucket::Easy) != (entry.gold == entry.predicted)) {
        throw std::runtime_error("manifest: bucket of \"" + entry.id +
                                 "\" contradicts its labels");
      }
      if (!seen.insert(entry.id).second) {
        throw std::runtime_error("manifest lists id \"" + entry.id +
                                 "\" twice");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("manifest: ") + e.what());
  }
  return m;
}

SplitManifest readManifestFile(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error(path + " cannot be opened for reading");
  }
  return readManifestJson(in);
}

SplitFiles writeSplits(const SplitManifest& manifest, const Dataset& test,
                       const std::string& out_dir, const WarningSink& warn) {
  const auto aligned = alignManifest(manifest, test);
  std::filesystem::create_directories(out_dir);
  SplitFiles files;
  files.hard_path = (std::filesystem::path(out_dir) / "hard.jsonl").string();
  files.easy_path = (std::filesystem::path(out_dir) / "easy.jsonl").string();
  std::ofstream hard(files.hard_path, std::ios::binary | std::ios::trunc);
  std::ofstream easy(files.easy_path, std::ios::binary | std::ios::trunc);
  if (!hard.is_open() || !easy.is_open()) {
    throw std::runtime_error("cannot write split files into " + out_dir);
  }
  for (size_t i = 0; i < test.size(); ++i) {
    if (aligned[i]->bucket == Bucket::Easy) {
      easy << test.examples[i].source << '\n';
      ++files.easy_count;
    } else {
      hard << test.examples[i].source << '\n';
      ++files.hard_count;
    }
  }
  if (files.hard_count == 0) {
    warn("hard bucket is empty; " + files.hard_path + " has no records");
  }
  if (files.easy_count == 0) {
    warn("easy bucket is empty; " + files.easy_path + " has no records");
  }
  return files;
}

std::vector<PredictionRecord> parsePredictions(std::string_view contents) {
  std::vector<PredictionRecord> out;
  bool json_lines = false;
  bool decided = false;
  int64_t line_no = 0;
  size_t pos = 0;
  while (pos < contents.size()) {
    size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) {
      end = contents.size();
    }
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      continue;
    }
    const std::string where = "predictions line " + std::to_string(line_no);
    if (!decided) {
      json_lines = line[first] == '{';
      decided = true;
      if (!json_lines && line == "id\tlabel") {
        continue;
      }
    }
    PredictionRecord rec;
    if (json_lines) {
      auto j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw std::runtime_error(where + ": malformed JSON");
      }
      auto id = j.find("id");
      auto label = j.find("label");
      if (id == j.end() || label == j.end() || !label->is_string()) {
        throw std::runtime_error(where + ": expected string fields id, label");
      }
      if (id->is_string()) {
        rec.id = id->get<std::string>();
      } else if (id->is_number_integer()) {
        rec.id = std::to_string(id->get<int64_t>());
      } else {
        throw std::runtime_error(where + ": id must be a string");
      }
      rec.label = requireLabel(label->get<std::string>(), where);
    } else {
      const size_t tab = line.find('\t');
      if (tab == std::string_view::npos ||
          line.find('\t', tab + 1) != std::string_view::npos) {
        throw std::runtime_error(where + ": expected two tab-separated columns");
      }
      rec.id = std::string(line.substr(0, tab));
      rec.label = requireLabel(std::string(line.substr(tab + 1)), where);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PredictionRecord> readPredictionsFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error(path + " cannot be opened for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parsePredictions(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

double ModelScore::fullAccuracy() const { return ratio(full_correct, full_total); }
double ModelScore::hardAccuracy() const { return ratio(hard_correct, hard_total); }
double ModelScore::easyAccuracy() const { return ratio(easy_correct, easy_total); }

bool ModelScore::orderingViolated() const {
  const double full = fullAccuracy();
  return (easy_total > 0 && easyAccuracy() < full) ||
         (hard_total > 0 && hardAccuracy() > full);
}

ModelScore scorePredictions(const std::string& name,
                            std::span<const PredictionRecord> predictions,
                            const SplitManifest& manifest,
                            const Dataset& test) {
  if (test.empty()) {
    throw std::invalid_argument("cannot score against an empty test set");
  }
  const auto aligned = alignManifest(manifest, test);
  const auto index = indexById(test);
  std::vector<char> seen(test.size(), 0);
  ModelScore s;
  s.name = name;
  for (const auto& p : predictions) {
    auto it = index.find(p.id);
    if (it == index.end()) {
      throw std::runtime_error(name + ": unknown id \"" + p.id + "\"");
    }
    if (seen[it->second]) {
      throw std::runtime_error(name + ": duplicate id \"" + p.id + "\"");
    }
    seen[it->second] = 1;
    const bool correct = p.label == test.examples[it->second].label;
    ++s.full_total;
    s.full_correct += correct;
    if (aligned[it->second]->bucket == Bucket::Easy) {
      ++s.easy_total;
      s.easy_correct += correct;
    } else {
      ++s.hard_total;
      s.hard_correct += correct;
    }
  }
  for (size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw std::runtime_error(name + ": missing prediction for id \"" +
                               test.examples[i].id + "\"");
    }
  }
  return s;
}

void writeReportJson(const EvalReport& report, std::ostream& out) {
  ojson j;
  j["dataset"] = report.dataset_name;
  j["model"] = report.model_fingerprint;
  ojson models = ojson::array();
  for (const auto& s : report.scores) {
    models.push_back(
        {{"name", s.name},
         {"full", {{"n", s.full_total},
                   {"correct", s.full_correct},
                   {"accuracy", rounded6(s.fullAccuracy())}}},
         {"hard", {{"n", s.hard_total},
                   {"correct", s.hard_correct},
                   {"accuracy", rounded6(s.hardAccuracy())}}},
         {"easy", {{"n", s.easy_total},
                   {"correct", s.easy_correct},
                   {"accuracy", rounded6(s.easyAccuracy())}}},
         {"ordering_violated", s.orderingViolated()}});
  }
  j["models"] = std::move(models);
  out << j.dump(2) << '\n';
}

void writeReportMarkdown(const EvalReport& report, std::ostream& out) {
  out << "# Full / Hard / Easy evaluation: " << report.dataset_name << "\n\n";
  out << "Partition model: `" << report.model_fingerprint << "`\n\n";
  out << "| model | full | hard | easy | n full | n hard | n easy |\n";
  out << "|---|---:|---:|---:|---:|---:|---:|\n";
  bool any_violation = false;
  for (const auto& s : report.scores) {
    out << "| " << s.name << " | " << pct(s.fullAccuracy()) << " | "
        << pct(s.hardAccuracy()) << " | " << pct(s.easyAccuracy()) << " | "
        << s.full_total << " | " << s.hard_total << " | " << s.easy_total
        << " |\n";
    any_violation = any_violation || s.orderingViolated();
  }
  if (any_violation) {
    out << "\nNote: at least one model does not satisfy easy >= full >= hard.\n";
  }
}

}  // namespace artifact_audit
