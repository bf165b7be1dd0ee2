#include "artifact_audit/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace artifact_audit {

namespace {

using json = nlohmann::json;

bool isBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  });
}

const std::string& requireString(const json& obj, const char* field,
                                 int64_t line_no) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw ParseError(line_no, std::string("missing field \"") + field + "\"");
  }
  if (!it->is_string()) {
    throw ParseError(line_no,
                     std::string("field \"") + field + "\" is not a string");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

std::string_view labelName(Label label) {
  switch (label) {
    case Label::Entailment:
      return "entailment";
    case Label::Neutral:
      return "neutral";
    case Label::Contradiction:
      return "contradiction";
  }
  return "?";
}

std::optional<Label> parseLabel(std::string_view name) {
  for (Label l : kAllLabels) {
    if (labelName(l) == name) {
      return l;
    }
  }
  return std::nullopt;
}

std::string_view splitName(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Dev:
      return "dev";
    case Split::Test:
      return "test";
  }
  return "?";
}

ParseError::ParseError(int64_t line_no, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
      line_no_(line_no),
      detail_(what) {}

ParseResult parseRecord(std::string_view line, int64_t line_no) {
  json obj = json::parse(line.begin(), line.end(), nullptr, false);
  if (obj.is_discarded()) {
    throw ParseError(line_no, "malformed JSON");
  }
  if (!obj.is_object()) {
    throw ParseError(line_no, "record is not a JSON object");
  }
  const std::string& premise = requireString(obj, "sentence1", line_no);
  const std::string& hypothesis = requireString(obj, "sentence2", line_no);
  const std::string& gold = requireString(obj, "gold_label", line_no);

  if (gold == "-") {
    return Skip{"no gold label"};
  }
  auto label = parseLabel(gold);
  if (!label) {
    throw ParseError(line_no, "unrecognized gold_label \"" + gold + "\"");
  }
  if (isBlank(premise) || isBlank(hypothesis)) {
    return Skip{"blank premise or hypothesis"};
  }

  Example ex;
  auto pair_id = obj.find("pairID");
  if (pair_id != obj.end() && pair_id->is_string()) {
    ex.id = pair_id->get<std::string>();
  } else if (pair_id != obj.end() && pair_id->is_number_integer()) {
    ex.id = std::to_string(pair_id->get<int64_t>());
  } else {
    ex.id = "line:" + std::to_string(line_no);
  }
  ex.premise = premise;
  ex.hypothesis = hypothesis;
  ex.label = *label;
  auto genre = obj.find("genre");
  if (genre != obj.end() && genre->is_string()) {
    ex.genre = genre->get<std::string>();
  }
  ex.source = std::string(line);
  return ex;
}

LoadResult loadDatasetFromString(std::string_view contents,
                                 const std::string& name, Split split) {
  LoadResult result;
  result.dataset.name = name;
  result.dataset.split = split;
  std::unordered_set<std::string> seen;

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
    if (isBlank(line)) {
      ++result.skipped;
      continue;
    }
    ParseResult parsed = parseRecord(line, line_no);
    if (std::holds_alternative<Skip>(parsed)) {
      ++result.skipped;
      continue;
    }
    Example& ex = std::get<Example>(parsed);
    if (!seen.insert(ex.id).second) {
      throw ParseError(line_no, "duplicate pair id \"" + ex.id + "\"");
    }
    result.dataset.examples.push_back(std::move(ex));
  }
  return result;
}

LoadResult loadDataset(const std::string& path, const std::string& name,
                       Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error(path + " cannot be opened for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return loadDatasetFromString(buf.str(), name, split);
  } catch (const ParseError& e) {
    throw ParseError(e.lineNo(), path + ": " + e.detail());
  }
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      seq.tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' ||
               c >= 0x80) {
      current.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return seq;
}

std::array<size_t, kNumLabels> labelCounts(const Dataset& dataset) {
  std::array<size_t, kNumLabels> counts{};
  for (const auto& ex : dataset.examples) {
    ++counts[labelIndex(ex.label)];
  }
  return counts;
}

double majorityBaseline(const Dataset& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("majority baseline of an empty dataset");
  }
  auto counts = labelCounts(dataset);
  size_t best = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(best) / static_cast<double>(dataset.size());
}

}  // namespace artifact_audit
