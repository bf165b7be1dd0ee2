#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace artifact_audit {

enum class Label : uint8_t { Entailment = 0, Neutral = 1, Contradiction = 2 };

constexpr int kNumLabels = 3;
constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::Entailment, Label::Neutral, Label::Contradiction};

std::string_view labelName(Label label);
inline int labelIndex(Label label) { return static_cast<int>(label); }

// Accepts only the canonical lowercase names. "-" is not a label; callers
// that read gold labels handle it before getting here.
std::optional<Label> parseLabel(std::string_view name);

enum class Split : uint8_t { Train, Dev, Test };
std::string_view splitName(Split split);

struct Example {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label label = Label::Entailment;
  std::optional<std::string> genre;
  // The input line exactly as read, so subsets can be re-emitted verbatim.
  std::string source;
};

struct Dataset {
  std::string name;
  Split split = Split::Test;
  std::vector<Example> examples;

  size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int64_t line_no, const std::string& what);
  int64_t lineNo() const { return line_no_; }
  const std::string& detail() const { return detail_; }

 private:
  int64_t line_no_;
  std::string detail_;
};

struct Skip {
  std::string reason;
};

using ParseResult = std::variant<Example, Skip>;

// Parses one SNLI/MultiNLI JSON-lines record. Records with gold_label "-"
// (and records whose premise or hypothesis is blank) come back as Skip.
// Throws ParseError for malformed input.
ParseResult parseRecord(std::string_view line, int64_t line_no);

struct LoadResult {
  Dataset dataset;
  size_t skipped = 0;
};

// Reads a whole JSON-lines file in order. Throws std::runtime_error when the
// file cannot be opened and ParseError on the first bad record.
LoadResult loadDataset(const std::string& path, const std::string& name,
                       Split split);
LoadResult loadDatasetFromString(std::string_view contents,
                                 const std::string& name, Split split);

struct TokenSeq {
  std::vector<std::string> tokens;
  size_t length() const { return tokens.size(); }
};

// Lowercases ASCII letters, maps every byte that is not a letter, digit or
// apostrophe to a space, and splits on whitespace. Bytes >= 0x80 (UTF-8
// continuation/lead bytes) count as letters and are kept verbatim.
TokenSeq tokenize(std::string_view text);

std::array<size_t, kNumLabels> labelCounts(const Dataset& dataset);

// Fraction of examples carrying the most frequent label.
double majorityBaseline(const Dataset& dataset);

}  // namespace artifact_audit
