#ifndef PSTAT_CORPUS_HPP_
#define PSTAT_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pstat/attributes.hpp"

namespace pstat {

struct TextInstance {
  std::string id;
  std::string text;
  std::string raw_label;

  bool operator==(const TextInstance&) const = default;
};

struct CorpusColumns {
  std::string text_column = "tweet";
  std::string label_column = "class";
  // When unset, or absent from the header, ids are the 0-based data row index.
  std::optional<std::string> id_column;
};

// Reads a labeled text corpus in file order. Missing columns raise
// ConfigError; short rows, empty texts and duplicate ids raise ParseError
// naming the row.
std::vector<TextInstance> read_corpus(std::istream& in,
                                      const CorpusColumns& columns);
std::vector<TextInstance> load_corpus(const std::filesystem::path& path,
                                      const CorpusColumns& columns);

void write_corpus(std::ostream& out, std::span<const TextInstance> instances,
                  const CorpusColumns& columns);

// Raw labels in positive_classes map to 1, everything else to 0.
struct LabelMapping {
  std::string name;
  std::set<std::string> positive_classes;

  // Davidson et al. class codes: 0 hate, 1 offensive, 2 neither. Only hate is
  // positive.
  static LabelMapping davidson();
  static LabelMapping from_list(std::string name, const std::string& csv_list);
};

struct BinaryLabel {
  std::string id;
  int label = 0;

  bool operator==(const BinaryLabel&) const = default;
};

std::vector<BinaryLabel> binarize(std::span<const TextInstance> instances,
                                  const LabelMapping& mapping);

struct DatasetRow {
  std::string id;
  ScoreVector scores{};
  int label = 0;

  bool operator==(const DatasetRow&) const = default;
};

// Score matrix with binary labels. Columns always follow the canonical
// attribute order.
struct LabeledDataset {
  std::string name;
  std::vector<DatasetRow> rows;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t count_label(int label) const;

  // Throws InsufficientDataError unless both labels are present.
  void require_both_labels() const;
  // Throws RangeError on any score outside [0,1] or label outside {0,1}.
  void validate() const;

  bool operator==(const LabeledDataset&) const = default;
};

// Header of the dataset file: id, the nine attributes, label.
std::vector<std::string> dataset_header();

struct ExcludedRow {
  std::size_t line = 0;
  std::string id;
  std::string reason;
};

struct DatasetLoadReport {
  std::vector<ExcludedRow> excluded;
};

// Scores are written with 17 significant digits so a load after save
// restores every double exactly. Output uses LF line endings.
void write_dataset(std::ostream& out, const LabeledDataset& dataset);
void save_dataset(const std::filesystem::path& path,
                  const LabeledDataset& dataset);

// Rows with an empty score cell are skipped and listed in the report. A
// header that differs from dataset_header() raises SchemaError, an out of
// range score raises RangeError.
LabeledDataset read_dataset(std::istream& in, std::string name,
                            DatasetLoadReport* report = nullptr);
LabeledDataset load_dataset(const std::filesystem::path& path,
                            DatasetLoadReport* report = nullptr);

}  // namespace pstat

#endif  // PSTAT_CORPUS_HPP_
