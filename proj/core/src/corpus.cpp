#include "pstat/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "pstat/csv.hpp"
#include "pstat/errors.hpp"

namespace pstat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

std::string header_string(const std::vector<std::string>& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ',';
    out += h[i];
  }
  return out;
}

}  // namespace

std::vector<TextInstance> read_corpus(std::istream& in,
                                      const CorpusColumns& columns) {
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw ConfigError("corpus is empty (no header)");

  const auto text_col = csv::find_column(header, columns.text_column);
  if (!text_col) {
    throw ConfigError("text column '" + columns.text_column +
                      "' not found in header: " + header_string(header));
  }
  const auto label_col = csv::find_column(header, columns.label_column);
  if (!label_col) {
    throw ConfigError("label column '" + columns.label_column +
                      "' not found in header: " + header_string(header));
  }
  std::optional<std::size_t> id_col;
  if (columns.id_column) id_col = csv::find_column(header, *columns.id_column);

  const std::size_t needed =
      std::max({*text_col, *label_col, id_col.value_or(0)}) + 1;

  std::vector<TextInstance> out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::size_t row = reader.record_line();
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() < needed) {
      throw ParseError(row, fmt::format("expected at least {} fields, got {}",
                                        needed, fields.size()));
    }
    TextInstance inst;
    inst.id = id_col ? fields[*id_col] : std::to_string(out.size());
    inst.text = fields[*text_col];
    inst.raw_label = std::string(trim(fields[*label_col]));
    if (trim(inst.text).empty()) throw ParseError(row, "empty text");
    if (!seen.insert(inst.id).second) {
      throw ParseError(row, "duplicate id '" + inst.id + "'");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TextInstance> load_corpus(const std::filesystem::path& path,
                                      const CorpusColumns& columns) {
  auto in = open_input(path);
  return read_corpus(in, columns);
}

void write_corpus(std::ostream& out, std::span<const TextInstance> instances,
                  const CorpusColumns& columns) {
  csv::write_row(out, {columns.id_column.value_or("id"), columns.text_column,
                       columns.label_column});
  for (const auto& inst : instances) {
    csv::write_row(out, {inst.id, inst.text, inst.raw_label});
  }
}

LabelMapping LabelMapping::davidson() { return {"davidson", {"0"}}; }

LabelMapping LabelMapping::from_list(std::string name,
                                     const std::string& csv_list) {
  LabelMapping m{std::move(name), {}};
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) m.positive_classes.emplace(t);
  }
  if (m.positive_classes.empty()) {
    throw ConfigError("label mapping needs at least one positive class");
  }
  return m;
}

std::vector<BinaryLabel> binarize(std::span<const TextInstance> instances,
                                  const LabelMapping& mapping) {
  std::vector<BinaryLabel> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back({inst.id, mapping.positive_classes.count(inst.raw_label) ? 1 : 0});
  }
  return out;
}

std::size_t LabeledDataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [label](const auto& r) { return r.label == label; }));
}

void LabeledDataset::require_both_labels() const {
  if (rows.empty()) throw InsufficientDataError("dataset '" + name + "' is empty");
  const auto pos = count_label(1);
  if (pos == 0 || pos == rows.size()) {
    throw InsufficientDataError("dataset '" + name +
                                "' contains a single class; need both labels");
  }
}

void LabeledDataset::validate() const {
  for (const auto& r : rows) {
    validate_scores(r.scores);
    if (r.label != 0 && r.label != 1) {
      throw RangeError("row '" + r.id + "': label must be 0 or 1");
    }
  }
}

std::vector<std::string> dataset_header() {
  std::vector<std::string> h{"id"};
  for (auto name : kAttributeNames) h.emplace_back(name);
  h.emplace_back("label");
  return h;
}

void write_dataset(std::ostream& out, const LabeledDataset& dataset) {
  dataset.validate();
  csv::write_row(out, dataset_header());
  std::vector<std::string> fields(kNumAttributes + 2);
  for (const auto& r : dataset.rows) {
    fields[0] = r.id;
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      fields[j + 1] = fmt::format("{:.17g}", r.scores[j]);
    }
    fields[kNumAttributes + 1] = r.label ? "1" : "0";
    csv::write_row(out, fields);
  }
}

void save_dataset(const std::filesystem::path& path,
                  const LabeledDataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_dataset(out, dataset);
  if (!out) throw Error("write failed: " + path.string());
}

LabeledDataset read_dataset(std::istream& in, std::string name,
                            DatasetLoadReport* report) {
  const auto expected = dataset_header();
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header) || header != expected) {
    throw SchemaError("dataset header mismatch; expected schema: " +
                      header_string(expected) + "; got: " + header_string(header));
  }

  LabeledDataset ds;
  ds.name = std::move(name);
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::size_t row = reader.record_line();
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != expected.size()) {
      throw SchemaError(fmt::format("row {}: expected {} fields ({}), got {}",
                                    row, expected.size(),
                                    header_string(expected), fields.size()));
    }
    DatasetRow r;
    r.id = fields[0];
    std::optional<std::string> missing;
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      auto cell = trim(fields[j + 1]);
      if (cell.empty()) {
        missing = std::string(kAttributeNames[j]);
        break;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError(row, fmt::format("bad {} value '{}'", kAttributeNames[j], cell));
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError(fmt::format("row {}: {} score {} outside [0,1]", row,
                                     kAttributeNames[j], cell));
      }
      r.scores[j] = v;
    }
    if (missing) {
      if (report) report->excluded.push_back({row, r.id, "missing " + *missing});
      continue;
    }
    auto label = trim(fields.back());
    if (label == "1") {
      r.label = 1;
    } else if (label == "0") {
      r.label = 0;
    } else {
      throw ParseError(row, "label must be 0 or 1, got '" + std::string(label) + "'");
    }
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

LabeledDataset load_dataset(const std::filesystem::path& path,
                            DatasetLoadReport* report) {
  auto in = open_input(path);
  return read_dataset(in, path.stem().string(), report);
}

}  // namespace pstat
