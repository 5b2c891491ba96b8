#include "corand/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace corand {

std::string to_string(ScalingState s) {
  switch (s) {
    case ScalingState::raw: return "raw";
    case ScalingState::zscored: return "zscored";
    case ScalingState::group_scaled: return "group-scaled";
  }
  return "raw";
}

namespace {

std::vector<ColumnGroup> singleton_groups(const std::vector<std::string>& names) {
  std::vector<ColumnGroup> groups;
  groups.reserve(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    groups.push_back({names[j], {static_cast<Index>(j)}, false});
  }
  return groups;
}

}  // namespace

Dataset::Dataset(MatrixXd values, std::vector<std::string> column_names)
    : values_(std::move(values)), names_(std::move(column_names)) {
  groups_ = singleton_groups(names_);
  validate();
}

Dataset::Dataset(MatrixXd values, std::vector<std::string> column_names, std::vector<ColumnGroup> groups,
                 ScalingState state, std::vector<CategoricalColumn> pending)
    : values_(std::move(values)),
      names_(std::move(column_names)),
      groups_(std::move(groups)),
      state_(state),
      pending_(std::move(pending)) {
  validate();
}

void Dataset::validate() const {
  const Index n = values_.rows();
  const Index m = values_.cols();
  if (n < 2) throw Error("dataset.too_few_rows", "dataset needs at least 2 rows, got " + std::to_string(n));
  if (m < 1 && pending_.empty()) throw Error("dataset.no_columns", "dataset has no columns");
  if (static_cast<Index>(names_.size()) != m) {
    throw Error("dataset.invalid", "column name count does not match column count");
  }
  if (!values_.allFinite()) throw Error("dataset.non_finite", "dataset contains non-finite values");

  std::vector<int> seen(static_cast<std::size_t>(m), 0);
  for (const auto& g : groups_) {
    for (Index c : g.columns) {
      if (c < 0 || c >= m) throw Error("dataset.invalid", "column group '" + g.name + "' is out of range");
      ++seen[static_cast<std::size_t>(c)];
    }
  }
  for (int s : seen) {
    if (s != 1) throw Error("dataset.invalid", "column groups must partition the columns");
  }
  for (const auto& p : pending_) {
    if (static_cast<Index>(p.labels.size()) != n) {
      throw Error("dataset.invalid", "categorical column '" + p.name + "' has wrong length");
    }
  }
}

Index Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<Index>(j);
  }
  throw Error("dataset.unknown_column", "no column named '" + name + "'");
}

Dataset Dataset::select_rows(const IndexSet& rows) const {
  MatrixXd sub(static_cast<Index>(rows.size()), cols());
  for (std::size_t k = 0; k < rows.size(); ++k) sub.row(static_cast<Index>(k)) = values_.row(rows[k]);
  std::vector<CategoricalColumn> pending = pending_;
  for (auto& p : pending) {
    std::vector<std::string> labels;
    labels.reserve(rows.size());
    for (Index r : rows) labels.push_back(p.labels[static_cast<std::size_t>(r)]);
    p.labels = std::move(labels);
  }
  return Dataset(std::move(sub), names_, groups_, state_, std::move(pending));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == delim) {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

bool is_na(const std::string& token) { return token.empty() || token == "NA"; }

enum class NumParse { ok, not_number, non_finite };

NumParse parse_number(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) return NumParse::not_number;
  return std::isfinite(out) ? NumParse::ok : NumParse::non_finite;
}

std::string quote_if_needed(const std::string& s, char delim) {
  if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

}  // namespace

Dataset load_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, options.delimiter);
    if (header.empty() && options.header) {
      header = std::move(fields);
      continue;
    }
    if (header.empty()) {
      for (std::size_t j = 0; j < fields.size(); ++j) header.push_back("V" + std::to_string(j + 1));
    }
    if (fields.size() != header.size()) {
      throw ParseError("csv.bad_row",
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    records.push_back(std::move(fields));
    record_lines.push_back(line_no);
  }
  if (records.empty()) throw Error("csv.empty", "CSV input contains no data rows");

  std::vector<std::size_t> keep;
  if (options.select.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) keep.push_back(j);
  } else {
    for (const auto& name : options.select) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw Error("csv.unknown_column", "selected column '" + name + "' not in header");
      keep.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }

  std::vector<std::size_t> kept_rows;
  for (std::size_t r = 0; r < records.size(); ++r) {
    bool has_na = false;
    for (std::size_t j : keep) has_na = has_na || is_na(records[r][j]);
    if (!has_na) {
      kept_rows.push_back(r);
    } else if (options.na_policy == NaPolicy::error) {
      throw ParseError("csv.na", "missing value under na policy 'error'", record_lines[r]);
    }
  }
  if (kept_rows.empty()) throw Error("csv.empty", "no complete rows remain after dropping missing values");

  const std::set<std::string> forced(options.categorical.begin(), options.categorical.end());
  std::vector<bool> numeric(keep.size(), true);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (forced.count(header[keep[k]])) {
      numeric[k] = false;
      continue;
    }
    for (std::size_t r : kept_rows) {
      double v = 0.0;
      const auto status = parse_number(records[r][keep[k]], v);
      if (status == NumParse::non_finite) {
        throw ParseError("csv.non_finite", "non-finite number in column '" + header[keep[k]] + "'",
                         record_lines[r]);
      }
      if (status == NumParse::not_number) {
        numeric[k] = false;
        break;
      }
    }
  }

  const auto n = static_cast<Index>(kept_rows.size());
  const auto numeric_count = static_cast<Index>(std::count(numeric.begin(), numeric.end(), true));
  MatrixXd values(n, numeric_count);
  std::vector<std::string> names;
  std::vector<CategoricalColumn> pending;
  Index col = 0;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t src = keep[k];
    if (numeric[k]) {
      for (Index i = 0; i < n; ++i) {
        double v = 0.0;
        parse_number(records[kept_rows[static_cast<std::size_t>(i)]][src], v);
        values(i, col) = v;
      }
      names.push_back(header[src]);
      ++col;
    } else {
      CategoricalColumn c{header[src], static_cast<Index>(k), {}};
      c.labels.reserve(kept_rows.size());
      for (std::size_t r : kept_rows) c.labels.push_back(records[r][src]);
      pending.push_back(std::move(c));
    }
  }
  auto groups = singleton_groups(names);
  return Dataset(std::move(values), std::move(names), std::move(groups), ScalingState::raw, std::move(pending));
}

Dataset load_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("io.open_failed", "cannot open '" + path + "'");
  return load_csv(in, options);
}

Dataset load_csv_string(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  return load_csv(in, options);
}

void write_matrix_csv(std::ostream& out, const MatrixXd& values, const std::vector<std::string>& header,
                      char delimiter) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << delimiter;
    out << quote_if_needed(header[j], delimiter);
  }
  if (!header.empty()) out << '\n';
  const auto old_precision = out.precision(17);
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out << delimiter;
      out << values(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_csv(std::ostream& out, const Dataset& d, char delimiter) {
  write_matrix_csv(out, d.values(), d.column_names(), delimiter);
}

// ---------------------------------------------------------------------------
// Scaling

Dataset zscore(const Dataset& d, ConstantPolicy policy) {
  MatrixXd v = d.values();
  const double n = static_cast<double>(v.rows());
  bool has_categorical = false;
  for (const auto& g : d.column_groups()) {
    if (g.categorical) {
      has_categorical = true;
      continue;
    }
    for (Index j : g.columns) {
      auto column = v.col(j);
      const double mean = column.mean();
      const double var = (column.array() - mean).square().sum() / n;
      const double scale = std::max(1.0, column.cwiseAbs().maxCoeff());
      if (std::sqrt(var) <= 1e-12 * scale) {
        if (policy == ConstantPolicy::error) {
          throw Error("dataset.constant_column",
                      "column '" + d.column_names()[static_cast<std::size_t>(j)] + "' is constant");
        }
        column.setZero();
        continue;
      }
      column = (column.array() - mean) / std::sqrt(var);
    }
  }
  const auto state = has_categorical ? ScalingState::group_scaled : ScalingState::zscored;
  return Dataset(std::move(v), d.column_names(), d.column_groups(), state, d.pending_categoricals());
}

Dataset onehot_encode(const Dataset& d) {
  const auto& pending = d.pending_categoricals();
  if (pending.empty()) return d;

  const Index n = d.rows();
  std::map<Index, const CategoricalColumn*> by_position;
  for (const auto& p : pending) by_position[p.position] = &p;

  std::vector<std::string> group_of(static_cast<std::size_t>(d.cols()));
  std::vector<bool> categorical_of(static_cast<std::size_t>(d.cols()), false);
  for (const auto& g : d.column_groups()) {
    for (Index c : g.columns) {
      group_of[static_cast<std::size_t>(c)] = g.name;
      categorical_of[static_cast<std::size_t>(c)] = g.categorical;
    }
  }

  std::vector<VectorXd> columns;
  std::vector<std::string> names;
  std::vector<ColumnGroup> groups;
  std::unordered_map<std::string, std::size_t> group_index;
  auto add_to_group = [&](const std::string& gname, bool categorical, Index column) {
    auto it = group_index.find(gname);
    if (it == group_index.end()) {
      group_index.emplace(gname, groups.size());
      groups.push_back({gname, {column}, categorical});
    } else {
      groups[it->second].columns.push_back(column);
    }
  };

  const Index total = d.cols() + static_cast<Index>(pending.size());
  Index next_numeric = 0;
  for (Index pos = 0; pos < total; ++pos) {
    auto it = by_position.find(pos);
    if (it == by_position.end()) {
      const auto j = static_cast<std::size_t>(next_numeric);
      columns.emplace_back(d.values().col(next_numeric));
      names.push_back(d.column_names()[j]);
      add_to_group(group_of[j], categorical_of[j], static_cast<Index>(columns.size() - 1));
      ++next_numeric;
      continue;
    }
    const CategoricalColumn& cat = *it->second;
    std::set<std::string> label_set(cat.labels.begin(), cat.labels.end());
    if (label_set.size() < 2) {
      throw Error("dataset.single_label", "categorical column '" + cat.name + "' has a single label");
    }
    std::vector<VectorXd> indicators;
    double total_variance = 0.0;
    for (const auto& label : label_set) {
      VectorXd ind(n);
      for (Index i = 0; i < n; ++i) ind(i) = cat.labels[static_cast<std::size_t>(i)] == label ? 1.0 : 0.0;
      const double p = ind.mean();
      total_variance += p * (1.0 - p);
      indicators.push_back(std::move(ind));
    }
    const double scale = 1.0 / std::sqrt(total_variance);
    auto label_it = label_set.begin();
    for (auto& ind : indicators) {
      columns.emplace_back(ind * scale);
      names.push_back(cat.name + "." + *label_it++);
      add_to_group(cat.name, true, static_cast<Index>(columns.size() - 1));
    }
  }

  MatrixXd values(n, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) values.col(static_cast<Index>(j)) = columns[j];
  return Dataset(std::move(values), std::move(names), std::move(groups), ScalingState::group_scaled);
}

CenteredData center(const Dataset& d) {
  CenteredData c;
  c.column_means = d.values().colwise().mean().transpose();
  c.values = d.values().rowwise() - c.column_means.transpose();
  return c;
}

}  // namespace corand
