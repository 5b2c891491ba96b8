#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corand/common.hpp"

namespace corand {

enum class ScalingState { raw, zscored, group_scaled };
enum class NaPolicy { drop_row, error };
enum class ConstantPolicy { error, zero };

std::string to_string(ScalingState s);

// A set of columns originating from one source variable. Numeric source
// columns form singleton groups; an encoded categorical variable owns one
// indicator column per label.
struct ColumnGroup {
  std::string name;
  IndexSet columns;
  bool categorical = false;
};

// Categorical source column awaiting one-hot encoding. `position` is the
// column's rank among all retained source columns, so encoding can restore
// the original column order.
struct CategoricalColumn {
  std::string name;
  Index position = 0;
  std::vector<std::string> labels;
};

class Dataset {
 public:
  Dataset(MatrixXd values, std::vector<std::string> column_names);
  Dataset(MatrixXd values, std::vector<std::string> column_names, std::vector<ColumnGroup> groups,
          ScalingState state, std::vector<CategoricalColumn> pending = {});

  const MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  const std::vector<ColumnGroup>& column_groups() const noexcept { return groups_; }
  const std::vector<CategoricalColumn>& pending_categoricals() const noexcept { return pending_; }
  ScalingState scaling_state() const noexcept { return state_; }

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }

  // Index of the named column; throws when absent.
  Index column_index(const std::string& name) const;

  // Row subset, preserving column metadata.
  Dataset select_rows(const IndexSet& rows) const;

 private:
  void validate() const;

  MatrixXd values_;
  std::vector<std::string> names_;
  std::vector<ColumnGroup> groups_;
  ScalingState state_ = ScalingState::raw;
  std::vector<CategoricalColumn> pending_;
};

struct CenteredData {
  MatrixXd values;
  VectorXd column_means;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  NaPolicy na_policy = NaPolicy::drop_row;
  // Columns to retain, by name; empty keeps everything.
  std::vector<std::string> select;
  // Columns forced to categorical even when every value parses as a number.
  std::vector<std::string> categorical;
};

Dataset load_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv_file(const std::string& path, const CsvOptions& options = {});
Dataset load_csv_string(const std::string& text, const CsvOptions& options = {});

void write_csv(std::ostream& out, const Dataset& d, char delimiter = ',');
void write_matrix_csv(std::ostream& out, const MatrixXd& values, const std::vector<std::string>& header,
                      char delimiter = ',');

// Zero mean, unit population variance for every numeric column. Encoded
// categorical groups are left as they are.
Dataset zscore(const Dataset& d, ConstantPolicy policy = ConstantPolicy::error);

// Expands pending categorical columns into indicator groups, each group
// rescaled to a total population variance of one.
Dataset onehot_encode(const Dataset& d);

CenteredData center(const Dataset& d);

// Subtracts column means from any dense expression.
template <typename Derived>
Matrix<typename Derived::Scalar> centered(const Eigen::MatrixBase<Derived>& x) {
  return x.rowwise() - x.colwise().mean();
}

}  // namespace corand
