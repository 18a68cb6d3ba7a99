#pragma once

#include <string>

#include "ccq/cliquesim.hpp"
#include "ccq/matrix.hpp"

namespace ccq {

enum class Layout : unsigned { rows = 1, cols = 2, rows_and_cols = 3 };

inline bool has_rows(Layout l) noexcept { return (static_cast<unsigned>(l) & 1U) != 0; }
inline bool has_cols(Layout l) noexcept { return (static_cast<unsigned>(l) & 2U) != 0; }

/// Handle to a matrix spread over the active range: relative node j holds
/// row j under `key/row` (j < rows) and column j under `key/col` (j < cols),
/// depending on the layout.
struct DistributedMatrix {
  std::string key;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Layout layout = Layout::rows_and_cols;

  [[nodiscard]] std::string row_key() const { return key + "/row"; }
  [[nodiscard]] std::string col_key() const { return key + "/col"; }
  [[nodiscard]] DistributedMatrix with_layout(Layout l) const { return {key, rows, cols, l}; }
};

/// Driver-side placement of an input (not charged).
DistributedMatrix scatter(CliqueWorld& w, const std::string& key, const Matrix<Word>& m,
                          Layout layout = Layout::rows_and_cols);
/// Driver-side collection of an output from its rows (or columns if the
/// layout has no rows).
Matrix<Word> gather(CliqueWorld& w, const DistributedMatrix& d);
/// Collect from the column copies specifically.
Matrix<Word> gather_cols(CliqueWorld& w, const DistributedMatrix& d);

void erase(CliqueWorld& w, const DistributedMatrix& d);

/// Node-local move of every held row and column to a new key.
DistributedMatrix rename(CliqueWorld& w, const DistributedMatrix& d, const std::string& key);
/// Node-local: rows of d become columns of the result and vice versa.
DistributedMatrix transpose(CliqueWorld& w, const DistributedMatrix& d, const std::string& key);
/// Adds the missing row or column copies by one routed redistribution.
DistributedMatrix complete_layout(CliqueWorld& w, const DistributedMatrix& d, Layout want);

}  // namespace ccq
