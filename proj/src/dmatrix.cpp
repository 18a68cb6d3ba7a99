#include "ccq/dmatrix.hpp"

namespace ccq {

DistributedMatrix scatter(CliqueWorld& w, const std::string& key, const Matrix<Word>& m, Layout layout) {
  const NodeRange r = w.active();
  DistributedMatrix d{key, m.rows(), m.cols(), layout};
  if ((has_rows(layout) && m.rows() > r.count) || (has_cols(layout) && m.cols() > r.count))
    throw dimension_error("matrix " + key + " does not fit the active range");
  if (has_rows(layout))
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto row = m.row(i);
      w.store(r.first + i).put(d.row_key(), {row.begin(), row.end()});
    }
  if (has_cols(layout))
    for (std::size_t j = 0; j < m.cols(); ++j) w.store(r.first + j).put(d.col_key(), m.col(j));
  return d;
}

Matrix<Word> gather(CliqueWorld& w, const DistributedMatrix& d) {
  if (!has_rows(d.layout)) return gather_cols(w, d);
  const NodeRange r = w.active();
  Matrix<Word> m(d.rows, d.cols);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const auto& row = w.store(r.first + i).get(d.row_key());
    if (row.size() != d.cols) throw dimension_error("row length mismatch in " + d.key);
    std::copy(row.begin(), row.end(), m.row(i).begin());
  }
  return m;
}

Matrix<Word> gather_cols(CliqueWorld& w, const DistributedMatrix& d) {
  const NodeRange r = w.active();
  Matrix<Word> m(d.rows, d.cols);
  for (std::size_t j = 0; j < d.cols; ++j) {
    const auto& col = w.store(r.first + j).get(d.col_key());
    if (col.size() != d.rows) throw dimension_error("column length mismatch in " + d.key);
    for (std::size_t i = 0; i < d.rows; ++i) m(i, j) = col[i];
  }
  return m;
}

void erase(CliqueWorld& w, const DistributedMatrix& d) {
  const NodeRange r = w.active();
  for (std::size_t j = 0; j < r.count; ++j) {
    w.store(r.first + j).erase(d.row_key());
    w.store(r.first + j).erase(d.col_key());
  }
}

DistributedMatrix rename(CliqueWorld& w, const DistributedMatrix& d, const std::string& key) {
  DistributedMatrix r{key, d.rows, d.cols, d.layout};
  w.run_local("rename", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    for (auto [from, to] : {std::pair{d.row_key(), r.row_key()}, std::pair{d.col_key(), r.col_key()}})
      if (st.has(from)) {
        st.put(to, std::move(st.mut(from)));
        st.erase(from);
      }
  });
  return r;
}

DistributedMatrix transpose(CliqueWorld& w, const DistributedMatrix& d, const std::string& key) {
  const unsigned l = static_cast<unsigned>(d.layout);
  DistributedMatrix r{key, d.cols, d.rows, static_cast<Layout>(((l & 1U) << 1) | ((l & 2U) >> 1))};
  w.run_local("transpose", [&](NodeContext& ctx) {
    auto& st = ctx.store();
    if (st.has(d.row_key())) st.put(r.col_key(), st.get(d.row_key()));
    if (st.has(d.col_key())) st.put(r.row_key(), st.get(d.col_key()));
  });
  return r;
}

DistributedMatrix complete_layout(CliqueWorld& w, const DistributedMatrix& d, Layout want) {
  const bool need_rows = has_rows(want) && !has_rows(d.layout);
  const bool need_cols = has_cols(want) && !has_cols(d.layout);
  if (!need_rows && !need_cols) return d;
  constexpr Tag tag = 201;
  w.exchange("relayout", [&](NodeContext& ctx, Outbox& box) {
    const std::size_t l = ctx.rel();
    if (need_cols && l < d.rows) {
      const auto& row = ctx.store().get(d.row_key());
      for (std::size_t j = 0; j < d.cols; ++j) box.send(j, tag, {row[j]});
    }
    if (need_rows && l < d.cols) {
      const auto& col = ctx.store().get(d.col_key());
      for (std::size_t i = 0; i < d.rows; ++i) box.send(i, tag, {col[i]});
    }
  });
  w.run_local("relayout.assemble", [&](NodeContext& ctx) {
    auto in = ctx.store().take(tag);
    if (in.empty()) return;
    std::vector<Word> v(need_cols ? d.rows : d.cols, 0);
    for (auto& e : in) v[e.source] = e.payload[0];
    ctx.store().put(need_cols ? d.col_key() : d.row_key(), std::move(v));
  });
  return d.with_layout(Layout::rows_and_cols);
}

}  // namespace ccq
