#include "ccq/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ccq/kernels.hpp"

namespace ccq {

namespace {

struct Token {
  std::string_view text;
  std::size_t line, column;
};

// Non-comment lines split into whitespace-separated tokens.
class Lines {
 public:
  Lines(std::string_view text, std::string origin) : origin_(std::move(origin)) {
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::vector<Token> toks;
      for (std::size_t i = 0; i < line.size();) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) toks.push_back({line.substr(start, i - start), lineno, start + 1});
      }
      if (!toks.empty()) lines_.push_back(std::move(toks));
      last_line_ = lineno;
      if (end == text.size()) break;
      pos = end + 1;
    }
  }

  [[nodiscard]] bool more() const noexcept { return next_ < lines_.size(); }
  [[nodiscard]] bool at_end() const noexcept { return next_ == lines_.size(); }
  const std::vector<Token>& take(std::string_view what) {
    if (at_end()) throw parse_error(origin_, last_line_, 1, "unexpected end of input, expected " + std::string(what));
    return lines_[next_++];
  }
  [[nodiscard]] const std::string& origin() const noexcept { return origin_; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw parse_error(origin_, t.line, t.column, msg); }

  void expect_count(const std::vector<Token>& toks, std::size_t lo, std::size_t hi, std::string_view what) const {
    if (toks.size() < lo) {
      const Token& last = toks.back();
      throw parse_error(origin_, last.line, last.column + last.text.size(), "too few fields, expected " + std::string(what));
    }
    if (toks.size() > hi) fail(toks[hi], "unexpected extra field, expected " + std::string(what));
  }

  template <class T>
  T number(const Token& t, std::string_view what) const {
    T v{};
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
      fail(t, "expected " + std::string(what) + ", found '" + std::string(t.text) + "'");
    return v;
  }

  void finish() const {
    if (!at_end()) fail(lines_[next_].front(), "unexpected trailing line");
  }

 private:
  std::string origin_;
  std::vector<std::vector<Token>> lines_;
  std::size_t next_ = 0, last_line_ = 1;
};

}  // namespace

parse_error::parse_error(const std::string& origin, std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

FieldMatrixData parse_field_matrix(std::string_view text, const std::string& origin) {
  Lines in(text, origin);
  const auto& head = in.take("header 'rows cols p'");
  in.expect_count(head, 3, 3, "'rows cols p'");
  const auto rows = in.number<std::size_t>(head[0], "row count");
  const auto cols = in.number<std::size_t>(head[1], "column count");
  const auto p = in.number<Word>(head[2], "prime modulus");
  if (!is_prime(p)) in.fail(head[2], std::to_string(p) + " is not prime");
  FieldMatrixData d{p, FieldMatrix(rows, cols, 0)};
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& toks = in.take("matrix row " + std::to_string(i));
    in.expect_count(toks, cols, cols, std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) {
      const Word v = in.number<Word>(toks[j], "an integer in [0, p)");
      if (v >= p) in.fail(toks[j], "entry " + std::to_string(v) + " is not below p = " + std::to_string(p));
      d.m(i, j) = v;
    }
  }
  in.finish();
  return d;
}

MinPlusData parse_minplus(std::string_view text, const std::string& origin) {
  Lines in(text, origin);
  const auto& head = in.take("header 'rows cols M'");
  in.expect_count(head, 3, 3, "'rows cols M'");
  const auto rows = in.number<std::size_t>(head[0], "row count");
  const auto cols = in.number<std::size_t>(head[1], "column count");
  const auto M = in.number<std::int64_t>(head[2], "weight bound M");
  if (M < 0) in.fail(head[2], "M must be nonnegative");
  MinPlusData d{M, Matrix<Word>(rows, cols, kInfWord)};
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& toks = in.take("matrix row " + std::to_string(i));
    in.expect_count(toks, cols, cols, std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) {
      if (toks[j].text == "inf") continue;
      const auto v = in.number<std::int64_t>(toks[j], "an integer or 'inf'");
      if (v < -M || v > M) in.fail(toks[j], "entry " + std::to_string(v) + " outside [-M, M]");
      d.m(i, j) = mp_encode(v);
    }
  }
  in.finish();
  return d;
}

WeightedGraph parse_graph(std::string_view text, const std::string& origin) {
  Lines in(text, origin);
  const auto& head = in.take("header 'n directed|undirected M'");
  in.expect_count(head, 3, 3, "'n directed|undirected M'");
  WeightedGraph g;
  g.n = in.number<std::size_t>(head[0], "vertex count");
  if (head[1].text == "directed") {
    g.directed = true;
  } else if (head[1].text != "undirected") {
    in.fail(head[1], "expected 'directed' or 'undirected'");
  }
  g.M = in.number<std::int64_t>(head[2], "weight bound M");
  if (g.M < 0) in.fail(head[2], "M must be nonnegative");
  std::vector<std::vector<bool>> seen(g.n, std::vector<bool>(g.n, false));
  while (in.more()) {
    const auto& toks = in.take("edge line");
    in.expect_count(toks, 2, 3, "'u v [w]'");
    Edge e;
    e.u = in.number<std::size_t>(toks[0], "vertex id");
    e.v = in.number<std::size_t>(toks[1], "vertex id");
    for (int k = 0; k < 2; ++k) {
      const std::size_t x = k == 0 ? e.u : e.v;
      if (x >= g.n) in.fail(toks[k], "vertex " + std::to_string(x) + " out of range [0, " + std::to_string(g.n) + ")");
    }
    if (e.u == e.v) in.fail(toks[0], "self-loop");
    e.w = toks.size() == 3 ? in.number<std::int64_t>(toks[2], "integer weight") : 1;
    if (e.w > g.M || e.w < (g.directed ? -g.M : 0))
      in.fail(toks.size() == 3 ? toks[2] : toks[0], "weight " + std::to_string(e.w) + " out of range");
    if (seen[e.u][e.v] || (!g.directed && seen[e.v][e.u])) in.fail(toks[0], "repeated edge");
    seen[e.u][e.v] = true;
    g.edges.push_back(e);
  }
  return g;
}

std::string format_field_matrix(const FieldMatrix& m, Word p) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << ' ' << p << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out << m(i, j) << (j + 1 == m.cols() ? '\n' : ' ');
  return out.str();
}

std::string format_minplus(const Matrix<Word>& m, std::int64_t M) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << ' ' << M << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::int64_t v = mp_decode(m(i, j));
      if (v == kInf) {
        out << "inf";
      } else {
        out << v;
      }
      out << (j + 1 == m.cols() ? '\n' : ' ');
    }
  return out.str();
}

std::string format_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.n << ' ' << (g.directed ? "directed" : "undirected") << ' ' << g.M << '\n';
  for (const Edge& e : g.edges) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace ccq
