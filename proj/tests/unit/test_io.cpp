#include "ccq/io.hpp"

#include "ccq/kernels.hpp"
#include "doctest.h"

using namespace ccq;

namespace {

template <class F>
std::pair<std::size_t, std::size_t> error_at(F&& f) {
  try {
    f();
  } catch (const parse_error& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

}  // namespace

TEST_CASE("field matrix format") {
  const auto d = parse_field_matrix("# identity\n2 2 7\n1 0\n0 1\n");
  CHECK(d.p == 7);
  CHECK(d.m(0, 0) == 1);
  CHECK(d.m(1, 0) == 0);
  CHECK(parse_field_matrix(format_field_matrix(d.m, d.p)).m == d.m);
  CHECK(error_at([] { parse_field_matrix("2 2 7\n1 0\n0 9\n"); }) == std::pair<std::size_t, std::size_t>{3, 3});
  CHECK(error_at([] { parse_field_matrix("2 2 8\n"); }) == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(error_at([] { parse_field_matrix("2 2 7\n1 0\n"); }).first == 3);  // end of input
  CHECK(error_at([] { parse_field_matrix("2 2 7\n1 0 3\n0 1\n"); }) == std::pair<std::size_t, std::size_t>{2, 5});
  CHECK(error_at([] { parse_field_matrix("2 2 7\n1 x\n0 1\n"); }) == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(error_at([] { parse_field_matrix("1 1 7\n1\n1\n"); }).first == 3);
  try {
    parse_field_matrix("1 1 7\n9\n", "a.txt");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).rfind("a.txt:2:1:", 0) == 0);
  }
}

TEST_CASE("min-plus format") {
  const auto d = parse_minplus("2 3 4\n0 -4 inf\n  inf 3 1\n");
  CHECK(d.M == 4);
  CHECK(mp_decode(d.m(0, 1)) == -4);
  CHECK(d.m(0, 2) == kInfWord);
  CHECK(parse_minplus(format_minplus(d.m, d.M)).m == d.m);
  CHECK(error_at([] { parse_minplus("1 1 2\n3\n"); }) == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(error_at([] { parse_minplus("1 1 -2\n0\n"); }) == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(error_at([] { parse_minplus("1 2 2\n0 infinity\n"); }) == std::pair<std::size_t, std::size_t>{2, 3});
}

TEST_CASE("graph format") {
  const auto g = parse_graph("4 undirected 1\n0 1\n1 2 1\n2 3\n");
  CHECK(g.n == 4);
  CHECK_FALSE(g.directed);
  CHECK(g.edges.size() == 3);
  CHECK(g.edges[1].w == 1);
  const auto h = parse_graph(format_graph(g));
  CHECK(h.edges.size() == 3);
  CHECK(h.adjacency() == g.adjacency());
  const auto d = parse_graph("3 directed 2\n0 1 -2\n1 0 2\n");
  CHECK(d.directed);
  CHECK(d.edges[0].w == -2);
  CHECK(error_at([] { parse_graph("3 sideways 1\n"); }) == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(error_at([] { parse_graph("3 undirected 1\n0 3\n"); }) == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(error_at([] { parse_graph("3 undirected 1\n0 0\n"); }).first == 2);
  CHECK(error_at([] { parse_graph("3 undirected 1\n0 1\n1 0\n"); }).first == 3);
  CHECK(error_at([] { parse_graph("3 undirected 1\n0 1 -1\n"); }) == std::pair<std::size_t, std::size_t>{2, 5});
  CHECK(error_at([] { parse_graph("3 undirected 1\n0 1 1 1\n"); }) == std::pair<std::size_t, std::size_t>{2, 7});
  CHECK(error_at([] { parse_graph(""); }).first == 1);
}
