#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "vial/tsv.hpp"

using namespace vial;

namespace {

// Writes `text` to a throwaway file and returns its path.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    static int counter = 0;
    path = "tsv_test_" + std::to_string(counter++) + ".tmp";
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("edge rows parse with optional weight") {
  TempFile f("u1\tu2\nu2\tu3\t2.5\n");
  auto edges = read_edges_tsv(f.path);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].a == "u1");
  CHECK(edges[0].b == "u2");
  CHECK(edges[0].weight == 1.0);
  CHECK(edges[1].weight == 2.5);
}

TEST_CASE("comments, blank lines, and CRLF endings are tolerated") {
  TempFile f("# header\n\n   \nu1\tu2\t3\r\n  # indented comment\nu3\tu4\r\n");
  auto edges = read_edges_tsv(f.path);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].weight == 3.0);
  CHECK(edges[1].b == "u4");
}

TEST_CASE("malformed rows name the file and line") {
  TempFile one_field("u1\n");
  CHECK_THROWS_WITH_AS(read_edges_tsv(one_field.path),
                       doctest::Contains((one_field.path + ":1").c_str()), ParseError);
  TempFile bad_weight("u1\tu2\tlots\n");
  CHECK_THROWS_WITH_AS(read_edges_tsv(bad_weight.path), doctest::Contains(":1"),
                       ParseError);
  TempFile late("a\tb\nc\td\te\tf\n");
  CHECK_THROWS_WITH_AS(read_edges_tsv(late.path), doctest::Contains(":2"), ParseError);
  TempFile empty_id("\tb\n");
  CHECK_THROWS_AS(read_edges_tsv(empty_id.path), ParseError);
}

TEST_CASE("missing file reports its path") {
  CHECK_THROWS_WITH_AS(read_edges_tsv("no/such/file.tsv"),
                       doctest::Contains("no/such/file.tsv"), ParseError);
}

TEST_CASE("vocabulary rows need exactly two fields") {
  TempFile good("CS\tmajor\nNYC\tcity\n");
  auto vocab = read_vocab_tsv(good.path);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab[1].value == "NYC");
  CHECK(vocab[1].type == "city");
  TempFile extra("CS\tmajor\textra\n");
  CHECK_THROWS_AS(read_vocab_tsv(extra.path), ParseError);
}

TEST_CASE("a network loads end to end from the four files") {
  TempFile social("u1\tu2\nu2\tu3\n");
  TempFile behavior("u1\tb1\nu3\tb1\n");
  TempFile attribute("u2\tCS\t2\n");
  TempFile vocab("CS\tmajor\nBio\tmajor\n");
  auto net = load_network_from_tsv({social.path, behavior.path, attribute.path, vocab.path});
  CHECK(net.n_social() == 3);
  CHECK(net.n_behavior() == 1);
  CHECK(net.n_attribute() == 2);
  CHECK(net.n_behavior_links() == 2);
  CHECK(net.deg_attribute[*net.social_index("u2")] == doctest::Approx(2.0));
}
