#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "isomat/gf2.hpp"

using namespace isomat;

namespace {

// Reference rank: Gaussian elimination over a bool matrix, written
// independently of the packed implementation.
std::size_t rank_oracle(const BitMatrix& b) {
  std::vector<std::vector<bool>> m(b.rows(), std::vector<bool>(b.cols()));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m[i][j] = b.get(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < b.cols() && r < b.rows(); ++c) {
    std::size_t piv = r;
    while (piv < b.rows() && !m[piv][c]) ++piv;
    if (piv == b.rows()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < b.rows(); ++i)
      if (i != r && m[i][c])
        for (std::size_t j = 0; j < b.cols(); ++j) m[i][j] = m[i][j] != m[r][j];
    ++r;
  }
  return r;
}

BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng) {
  BitMatrix b(rows, cols);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b.set(i, j, coin(rng));
  return b;
}

// Dependence of every column subset, via the oracle rank.
bool same_dependences(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) return false;
  for (std::uint32_t mask = 1; mask < (1u << a.cols()); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (mask & (1u << j)) subset.push_back(j);
    if (is_dependent_columns(a, subset) != is_dependent_columns(b, subset)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("BitMatrix basics") {
  BitMatrix b(3, 70);  // spans a word boundary
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 70);
  b.set(1, 65, true);
  REQUIRE(b.get(1, 65));
  REQUIRE_FALSE(b.get(1, 64));
  b.set(1, 65, false);
  REQUIRE_FALSE(b.get(1, 65));

  BitMatrix id = BitMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(id.get(i, j) == (i == j));
  REQUIRE(id == BitMatrix::identity(4));
  REQUIRE(id != BitMatrix::zero(4));
  REQUIRE_THROWS_AS(b.get(3, 0), std::invalid_argument);
}

TEST_CASE("column masks") {
  BitMatrix b(3, 4);
  b.set(0, 1, true);
  b.set(2, 1, true);
  REQUIRE(b.column_mask(1) == 0b101);
  REQUIRE(b.column_mask(0) == 0);
  auto masks = b.column_masks();
  REQUIRE(masks.size() == 4);
  REQUIRE(masks[1] == 0b101);
}

TEST_CASE("rank matches oracle on random matrices") {
  std::mt19937 rng(12345);
  for (int t = 0; t < 200; ++t) {
    std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 12;
    BitMatrix b = random_matrix(rows, cols, rng);
    REQUIRE(rank(b) == rank_oracle(b));
  }
}

TEST_CASE("Eliminator incremental rank") {
  Eliminator e;
  REQUIRE(e.insert(0b001));
  REQUIRE(e.insert(0b010));
  REQUIRE_FALSE(e.insert(0b011));  // dependent
  REQUIRE(e.rank() == 2);
  REQUIRE(e.reduce(0b011) == 0);
}

TEST_CASE("is_dependent_columns") {
  BitMatrix b = parse_matrix("101\n011\n");
  REQUIRE_FALSE(is_dependent_columns(b, {0, 1}));
  REQUIRE(is_dependent_columns(b, {0, 1, 2}));
  BitMatrix z(2, 1);
  REQUIRE(is_dependent_columns(z, {0}));  // zero column is a loop
}

TEST_CASE("column_add_transform preserves the matroid") {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 50) {
    BitMatrix b = random_matrix(3, 6, rng);
    std::size_t pivot = rng() % 3;
    bool has_one = false;
    for (std::size_t j = 0; j < b.cols(); ++j) has_one = has_one || b.get(pivot, j);
    if (!has_one) continue;
    std::vector<bool> kappa(3);
    for (std::size_t i = 0; i < 3; ++i) kappa[i] = i != pivot && rng() % 2;
    BitMatrix t = column_add_transform(b, pivot, kappa);
    REQUIRE(same_dependences(b, t));
    ++done;
  }
}

TEST_CASE("column_add_transform preconditions") {
  BitMatrix b = parse_matrix("10\n01\n");
  REQUIRE_THROWS_AS(column_add_transform(b, 5, {false, false}), std::invalid_argument);
  REQUIRE_THROWS_AS(column_add_transform(b, 0, {true, false}), std::invalid_argument);
  REQUIRE_THROWS_AS(column_add_transform(b, 0, {false}), std::invalid_argument);
  BitMatrix z(2, 2);
  REQUIRE_THROWS_AS(column_add_transform(z, 0, {false, true}), std::invalid_argument);
}

TEST_CASE("standard representation") {
  std::mt19937 rng(7);
  for (int t = 0; t < 100; ++t) {
    BitMatrix b = random_matrix(1 + rng() % 5, 1 + rng() % 8, rng);
    StandardRep rep = standard_representation(b);
    std::size_t r = rank_oracle(b);
    REQUIRE(rep.matrix.rows() == (r == 0 ? b.cols() : r));  // rank 0 comes back as 0_n
    // Leading block is the identity when rank is positive.
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) REQUIRE(rep.matrix.get(i, j) == (i == j));
    // column_order is a permutation and the reordered dependences agree.
    std::vector<std::size_t> sorted = rep.column_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < b.cols(); ++j) REQUIRE(sorted[j] == j);
    BitMatrix reordered = b.select_columns(rep.column_order);
    REQUIRE(same_dependences(reordered, rep.matrix));
  }
}

TEST_CASE("standard representation conventions at rank extremes") {
  // Zero matrix: 0_n convention.
  BitMatrix z(2, 3);
  StandardRep rep = standard_representation(z);
  REQUIRE(rep.matrix == BitMatrix(3, 3));
  // Identity: I_n unchanged.
  StandardRep rep2 = standard_representation(BitMatrix::identity(3));
  REQUIRE(rep2.matrix == BitMatrix::identity(3));
}

TEST_CASE("matrix text format round trip") {
  BitMatrix b = parse_matrix("1010\n0110\n");
  REQUIRE(b.rows() == 2);
  REQUIRE(b.cols() == 4);
  REQUIRE(b.get(0, 0));
  REQUIRE_FALSE(b.get(1, 0));
  REQUIRE(parse_matrix(format_matrix(b)) == b);
  // Blank line terminates.
  REQUIRE(parse_matrix("11\n\n00\n") == parse_matrix("11\n"));
  REQUIRE_THROWS_AS(parse_matrix("10\n1\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_matrix("12\n"), std::invalid_argument);
}
