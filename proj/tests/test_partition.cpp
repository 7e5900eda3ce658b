#include "otsense/error.hpp"
#include "otsense/partition.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace otsense;

TEST_SUITE("partition") {

TEST_CASE("sizes differ by at most one with extras first") {
  std::mt19937_64 rng(3);
  for (int n : {10, 11, 37, 100, 2000}) {
    for (int m : {2, 3, 7, 10}) {
      const Matrix col = testing::uniform_matrix(n, 1, rng);
      const auto p = build_partition({col.data(), static_cast<std::size_t>(n)}, m);
      REQUIRE(p.class_count() == m);
      std::size_t total = 0;
      for (int h = 0; h < m; ++h) {
        const auto expect = static_cast<std::size_t>(n / m + (h < n % m ? 1 : 0));
        CHECK(p.members(h).size() == expect);
        total += p.members(h).size();
      }
      CHECK(total == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("classes are contiguous in x and every row appears once") {
  std::mt19937_64 rng(4);
  const Matrix col = testing::normal_matrix(257, 1, rng);
  const auto p = build_partition({col.data(), 257}, 9);
  std::set<Index> seen;
  double prev_max = -1e300;
  for (int h = 0; h < p.class_count(); ++h) {
    double lo = 1e300, hi = -1e300;
    for (Index r : p.members(h)) {
      CHECK(seen.insert(r).second);
      CHECK(p.class_of(r) == h);
      CHECK(p.label(r) == h + 1);
      lo = std::min(lo, col(r, 0));
      hi = std::max(hi, col(r, 0));
    }
    CHECK(lo >= prev_max);
    prev_max = hi;
  }
  CHECK(seen.size() == 257);
}

TEST_CASE("ties are broken by row index") {
  const std::vector<double> x{1, 0, 1, 0, 1, 0};
  const auto p = build_partition(x, 2);
  const std::vector<Index> first(p.members(0).begin(), p.members(0).end());
  const std::vector<Index> second(p.members(1).begin(), p.members(1).end());
  CHECK(first == std::vector<Index>{1, 3, 5});
  CHECK(second == std::vector<Index>{0, 2, 4});

  const std::vector<double> mixed{2, 1, 1, 1, 3};
  const auto q = build_partition(mixed, 2);
  CHECK(std::vector<Index>(q.members(0).begin(), q.members(0).end()) == std::vector<Index>{1, 2, 3});
}

TEST_CASE("representatives are class means") {
  const std::vector<double> x{5, 1, 3, 2, 4, 6};
  const auto p = build_partition(x, 3);
  REQUIRE(p.representatives().size() == 3);
  CHECK(p.representatives()[0] == doctest::Approx(1.5));
  CHECK(p.representatives()[1] == doctest::Approx(3.5));
  CHECK(p.representatives()[2] == doctest::Approx(5.5));
}

TEST_CASE("invalid class counts and constant columns") {
  const std::vector<double> x{1, 2, 3};
  CHECK_THROWS_AS(build_partition(x, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_partition(x, 4), std::invalid_argument);
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK_THROWS_AS(build_partition(flat, 2), DegenerateInputError);

  Matrix m(4, 2);
  m << 1, 7, 2, 7, 3, 7, 4, 7;
  const auto s = SampleMatrix::create(m, {"a", "flat"});
  try {
    partition_all(s, 2);
    FAIL("expected DegenerateInputError");
  } catch (const DegenerateInputError& e) {
    CHECK(std::string(e.what()).find("flat") != std::string::npos);
  }
}

TEST_CASE("default partition count") {
  CHECK(default_partition_count(50) == 2);
  CHECK(default_partition_count(2000) == 20);
  CHECK(default_partition_count(100000) == 50);
  CHECK(default_partition_count(2) == 2);
}

}  // TEST_SUITE
