#include "otsense/error.hpp"
#include "otsense/sample.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace otsense;

TEST_SUITE("sample") {

TEST_CASE("default names and accessors") {
  Matrix m(3, 2);
  m << 1, 2, 3, 4, 5, 6;
  const auto s = SampleMatrix::create(m);
  CHECK(s.names() == std::vector<std::string>{"X1", "X2"});
  CHECK(s.rows() == 3);
  CHECK(s.cols() == 2);
  CHECK(s.column(1) == std::vector<double>{2, 4, 6});
  CHECK(s.find("X2") == 1);
  CHECK(s.find("nope") == -1);
  const auto y = SampleMatrix::create(m, {}, "Y");
  CHECK(y.names().front() == "Y1");
}

TEST_CASE("non-finite entries are rejected with their position") {
  Matrix m = Matrix::Ones(3, 2);
  m(2, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    SampleMatrix::create(m);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("(2, 1)") != std::string::npos);
  }
  m(2, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SampleMatrix::create(m), DataError);
}

TEST_CASE("shape and name invariants") {
  CHECK_THROWS_AS(SampleMatrix::create(Matrix::Ones(1, 2)), DataError);
  CHECK_THROWS_AS(SampleMatrix::create(Matrix::Ones(3, 0)), DataError);
  CHECK_THROWS_AS(SampleMatrix::create(Matrix::Ones(3, 2), {"a", "a"}), DataError);
  CHECK_THROWS(SampleMatrix::create(Matrix::Ones(3, 2), {"a"}));
}

TEST_CASE("row selection keeps names and allows repeats") {
  Matrix m(3, 1);
  m << 10, 20, 30;
  const auto s = SampleMatrix::create(m, {"v"});
  const std::vector<Index> rows{2, 2, 0};
  const auto r = s.select_rows(rows);
  CHECK(r.rows() == 3);
  CHECK(r.values()(0, 0) == 30);
  CHECK(r.values()(2, 0) == 10);
  CHECK(r.names().front() == "v");
  const std::vector<Index> cols{0};
  CHECK(s.select_cols(cols).cols() == 1);
}

TEST_CASE("dataset rows must pair up") {
  try {
    validate_dataset(Matrix::Ones(4, 2), Matrix::Ones(3, 1));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).rfind("row mismatch", 0) == 0);
  }
  const auto ds = validate_dataset(Matrix::Random(4, 2), Matrix::Random(4, 3));
  CHECK(ds.n() == 4);
  CHECK(ds.d() == 2);
  CHECK(ds.k() == 3);
  CHECK(ds.x().names().front() == "X1");
  CHECK(ds.y().names().back() == "Y3");
}

TEST_CASE("joint resample keeps x and y paired") {
  Matrix x(3, 1), y(3, 1);
  x << 1, 2, 3;
  y << 10, 20, 30;
  const auto ds = validate_dataset(x, y);
  const std::vector<Index> rows{1, 1, 2};
  const auto r = ds.select_rows(rows);
  for (Index i = 0; i < 3; ++i) CHECK(r.y().values()(i, 0) == 10 * r.x().values()(i, 0));
}

}  // TEST_SUITE
