#include "swe_carleman/format.hpp"
#include "swe_carleman/matrix_market.hpp"

#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace swe;
namespace fs = std::filesystem;

TEST_CASE("round-trip decimal formatting") {
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(1.0) == "1");
  CHECK(fmt_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(fmt_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (int k = 0; k < 200; ++k) {
    const double v = swe::test::uniform(-1e6, 1e6) * std::pow(10.0, swe::test::uniform(-20, 20));
    CHECK(std::stod(fmt_double(v)) == v);
  }
}

TEST_CASE("matrix market round trip is exact and byte-stable") {
  std::vector<Triplet> t;
  for (int k = 0; k < 60; ++k)
    t.emplace_back(static_cast<int>(swe::test::uniform(0, 20)), static_cast<int>(swe::test::uniform(0, 15)),
                   swe::test::uniform(-3, 3));
  const SparseMatrix m = from_triplets(20, 15, t);
  std::ostringstream a;
  write_matrix_market(a, m);
  std::istringstream in(a.str());
  const SparseMatrix back = read_matrix_market(in);
  CHECK(back.rows() == 20);
  CHECK(back.cols() == 15);
  CHECK((Eigen::MatrixXd(back) - Eigen::MatrixXd(m)).cwiseAbs().maxCoeff() == 0.0);
  std::ostringstream b;
  write_matrix_market(b, back);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);

  Eigen::VectorXd v(4);
  v << 1.5, -2.0, 0.0, 1e-300;
  std::ostringstream vs;
  write_matrix_market(vs, v);
  std::istringstream vin(vs.str());
  CHECK(read_matrix_market_vector(vin) == v);
}

TEST_CASE("matrix market reader rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS(read_matrix_market(empty));
  std::istringstream banner("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
  CHECK_THROWS(read_matrix_market(banner));
  std::istringstream range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
  CHECK_THROWS(read_matrix_market(range));
  CHECK_THROWS_WITH(read_matrix_market(fs::path("/nonexistent/e.mtx")),
                    doctest::Contains("/nonexistent/e.mtx"));
}

TEST_CASE("atomic writes leave no partial file behind") {
  const fs::path dir = fs::temp_directory_path() / "swe_carleman_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  write_file_atomic(target, [](std::ostream& os) { os << "a,b\n1,2\n"; });
  std::ifstream is(target);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == "a,b\n1,2\n");
  const fs::path failed = dir / "failed.csv";
  CHECK_THROWS(write_file_atomic(failed, [](std::ostream& os) {
    os << "partial";
    throw std::runtime_error("writer failed");
  }));
  CHECK_FALSE(fs::exists(failed));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  fs::remove_all(dir);
}
