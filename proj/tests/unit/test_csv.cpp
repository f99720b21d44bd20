#include <gtest/gtest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "rrsel/csv.hpp"
#include "rrsel/error.hpp"

using namespace rrsel;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rrsel_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ErrorCode parse_code(const std::string& text) {
  std::istringstream in(text);
  try {
    read_matrix_csv(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST(Csv, MatrixRoundTripIsExact) {
  DenseMatrix m = oracle::random_matrix(5, 4, 99);
  m(0, 0) = 1e-300;
  m(1, 1) = -0.1;
  m(2, 2) = 1.0 / 3.0;
  std::ostringstream out;
  write_matrix_csv(out, m);
  std::istringstream in(out.str());
  EXPECT_EQ(read_matrix_csv(in), m);
}

TEST(Csv, ToleratesWhitespaceBlankLinesAndCrlf) {
  std::istringstream in(" 1, 2 \r\n\n+3,4e0\r\n");
  EXPECT_EQ(read_matrix_csv(in), DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(Csv, ReportsLineOfBadInput) {
  std::istringstream in("1,2\n3,x\n");
  try {
    read_matrix_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(parse_code("1,2\n3\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code(""), ErrorCode::ParseError);
  EXPECT_EQ(parse_code("1,,2\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code("nan\n"), ErrorCode::NonFinite);
}

TEST(Csv, VectorAsRowOrColumn) {
  std::istringstream row("1,2,3\n");
  std::istringstream col("1\n2\n3\n");
  EXPECT_EQ(read_vector_csv(row), (Vector{1, 2, 3}));
  EXPECT_EQ(read_vector_csv(col), (Vector{1, 2, 3}));
  std::istringstream grid("1,2\n3,4\n");
  EXPECT_THROW(read_vector_csv(grid), Error);
}

TEST(Csv, AtomicWriteLeavesNoTemporary) {
  const auto path = scratch("atomic.csv");
  write_matrix_csv(path, DenseMatrix::identity(2));
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".partial"));
  EXPECT_EQ(read_matrix_csv(path), DenseMatrix::identity(2));

  const auto bad = scratch("no_such_dir") / "x.csv";
  try {
    write_file_atomic(bad, "1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  EXPECT_FALSE(std::filesystem::exists(bad));
  EXPECT_THROW(read_matrix_csv(scratch("missing.csv")), Error);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310, 0.0}) {
    const std::string s = format_double(v);
    double back = 1.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
}
