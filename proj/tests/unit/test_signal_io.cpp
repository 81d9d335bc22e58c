#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "sparse_pr/operators.hpp"
#include "sparse_pr/signal_io.hpp"

namespace sparse_pr {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sparse_pr_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CVector awkward_values() {
  return {{0.1, -0.0},
          {1.0 / 3.0, 2.0 / 3.0},
          {std::numeric_limits<double>::denorm_min(), -1e308},
          {123456789.123456789, -5e-324},
          {0, 0}};
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e22, 5e-324, 0.0}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(parse_double("nan")));
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(SignalCsv, RoundTripBitExact) {
  const auto x = awkward_values();
  std::stringstream ss;
  write_signal_csv(ss, x);
  EXPECT_EQ(ss.str().substr(0, 13), "index,re,im\n0");
  const auto back = read_signal_csv(ss);
  ASSERT_EQ(back.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(std::signbit(back[i].real()), std::signbit(x[i].real()));
    EXPECT_EQ(back[i], x[i]);
  }
}

TEST(SignalJson, RoundTripBitExact) {
  const auto x = awkward_values();
  const auto back = signal_from_json(signal_to_json(x));
  EXPECT_EQ(back.vector(), x);
  EXPECT_THROW(signal_from_json("[[1,2],[3]]"), std::invalid_argument);
  EXPECT_THROW(signal_from_json("{"), std::invalid_argument);
}

TEST(SignalCsv, Errors) {
  std::stringstream bad_header("i,re,im\n0,1,2\n");
  EXPECT_THROW(read_signal_csv(bad_header), std::invalid_argument);
  std::stringstream bad_index("index,re,im\n1,1,2\n");
  EXPECT_THROW(read_signal_csv(bad_index), std::invalid_argument);
  std::stringstream bad_number("index,re,im\n0,1,zz\n");
  EXPECT_THROW(read_signal_csv(bad_number), std::invalid_argument);
  std::stringstream empty("index,re,im\n");
  EXPECT_THROW(read_signal_csv(empty), std::invalid_argument);
}

TEST(MasksIo, RoundTripBothFormats) {
  const auto masks = make_octanary_masks(3, 7, {1, 0});
  std::stringstream ss;
  write_masks_csv(ss, masks);
  EXPECT_EQ(read_masks_csv(ss), masks);
  EXPECT_EQ(masks_from_json(masks_to_json(masks)), masks);
}

TEST(MagnitudesIo, RoundTripBothFormats) {
  const RVector b{1.5, -0.25, 1e-300, 0.0};
  std::stringstream ss;
  write_magnitudes_csv(ss, b);
  EXPECT_EQ(read_magnitudes_csv(ss).vector(), b);
  EXPECT_EQ(magnitudes_from_json(magnitudes_to_json(b)).vector(), b);
}

TEST(PathIo, DispatchOnExtension) {
  const auto dir = scratch_dir("path");
  const auto x = awkward_values();
  save_signal(dir / "x.csv", x);
  save_signal(dir / "x.json", x);
  EXPECT_EQ(load_signal(dir / "x.csv").vector(), x);
  EXPECT_EQ(load_signal(dir / "x.json").vector(), x);
  EXPECT_EQ(read_text_file(dir / "x.json").front(), '[');
  EXPECT_EQ(format_from_path("a/b.JSON"), FileFormat::kJson);
  EXPECT_EQ(format_from_path("a/b.txt"), FileFormat::kCsv);
  const auto masks = make_octanary_masks(2, 4, {2, 0});
  save_masks(dir / "m.json", masks);
  EXPECT_EQ(load_masks(dir / "m.json"), masks);
  save_magnitudes(dir / "b.csv", RVector{1, 2});
  EXPECT_EQ(load_magnitudes(dir / "b.csv").vector(), (RVector{1, 2}));
}

TEST(PathIo, MissingFileIsIoErrorWithPath) {
  try {
    load_signal("/nonexistent/dir/x.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.csv"), std::string::npos);
  }
  EXPECT_THROW(write_text_file("/nonexistent/dir/y.csv", "x"), IoError);
}

TEST(SplitCsvLine, Basic) {
  const auto cells = split_csv_line("a,,b,");
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0], "a");
  EXPECT_EQ(cells[1], "");
  EXPECT_EQ(cells[3], "");
}

}  // namespace
}  // namespace sparse_pr
