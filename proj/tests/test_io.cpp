#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dyca/error.hpp"
#include "dyca/io.hpp"
#include "support/oracles.hpp"

using namespace dyca;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("dyca_io_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("read_timeseries_csv basic file") {
  TempDir dir;
  write_text(dir / "a.csv", "a,b\n1,2\n3,4\n");
  const TimeSeries ts = read_timeseries_csv(dir / "a.csv", 256.0);
  CHECK(ts.channels() == 2);
  CHECK(ts.samples() == 2);
  CHECK(ts.labels() == std::vector<std::string>{"a", "b"});
  CHECK(ts.data()(0, 1) == 3.0);
  CHECK(ts.data()(1, 0) == 2.0);
  CHECK(ts.dt() == doctest::Approx(1.0 / 256.0));
}

TEST_CASE("read_timeseries_csv tolerates CRLF and blank lines") {
  TempDir dir;
  write_text(dir / "a.csv", "a,b\r\n1,2\r\n\r\n3,4\r\n");
  const TimeSeries ts = read_timeseries_csv(dir / "a.csv", 1.0);
  CHECK(ts.samples() == 2);
  CHECK(ts.data()(1, 1) == 4.0);
}

TEST_CASE("read_timeseries_csv errors") {
  TempDir dir;
  write_text(dir / "ragged.csv", "a,b\n1,2\n1,2,3\n");
  try {
    read_timeseries_csv(dir / "ragged.csv", 1.0);
    FAIL("expected RaggedRows");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRaggedRows);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  write_text(dir / "bad.csv", "a,b\n1,2\n1,x\n");
  try {
    read_timeseries_csv(dir / "bad.csv", 1.0);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  write_text(dir / "nan.csv", "a\n1\nnan\n");
  CHECK(code_of([&] { read_timeseries_csv(dir / "nan.csv", 1.0); }) == ErrorCode::kNonFinite);
  write_text(dir / "inf.csv", "a\ninf\n");
  CHECK(code_of([&] { read_timeseries_csv(dir / "inf.csv", 1.0); }) == ErrorCode::kNonFinite);
  write_text(dir / "empty.csv", "");
  CHECK(code_of([&] { read_timeseries_csv(dir / "empty.csv", 1.0); }) == ErrorCode::kEmptyInput);
  write_text(dir / "header.csv", "a,b\n");
  CHECK(code_of([&] { read_timeseries_csv(dir / "header.csv", 1.0); }) == ErrorCode::kEmptyInput);
  CHECK(code_of([&] { read_timeseries_csv(dir / "missing.csv", 1.0); }) == ErrorCode::kIoError);
}

TEST_CASE("time series round trip is exact") {
  TempDir dir;
  std::mt19937_64 rng(1);
  Matrix m = oracle::random_matrix(3, 200, rng);
  m(0, 0) = 1e-300;
  m(1, 0) = -1.7976931348623157e308;
  m(2, 0) = 0.1;
  m(2, 1) = -0.0;
  const TimeSeries ts(m, 1.0 / 256.0, {"x", "label, with comma", "quote\"d"});
  write_timeseries_csv(ts, dir / "rt.csv");
  const TimeSeries back = read_timeseries_csv(dir / "rt.csv", 256.0);
  CHECK(back.labels() == ts.labels());
  CHECK(back.data() == ts.data());
  CHECK(std::signbit(back.data()(2, 1)));

  const std::string text = read_text(dir / "rt.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.rfind("x,\"label, with comma\",\"quote\"\"d\"\n", 0) == 0);
  write_timeseries_csv(back, dir / "rt2.csv");
  CHECK(read_text(dir / "rt2.csv") == text);
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::nan("")) == "nan");
  double parsed = 0.0;
  std::istringstream(format_double(1.0 / 3.0)) >> parsed;
  CHECK(parsed == 1.0 / 3.0);
}

TEST_CASE("matrix csv round trip and rejection of empty tables") {
  TempDir dir;
  const Matrix basis{{1, 0}, {0, 1}, {0.5, -0.25}};
  write_matrix_csv(basis, {"dyca_1", "dyca_2"}, dir / "basis.csv");
  const LabeledMatrix back = read_matrix_csv(dir / "basis.csv");
  CHECK(back.values == basis);
  CHECK(back.labels == std::vector<std::string>{"dyca_1", "dyca_2"});
  CHECK(code_of([&] { write_matrix_csv(Matrix(3, 0), {}, dir / "e.csv"); }) == ErrorCode::kEmptyInput);
  CHECK(code_of([&] { write_matrix_csv(basis, {"only_one"}, dir / "e.csv"); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("write fails on an unwritable path") {
  const TimeSeries ts(Matrix(1, 2), 1.0);
  CHECK(code_of([&] { write_timeseries_csv(ts, "/nonexistent_dir/x.csv"); }) == ErrorCode::kIoError);
}

TEST_CASE("spectra csv") {
  TempDir dir;
  DycaSpectrum s;
  s.values = {1.0, 0.5, 0.25, 0.125};
  s.vectors = Matrix::identity(4);
  std::vector<WindowResult> results(2);
  results[0].index = 0;
  results[0].t_start = 0.0;
  results[0].spectrum = s;
  results[1].index = 1;
  results[1].t_start = 1.0;
  results[1].error = "Singular";
  write_spectra_csv(results, 3, dir / "s.csv");
  CHECK(read_text(dir / "s.csv") == "window,t_start_s,lambda_1,lambda_2,lambda_3\n0,0,1,0.5,0.25\n1,1,nan,nan,nan\n");

  // Short spectra pad with nan; the file stays rectangular.
  DycaSpectrum small;
  small.values = {0.9};
  small.vectors = Matrix::identity(1);
  results[1].spectrum = small;
  write_spectra_csv(results, 3, dir / "s2.csv");
  CHECK(read_text(dir / "s2.csv").find("1,1,0.90000000000000002,nan,nan\n") != std::string::npos);
  CHECK_THROWS_AS(write_spectra_csv(results, 0, dir / "s3.csv"), Error);
}

TEST_CASE("spectrum csv") {
  TempDir dir;
  DycaSpectrum s;
  s.values = {1.0, 0.5};
  s.vectors = Matrix::identity(2);
  write_spectrum_csv(s, dir / "l.csv");
  CHECK(read_text(dir / "l.csv") == "component,lambda\n1,1\n2,0.5\n");
}

TEST_CASE("parse_config") {
  const RunConfig eeg_rate = parse_config("sample_rate_hz = 256\nwindow_seconds = 1\n");
  CHECK(eeg_rate.sample_rate_hz == 256.0);
  CHECK(eeg_rate.window_spec().length == 256);
  CHECK(eeg_rate.window_spec().hop == 256);

  const RunConfig defaults = parse_config("");
  CHECK(defaults.threshold == kDefaultThreshold);
  CHECK_FALSE(defaults.bandpass.has_value());
  CHECK_FALSE(defaults.remove_mean);

  const RunConfig full = parse_config(
      "# comment\n"
      "sample_rate_hz = 100  # trailing\n"
      "window_seconds = 2\n"
      "hop_seconds = 0.5\n"
      "threshold = 0.9\n"
      "ridge = 1e-9\n"
      "bandpass_low_hz = 1\n"
      "bandpass_high_hz = 20\n"
      "bandpass_order = 2\n"
      "mixing_seed = 7\n"
      "noise_seed = 8\n"
      "remove_mean = true\n");
  CHECK(full.window_spec().length == 200);
  CHECK(full.window_spec().hop == 50);
  CHECK(full.threshold == 0.9);
  CHECK(full.ridge == 1e-9);
  REQUIRE(full.bandpass.has_value());
  CHECK(full.bandpass->low_hz == 1.0);
  CHECK(full.bandpass->high_hz == 20.0);
  CHECK(full.bandpass->order == 2);
  CHECK(full.mixing_seed == 7);
  CHECK(full.noise_seed == 8);
  CHECK(full.remove_mean);
}

TEST_CASE("parse_config errors") {
  try {
    parse_config("threshold = 1.5\n");
    FAIL("expected BadValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBadValue);
    CHECK(std::string(e.what()).find("threshold") != std::string::npos);
  }
  CHECK(code_of([] { parse_config("threshold = 0\n"); }) == ErrorCode::kBadValue);
  CHECK(code_of([] { parse_config("sample_rate_hz = -1\n"); }) == ErrorCode::kBadValue);
  CHECK(code_of([] { parse_config("sample_rate_hz = abc\n"); }) == ErrorCode::kBadValue);
  CHECK(code_of([] { parse_config("bandpass_order = 3\n"); }) == ErrorCode::kBadValue);
  CHECK(code_of([] { parse_config("remove_mean = maybe\n"); }) == ErrorCode::kBadValue);
  CHECK(code_of([] { parse_config("colour = red\n"); }) == ErrorCode::kUnknownKey);
  CHECK(code_of([] { parse_config("just text\n"); }) == ErrorCode::kParseError);
}

TEST_CASE("read_config from disk") {
  TempDir dir;
  write_text(dir / "run.cfg", "sample_rate_hz = 256\nwindow_seconds = 1\n");
  CHECK(read_config(dir / "run.cfg").window_spec().length == 256);
  CHECK(code_of([&] { read_config(dir / "none.cfg"); }) == ErrorCode::kIoError);
}
