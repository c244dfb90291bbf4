#include "dyca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dyca/error.hpp"

namespace dyca {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string parse_error_at(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

// Splits one CSV record. Quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"' && trim(current).empty() && !was_quoted) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current += ch;
    }
  }
  if (quoted) throw Error(ErrorCode::kParseError, parse_error_at(line_no, "unterminated quote"));
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

double parse_double(std::string_view text, std::size_t line_no) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(line_no, "not a number: '" + std::string(text) + "'"));
  }
  return value;
}

LabeledMatrix parse_table(const std::string& content) {
  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (!have_header) {
      labels = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != labels.size()) {
      throw Error(ErrorCode::kRaggedRows,
                  parse_error_at(line_no, std::to_string(fields.size()) + " fields under a " +
                                              std::to_string(labels.size()) + "-column header"));
    }
    for (const auto& f : fields) {
      const double v = parse_double(f, line_no);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFinite, parse_error_at(line_no, "non-finite value '" + f + "'"));
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (!have_header) throw Error(ErrorCode::kEmptyInput, "file has no header row");
  if (rows == 0) throw Error(ErrorCode::kEmptyInput, "file has no data rows");
  Matrix m(rows, labels.size());
  std::copy(values.begin(), values.end(), m.data().begin());
  return {std::move(m), std::move(labels)};
}

std::string render_table(const Matrix& values, const std::vector<std::string>& labels) {
  if (labels.empty() || values.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "table needs at least one labelled column");
  }
  if (values.cols() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per column required");
  }
  std::string out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j) out += ',';
    out += quote_field(labels[j]);
  }
  out += '\n';
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

double parse_config_number(const std::string& key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw Error(ErrorCode::kBadValue, key + ": not a finite number: '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_config_seed(const std::string& key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kBadValue, key + ": not a non-negative integer: '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

WindowSpec RunConfig::window_spec() const {
  const double length = std::round(window_seconds * sample_rate_hz);
  const double hop = std::round(hop_seconds.value_or(window_seconds) * sample_rate_hz);
  if (length < 3.0) throw Error(ErrorCode::kTooShort, "window shorter than 3 samples");
  if (hop < 1.0) throw Error(ErrorCode::kBadValue, "hop_seconds: shorter than one sample");
  return {static_cast<std::size_t>(length), static_cast<std::size_t>(hop)};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0 && std::isfinite(sample_rate_hz))) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  LabeledMatrix table = parse_table(read_file(path));
  return TimeSeries(table.values.transposed(), 1.0 / sample_rate_hz, std::move(table.labels));
}

void write_timeseries_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  write_file(path, render_table(ts.data().transposed(), ts.labels()));
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_table(read_file(path));
}

void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      const std::filesystem::path& path) {
  write_file(path, render_table(values, labels));
}

void write_spectra_csv(const std::vector<WindowResult>& results, std::size_t top_k,
                       const std::filesystem::path& path) {
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be at least 1");
  std::string out = "window,t_start_s";
  for (std::size_t i = 1; i <= top_k; ++i) out += ",lambda_" + std::to_string(i);
  out += '\n';
  for (const WindowResult& r : results) {
    out += std::to_string(r.index) + ',' + format_double(r.t_start);
    for (std::size_t i = 0; i < top_k; ++i) {
      const bool have = r.spectrum && i < r.spectrum->values.size();
      out += ',';
      out += have ? format_double(r.spectrum->values[i]) : "nan";
    }
    out += '\n';
  }
  write_file(path, out);
}

void write_spectrum_csv(const DycaSpectrum& spectrum, const std::filesystem::path& path) {
  std::string out = "component,lambda\n";
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_double(spectrum.values[i]) + '\n';
  }
  write_file(path, out);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::optional<double> band_low, band_high;
  std::optional<int> band_order;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, parse_error_at(line_no, "expected 'key = value'"));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    auto positive = [&](double v) {
      if (!(v > 0.0)) throw Error(ErrorCode::kBadValue, key + ": must be positive");
      return v;
    };

    if (key == "sample_rate_hz") {
      cfg.sample_rate_hz = positive(parse_config_number(key, value));
    } else if (key == "window_seconds") {
      cfg.window_seconds = positive(parse_config_number(key, value));
    } else if (key == "hop_seconds") {
      cfg.hop_seconds = positive(parse_config_number(key, value));
    } else if (key == "threshold") {
      const double v = parse_config_number(key, value);
      if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::kBadValue, key + ": must lie in (0, 1]");
      cfg.threshold = v;
    } else if (key == "ridge") {
      const double v = parse_config_number(key, value);
      if (v < 0.0) throw Error(ErrorCode::kBadValue, key + ": must be non-negative");
      cfg.ridge = v;
    } else if (key == "bandpass_low_hz") {
      band_low = positive(parse_config_number(key, value));
    } else if (key == "bandpass_high_hz") {
      band_high = positive(parse_config_number(key, value));
    } else if (key == "bandpass_order") {
      const double v = parse_config_number(key, value);
      if (v < 2 || std::floor(v) != v || static_cast<int>(v) % 2 != 0) {
        throw Error(ErrorCode::kBadValue, key + ": must be an even integer ≥ 2");
      }
      band_order = static_cast<int>(v);
    } else if (key == "mixing_seed") {
      cfg.mixing_seed = parse_config_seed(key, value);
    } else if (key == "noise_seed") {
      cfg.noise_seed = parse_config_seed(key, value);
    } else if (key == "remove_mean") {
      if (value == "true" || value == "1") {
        cfg.remove_mean = true;
      } else if (value == "false" || value == "0") {
        cfg.remove_mean = false;
      } else {
        throw Error(ErrorCode::kBadValue, key + ": expected true or false");
      }
    } else {
      throw Error(ErrorCode::kUnknownKey, parse_error_at(line_no, "unknown key '" + key + "'"));
    }
  }
  if (band_low || band_high || band_order) {
    if (!band_low || !band_high) {
      throw Error(ErrorCode::kBadValue, "bandpass_low_hz and bandpass_high_hz must be given together");
    }
    if (!(*band_high > *band_low)) {
      throw Error(ErrorCode::kBadValue, "bandpass_high_hz: must exceed bandpass_low_hz");
    }
    cfg.bandpass = BandpassSpec{*band_low, *band_high, band_order.value_or(4)};
  }
  return cfg;
}

RunConfig read_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

}  // namespace dyca
