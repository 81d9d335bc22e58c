#include "sparse_pr/signal_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace sparse_pr {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  return v;
}

FileFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".json" ? FileFormat::kJson : FileFormat::kCsv;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

std::size_t parse_index(std::string_view s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("malformed index '" + std::string(s) + "'");
  }
  return v;
}

// Reads a header-led CSV, checks the header, and hands each data row to fn.
template <typename Fn>
void for_each_row(std::istream& is, std::string_view expected_header, std::size_t columns,
                  Fn&& fn) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw std::invalid_argument("unexpected CSV header '" + line + "', expected '" +
                                std::string(expected_header) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != columns) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(columns) + " columns");
    }
    try {
      fn(cells);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

CVector pairs_from_json(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("expected a JSON array of [re, im] pairs");
  CVector out;
  out.reserve(arr.size());
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw std::invalid_argument("expected [re, im] pair");
    }
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

json pairs_to_json(std::span<const Complex> x) {
  json arr = json::array();
  for (const auto& c : x) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void write_signal_csv(std::ostream& os, std::span<const Complex> x) {
  os << "index,re,im\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << i << ',' << format_double(x[i].real()) << ',' << format_double(x[i].imag()) << '\n';
  }
}

ComplexSignal read_signal_csv(std::istream& is) {
  CVector values;
  for_each_row(is, "index,re,im", 3, [&](const auto& cells) {
    if (parse_index(cells[0]) != values.size()) throw std::invalid_argument("index out of order");
    values.emplace_back(parse_double(cells[1]), parse_double(cells[2]));
  });
  return ComplexSignal(std::move(values));
}

std::string signal_to_json(std::span<const Complex> x) { return pairs_to_json(x).dump(); }

ComplexSignal signal_from_json(std::string_view text) {
  return ComplexSignal(pairs_from_json(parse_json(text)));
}

void write_masks_csv(std::ostream& os, const std::vector<CVector>& masks) {
  os << "mask_index,index,re,im\n";
  for (std::size_t j = 0; j < masks.size(); ++j) {
    for (std::size_t i = 0; i < masks[j].size(); ++i) {
      os << j << ',' << i << ',' << format_double(masks[j][i].real()) << ','
         << format_double(masks[j][i].imag()) << '\n';
    }
  }
}

std::vector<CVector> read_masks_csv(std::istream& is) {
  std::vector<CVector> masks;
  for_each_row(is, "mask_index,index,re,im", 4, [&](const auto& cells) {
    const std::size_t j = parse_index(cells[0]);
    const std::size_t i = parse_index(cells[1]);
    if (j == masks.size()) masks.emplace_back();
    if (j + 1 != masks.size() || i != masks.back().size()) {
      throw std::invalid_argument("mask rows out of order");
    }
    masks.back().emplace_back(parse_double(cells[2]), parse_double(cells[3]));
  });
  if (masks.empty()) throw std::invalid_argument("no masks in input");
  return masks;
}

std::string masks_to_json(const std::vector<CVector>& masks) {
  json arr = json::array();
  for (const auto& m : masks) arr.push_back(pairs_to_json(m));
  return arr.dump();
}

std::vector<CVector> masks_from_json(std::string_view text) {
  const json arr = parse_json(text);
  if (!arr.is_array() || arr.empty()) throw std::invalid_argument("expected a JSON array of masks");
  std::vector<CVector> masks;
  for (const auto& m : arr) masks.push_back(pairs_from_json(m));
  return masks;
}

void write_magnitudes_csv(std::ostream& os, std::span<const double> b) {
  os << "index,value\n";
  for (std::size_t i = 0; i < b.size(); ++i) os << i << ',' << format_double(b[i]) << '\n';
}

Magnitudes read_magnitudes_csv(std::istream& is) {
  RVector values;
  for_each_row(is, "index,value", 2, [&](const auto& cells) {
    if (parse_index(cells[0]) != values.size()) throw std::invalid_argument("index out of order");
    values.push_back(parse_double(cells[1]));
  });
  return Magnitudes(std::move(values));
}

std::string magnitudes_to_json(std::span<const double> b) {
  return json(std::vector<double>(b.begin(), b.end())).dump();
}

Magnitudes magnitudes_from_json(std::string_view text) {
  const json arr = parse_json(text);
  if (!arr.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  RVector values;
  for (const auto& v : arr) {
    if (!v.is_number()) throw std::invalid_argument("expected a number");
    values.push_back(v.get<double>());
  }
  return Magnitudes(std::move(values));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

template <typename Fn>
auto parse_file(const std::filesystem::path& path, Fn&& fn) {
  const std::string text = read_text_file(path);
  try {
    return fn(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace

void save_signal(const std::filesystem::path& path, std::span<const Complex> x) {
  if (format_from_path(path) == FileFormat::kJson) {
    write_text_file(path, signal_to_json(x) + "\n");
    return;
  }
  std::ostringstream os;
  write_signal_csv(os, x);
  write_text_file(path, os.str());
}

ComplexSignal load_signal(const std::filesystem::path& path) {
  return parse_file(path, [&](const std::string& text) {
    if (format_from_path(path) == FileFormat::kJson) return signal_from_json(text);
    std::istringstream is(text);
    return read_signal_csv(is);
  });
}

void save_masks(const std::filesystem::path& path, const std::vector<CVector>& masks) {
  if (format_from_path(path) == FileFormat::kJson) {
    write_text_file(path, masks_to_json(masks) + "\n");
    return;
  }
  std::ostringstream os;
  write_masks_csv(os, masks);
  write_text_file(path, os.str());
}

std::vector<CVector> load_masks(const std::filesystem::path& path) {
  return parse_file(path, [&](const std::string& text) {
    if (format_from_path(path) == FileFormat::kJson) return masks_from_json(text);
    std::istringstream is(text);
    return read_masks_csv(is);
  });
}

void save_magnitudes(const std::filesystem::path& path, std::span<const double> b) {
  if (format_from_path(path) == FileFormat::kJson) {
    write_text_file(path, magnitudes_to_json(b) + "\n");
    return;
  }
  std::ostringstream os;
  write_magnitudes_csv(os, b);
  write_text_file(path, os.str());
}

Magnitudes load_magnitudes(const std::filesystem::path& path) {
  return parse_file(path, [&](const std::string& text) {
    if (format_from_path(path) == FileFormat::kJson) return magnitudes_from_json(text);
    std::istringstream is(text);
    return read_magnitudes_csv(is);
  });
}

}  // namespace sparse_pr
