#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_pr/signal.hpp"

namespace sparse_pr {

// File-system failures; the message always carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
// Accepts the output of format_double plus "inf"/"-inf"/"nan".
// Throws std::invalid_argument on malformed input.
double parse_double(std::string_view s);

enum class FileFormat { kCsv, kJson };
// ".json" (any case) -> kJson, anything else -> kCsv.
FileFormat format_from_path(const std::filesystem::path& path);

// Signals: CSV header "index,re,im"; JSON array of [re, im] pairs.
void write_signal_csv(std::ostream& os, std::span<const Complex> x);
ComplexSignal read_signal_csv(std::istream& is);
std::string signal_to_json(std::span<const Complex> x);
ComplexSignal signal_from_json(std::string_view text);

// Masks: CSV header "mask_index,index,re,im"; JSON array of signal arrays.
void write_masks_csv(std::ostream& os, const std::vector<CVector>& masks);
std::vector<CVector> read_masks_csv(std::istream& is);
std::string masks_to_json(const std::vector<CVector>& masks);
std::vector<CVector> masks_from_json(std::string_view text);

// Magnitudes: CSV header "index,value"; JSON array of numbers.
void write_magnitudes_csv(std::ostream& os, std::span<const double> b);
Magnitudes read_magnitudes_csv(std::istream& is);
std::string magnitudes_to_json(std::span<const double> b);
Magnitudes magnitudes_from_json(std::string_view text);

// Path-based helpers dispatching on format_from_path.
void save_signal(const std::filesystem::path& path, std::span<const Complex> x);
ComplexSignal load_signal(const std::filesystem::path& path);
void save_masks(const std::filesystem::path& path, const std::vector<CVector>& masks);
std::vector<CVector> load_masks(const std::filesystem::path& path);
void save_magnitudes(const std::filesystem::path& path, std::span<const double> b);
Magnitudes load_magnitudes(const std::filesystem::path& path);

// Whole-file helpers used by the loaders above and the results writers.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Splits one CSV line on commas (no quoting; none of our formats need it).
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace sparse_pr
