#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sparse_pr/experiment.hpp"
#include "sparse_pr/signal_io.hpp"

namespace sparse_pr {

namespace {

TrialResult without_timing(TrialResult r) {
  r.wall_time_s = 0.0;
  return r;
}

AggregateRow without_timing(AggregateRow a) {
  a.mean_runtime_success_s = std::isnan(a.mean_runtime_success_s) ? a.mean_runtime_success_s : 0.0;
  return a;
}

// JSON has no inf/nan; such values are written as strings ("inf", "nan").
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string trials_to_csv(std::span<const TrialResult> rows, const EmitOptions& opt) {
  std::ostringstream os;
  os << trial_csv_header() << '\n';
  for (const auto& r : rows) os << to_csv_row(opt.include_timing ? r : without_timing(r)) << '\n';
  return os.str();
}

std::vector<TrialResult> trials_from_csv(std::string_view text) {
  std::vector<TrialResult> rows;
  bool header = true;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != trial_csv_header()) throw std::invalid_argument("unexpected trial CSV header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    try {
      rows.push_back(parse_trial_csv_row(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (header) throw std::invalid_argument("empty trial CSV");
  return rows;
}

std::string aggregates_to_csv(std::span<const AggregateRow> rows, const EmitOptions& opt) {
  std::ostringstream os;
  os << "method,n,s,sr_percent,snr,k_masks,trials,successes,recovery_probability,mean_nmse,"
        "median_nmse,mean_runtime_success_s,mean_iterations\n";
  for (const auto& raw : rows) {
    const AggregateRow a = opt.include_timing ? raw : without_timing(raw);
    os << a.method << ',' << a.n << ',' << a.s << ',' << format_double(a.sr_percent()) << ','
       << format_double(a.snr) << ',' << a.k_masks << ',' << a.trials << ',' << a.successes
       << ',' << format_double(a.recovery_probability) << ',' << format_double(a.mean_nmse)
       << ',' << format_double(a.median_nmse) << ',' << format_double(a.mean_runtime_success_s)
       << ',' << format_double(a.mean_iterations) << '\n';
  }
  return os.str();
}

std::string table_to_json(const ResultTable& table, const EmitOptions& opt) {
  nlohmann::json doc;
  auto& trials = doc["trials"] = nlohmann::json::array();
  for (const auto& raw : table.rows) {
    const TrialResult r = opt.include_timing ? raw : without_timing(raw);
    trials.push_back({{"method", r.method},
                      {"n", r.n},
                      {"s", r.s},
                      {"snr", number(r.snr)},
                      {"k_masks", r.k_masks},
                      {"seed", r.seed},
                      {"nmse", number(r.nmse)},
                      {"success", r.success},
                      {"iterations", r.iterations},
                      {"wall_time_s", number(r.wall_time_s)}});
  }
  auto& aggs = doc["aggregates"] = nlohmann::json::array();
  for (const auto& raw : table.aggregates) {
    const AggregateRow a = opt.include_timing ? raw : without_timing(raw);
    aggs.push_back({{"method", a.method},
                    {"n", a.n},
                    {"s", a.s},
                    {"sr_percent", number(a.sr_percent())},
                    {"snr", number(a.snr)},
                    {"k_masks", a.k_masks},
                    {"trials", a.trials},
                    {"successes", a.successes},
                    {"recovery_probability", number(a.recovery_probability)},
                    {"mean_nmse", number(a.mean_nmse)},
                    {"median_nmse", number(a.median_nmse)},
                    {"mean_runtime_success_s", number(a.mean_runtime_success_s)},
                    {"mean_iterations", number(a.mean_iterations)}});
  }
  return doc.dump(2) + "\n";
}

std::filesystem::path aggregate_path_for(const std::filesystem::path& path) {
  auto out = path;
  out.replace_filename(path.stem().string() + "_aggregate.csv");
  return out;
}

void emit_results(const ResultTable& table, ResultFormat format,
                  const std::filesystem::path& path, const EmitOptions& opt) {
  if (format == ResultFormat::kJson) {
    write_text_file(path, table_to_json(table, opt));
    return;
  }
  write_text_file(path, trials_to_csv(table.rows, opt));
  write_text_file(aggregate_path_for(path), aggregates_to_csv(table.aggregates, opt));
}

void emit_figure_data(const ResultTable& table, const std::filesystem::path& dir,
                      const EmitOptions& opt) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  std::ostringstream prob, err, tsp, tlen, energy;
  prob << "method,n,s,sr_percent,snr,k_masks,trials,recovery_probability\n";
  err << "method,n,s,sr_percent,snr,k_masks,mean_nmse,median_nmse\n";
  tsp << "method,n,s,sr_percent,snr,k_masks,mean_runtime_success_s\n";
  tlen << "method,n,s,sr_percent,snr,k_masks,mean_runtime_success_s\n";
  for (const auto& raw : table.aggregates) {
    const AggregateRow a = opt.include_timing ? raw : without_timing(raw);
    std::ostringstream key;
    key << a.method << ',' << a.n << ',' << a.s << ',' << format_double(a.sr_percent()) << ','
        << format_double(a.snr) << ',' << a.k_masks << ',';
    prob << key.str() << a.trials << ',' << format_double(a.recovery_probability) << '\n';
    err << key.str() << format_double(a.mean_nmse) << ',' << format_double(a.median_nmse) << '\n';
    tsp << key.str() << format_double(a.mean_runtime_success_s) << '\n';
    tlen << key.str() << format_double(a.mean_runtime_success_s) << '\n';
  }
  energy << "method,n,s,snr,k_masks,iteration,energy\n";
  for (const auto& t : table.traces) {
    for (std::size_t i = 0; i < t.energy.size(); ++i) {
      energy << t.method << ',' << t.n << ',' << t.s << ',' << format_double(t.snr) << ','
             << t.k_masks << ',' << t.iterations[i] << ',' << format_double(t.energy[i]) << '\n';
    }
  }
  write_text_file(dir / "prob_vs_sparsity.csv", prob.str());
  write_text_file(dir / "nmse_vs_sparsity.csv", err.str());
  write_text_file(dir / "time_vs_sparsity.csv", tsp.str());
  write_text_file(dir / "time_vs_length.csv", tlen.str());
  write_text_file(dir / "energy_trace.csv", energy.str());
}

}  // namespace sparse_pr
