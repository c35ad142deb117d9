#include "bic/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bic {

namespace {

constexpr const char* kModule = "pipeline_cli";

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, kModule, what);
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("null");
}

std::string_view input_name(CorrentropyInput input) {
  return input == CorrentropyInput::PosteriorPath ? "posterior" : "excess";
}

std::string_view format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

bool is_constant(const ReturnSeries& s) {
  const auto pts = s.points();
  return std::all_of(pts.begin(), pts.end(),
                     [&](const SeriesPoint& p) { return p.value == pts.front().value; });
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string prior_key(double prior) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, prior);
  (void)ec;
  return std::string(buf, ptr);
}

void PipelineConfig::validate() const {
  if (priors.empty()) config_error("at least one prior is required");
  for (double p : priors)
    if (!(p >= 0.0 && p <= 1.0)) config_error("priors must lie in [0, 1], got " + prior_key(p));
  for (std::size_t i = 0; i < priors.size(); ++i)
    for (std::size_t j = i + 1; j < priors.size(); ++j)
      if (priors[i] == priors[j]) config_error("duplicate prior " + prior_key(priors[i]));
  if (prior_clamp && !(*prior_clamp > 0.0 && *prior_clamp < 0.5))
    config_error("--prior-clamp must lie in (0, 0.5)");
  if (!(separation > 0.0) || !std::isfinite(separation)) config_error("separation must be positive");
  if (window_length < 2) config_error("window length must be at least 2");
  if (sigma && (!(*sigma > 0.0) || !std::isfinite(*sigma)))
    config_error("sigma must be positive and finite");
  if (!(threshold_k > 0.0) || !std::isfinite(threshold_k)) config_error("threshold-k must be positive");
}

PipelineReport run_pipeline_on(std::string_view csv_bytes, const PipelineConfig& config) {
  config.validate();
  const auto ingest = ingest_market_csv(csv_bytes);
  const auto& obs = ingest.demeaned;

  PipelineReport report;
  report.config = config;
  report.stats = summary_stats(obs);

  const auto model = fit_two_regime(obs, config.separation);
  for (double prior : config.priors) {
    const double effective =
        config.prior_clamp ? std::clamp(prior, *config.prior_clamp, 1.0 - *config.prior_clamp)
                           : prior;
    auto path = posterior_path(obs, model, effective);
    path.prior = prior;
    report.degenerate.push_back(is_constant(path.series));
    report.paths.push_back(std::move(path));
  }

  // One bandwidth for every window pair and prior so v-values stay comparable.
  std::vector<double> pooled;
  if (config.correntropy_input == CorrentropyInput::PosteriorPath) {
    for (const auto& p : report.paths) {
      const auto v = p.series.values();
      pooled.insert(pooled.end(), v.begin(), v.end());
    }
  } else {
    pooled = obs.values();
  }
  report.bandwidth = config.sigma ? KernelBandwidth(*config.sigma, BandwidthSource::UserSet)
                                  : silverman_bandwidth(pooled);

  const WindowSpec window(config.window_length, config.effective_stride());
  auto branch = [&](std::string key, const ReturnSeries& input) {
    PriorBranch b{std::move(key), windowed_correntropy(input, window, report.bandwidth), {}};
    b.signals = detect_bias(b.correntropy, config.threshold_k);
    report.branches.push_back(std::move(b));
  };
  if (config.correntropy_input == CorrentropyInput::PosteriorPath) {
    for (const auto& p : report.paths) branch(prior_key(p.prior), p.series);
  } else {
    branch(std::string(kExcessKey), obs);
  }
  return report;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  return run_pipeline_on(read_file(config.input_path), config);
}

std::string report_to_json(const PipelineReport& r) {
  const auto& c = r.config;
  std::ostringstream os;
  os << "{\n";
  os << "  \"version\": " << json_string(r.version) << ",\n";

  os << "  \"config\": {\"input\": " << json_string(c.input_path.generic_string())
     << ", \"priors\": [";
  for (std::size_t i = 0; i < c.priors.size(); ++i)
    os << (i ? ", " : "") << format_double(c.priors[i]);
  os << "], \"prior_clamp\": " << json_optional(c.prior_clamp)
     << ", \"separation\": " << format_double(c.separation)
     << ", \"window\": " << c.window_length << ", \"stride\": " << c.effective_stride()
     << ", \"sigma\": " << json_optional(c.sigma)
     << ", \"correntropy_input\": " << json_string(input_name(c.correntropy_input))
     << ", \"threshold_k\": " << format_double(c.threshold_k)
     << ", \"format\": " << json_string(format_name(c.format)) << "},\n";

  os << "  \"stats\": {\"mean\": " << format_double(r.stats.mean)
     << ", \"std\": " << format_double(r.stats.std) << ", \"ar1\": " << format_double(r.stats.ar1)
     << ", \"n\": " << r.stats.n << "},\n";

  os << "  \"bandwidth\": {\"sigma\": " << format_double(r.bandwidth.sigma())
     << ", \"source\": " << json_string(to_string(r.bandwidth.source())) << "},\n";

  os << "  \"paths\": [";
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    const auto& p = r.paths[i];
    os << (i ? ",\n" : "\n") << "    {\"prior\": " << format_double(p.prior)
       << ", \"degenerate\": " << (r.degenerate[i] ? "true" : "false") << ", \"points\": [";
    const auto pts = p.series.points();
    for (std::size_t t = 0; t < pts.size(); ++t)
      os << (t ? ", " : "") << "[" << pts[t].period << ", " << format_double(pts[t].value) << "]";
    os << "]}";
  }
  os << "\n  ],\n";

  os << "  \"correntropy\": {";
  for (std::size_t i = 0; i < r.branches.size(); ++i) {
    const auto& b = r.branches[i];
    os << (i ? ",\n" : "\n") << "    " << json_string(b.key) << ": [";
    for (std::size_t k = 0; k < b.correntropy.entries.size(); ++k) {
      const auto& e = b.correntropy.entries[k];
      os << (k ? ", " : "") << "{\"pair_index\": " << e.pair_index
         << ", \"left_start\": " << e.left_start << ", \"right_start\": " << e.right_start
         << ", \"v\": " << format_double(e.v) << "}";
    }
    os << "]";
  }
  os << "\n  },\n";

  os << "  \"signals\": {";
  for (std::size_t i = 0; i < r.branches.size(); ++i) {
    const auto& b = r.branches[i];
    os << (i ? ",\n" : "\n") << "    " << json_string(b.key) << ": [";
    for (std::size_t k = 0; k < b.signals.size(); ++k) {
      const auto& s = b.signals[k];
      os << (k ? ", " : "") << "{\"pair_index\": " << s.pair_index
         << ", \"delta\": " << format_double(s.delta)
         << ", \"direction\": " << json_string(to_string(s.direction))
         << ", \"magnitude\": " << format_double(s.magnitude) << "}";
    }
    os << "]";
  }
  os << "\n  }\n}\n";
  return os.str();
}

std::string to_csv(const PosteriorPath& path) {
  std::string out;
  for (const auto& pt : path.series.points())
    out += std::to_string(pt.period) + "," + format_double(path.prior) + "," +
           format_double(pt.value) + "\n";
  return out;
}

std::string to_csv(const CorrentropySeries& cs) {
  std::string out = "pair_index,left_start,right_start,v\n";
  for (const auto& e : cs.entries)
    out += std::to_string(e.pair_index) + "," + std::to_string(e.left_start) + "," +
           std::to_string(e.right_start) + "," + format_double(e.v) + "\n";
  return out;
}

std::string posterior_paths_to_csv(const PipelineReport& report) {
  std::string out = "period,prior,posterior\n";
  for (const auto& p : report.paths) out += to_csv(p);
  return out;
}

std::string correntropy_to_csv(const PipelineReport& report) {
  std::string out = "prior,pair_index,left_start,right_start,v\n";
  for (const auto& b : report.branches)
    for (const auto& e : b.correntropy.entries)
      out += b.key + "," + std::to_string(e.pair_index) + "," + std::to_string(e.left_start) +
             "," + std::to_string(e.right_start) + "," + format_double(e.v) + "\n";
  return out;
}

std::string signals_to_csv(const PipelineReport& report) {
  std::string out = "prior,pair_index,delta,direction,magnitude\n";
  for (const auto& b : report.branches)
    for (const auto& s : b.signals)
      out += b.key + "," + std::to_string(s.pair_index) + "," + format_double(s.delta) + "," +
             std::string(to_string(s.direction)) + "," + format_double(s.magnitude) + "\n";
  return out;
}

std::vector<std::filesystem::path> emit_report(const PipelineReport& report,
                                               const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec)
    throw Error(ErrorCode::IoFailure, kModule,
                "cannot create output directory " + config.output_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& contents) {
    const auto path = config.output_dir / name;
    write_file(path, contents);
    written.push_back(path);
  };
  if (config.format != OutputFormat::Csv) emit("report.json", report_to_json(report));
  if (config.format != OutputFormat::Json) {
    emit("posterior_paths.csv", posterior_paths_to_csv(report));
    emit("correntropy.csv", correntropy_to_csv(report));
    emit("signals.csv", signals_to_csv(report));
  }
  return written;
}

std::vector<PosteriorPath> parse_posterior_paths_csv(std::string_view bytes) {
  auto lines = split(bytes, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != "period,prior,posterior")
    throw Error(ErrorCode::MalformedRow, kModule, "expected header `period,prior,posterior`");

  std::vector<double> priors;
  std::vector<std::vector<SeriesPoint>> points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    std::int64_t period = 0;
    double prior = 0.0, p = 0.0;
    auto ok = [](std::string_view s, auto& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
    };
    if (f.size() != 3 || !ok(f[0], period) || !ok(f[1], prior) || !ok(f[2], p))
      throw Error(ErrorCode::MalformedRow, kModule,
                  "posterior_paths line " + std::to_string(i + 1) + " is malformed");
    auto it = std::find(priors.begin(), priors.end(), prior);
    if (it == priors.end()) {
      priors.push_back(prior);
      points.emplace_back();
      it = priors.end() - 1;
    }
    points[static_cast<std::size_t>(it - priors.begin())].push_back({period, p});
  }
  std::vector<PosteriorPath> out;
  for (std::size_t k = 0; k < priors.size(); ++k)
    out.push_back({priors[k], ReturnSeries(SeriesKind::Posterior, std::move(points[k]))});
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, kModule, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, kModule, "cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, kModule, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, kModule, "failed writing " + path.string());
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateSample:
    case ErrorCode::ZeroEvidence:
      return 3;
    case ErrorCode::IoFailure:
      return 4;
    default:
      return 2;
  }
}

}  // namespace bic
