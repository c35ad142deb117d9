// bic: command-line front end for the posterior / correntropy pipeline.
//
//   bic run --input data.csv --out results/
//   bic fixtures regenerate --out data/
//   bic stats --input data.csv

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bic/pipeline.hpp"
#include "bic/synthetic.hpp"

namespace {

std::vector<double> parse_prior_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw bic::Error(bic::ErrorCode::ConfigInvalid, "pipeline_cli", "bad prior `" + item + "`");
    out.push_back(v);
  }
  return out;
}

std::string stats_json(const bic::IngestResult& ingest) {
  using bic::format_double;
  const auto demeaned = bic::summary_stats(ingest.demeaned);
  const auto excess = bic::summary_stats(ingest.excess);
  const auto rf = ingest.real_riskfree.values();
  std::ostringstream os;
  os << "{\n  \"n\": " << demeaned.n
     << ",\n  \"mean_real_riskfree\": " << format_double(bic::stats::mean(rf))
     << ",\n  \"excess\": {\"mean\": " << format_double(excess.mean)
     << ", \"std\": " << format_double(excess.std) << ", \"ar1\": " << format_double(excess.ar1)
     << "},\n  \"demeaned\": {\"mean\": " << format_double(demeaned.mean)
     << ", \"std\": " << format_double(demeaned.std) << ", \"ar1\": " << format_double(demeaned.ar1)
     << ", \"n\": " << demeaned.n << "}";
  if (ingest.excess.size() >= 3 && excess.std > 0.0) {
    const auto facts = bic::stylized_facts(ingest.excess);
    os << ",\n  \"stylized_facts\": {\"ar1_excess\": " << format_double(facts.ar1_excess)
       << ", \"annualized_vol\": " << format_double(facts.annualized_vol)
       << ", \"skewness\": " << format_double(facts.skewness) << ", \"n\": " << facts.n << "}";
  }
  os << "\n}\n";
  return os.str();
}

std::string fixture_stats_json(const bic::FixtureSpec& spec, const bic::IngestResult& ingest) {
  using bic::format_double;
  std::ostringstream os;
  os << "{\n  \"generator\": \"SplitMix64 + Box-Muller\",\n  \"seed\": " << spec.seed
     << ",\n  \"first_year\": " << spec.first_year << ",\n  \"years\": " << spec.years
     << ",\n  \"parameters\": {\"market_mu\": " << format_double(spec.market_mu)
     << ", \"market_sigma\": " << format_double(spec.market_sigma)
     << ", \"riskfree_real_mu\": " << format_double(spec.riskfree_real_mu)
     << ", \"riskfree_real_sigma\": " << format_double(spec.riskfree_real_sigma)
     << ", \"inflation_mu\": " << format_double(spec.inflation_mu)
     << ", \"inflation_sigma\": " << format_double(spec.inflation_sigma) << "},\n";
  const std::string body = stats_json(ingest);
  // Splice the ingest statistics into the same object.
  os << body.substr(2);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian posterior paths and windowed correntropy for return series", "bic"};
  app.require_subcommand(1);

  bic::PipelineConfig config;
  std::string priors_text = "0,0.25,0.5,0.75";
  std::string input_kind = "posterior";
  std::string format = "both";
  std::optional<double> sigma;
  std::optional<double> prior_clamp;

  auto* run = app.add_subcommand("run", "Run ingest, posterior sweep, correntropy and detection");
  run->add_option("--input", config.input_path, "Market CSV")->required();
  run->add_option("--priors", priors_text, "Comma-separated prior sweep")->capture_default_str();
  run->add_option("--prior-clamp", prior_clamp, "Clamp priors into [eps, 1-eps]");
  run->add_option("--separation", config.separation, "Regime separation in std units")
      ->capture_default_str();
  run->add_option("--window", config.window_length, "Window length")->capture_default_str();
  run->add_option("--stride", config.stride, "Window stride (default: window length)");
  run->add_option("--sigma", sigma, "Kernel bandwidth (default: Silverman rule)");
  run->add_option("--correntropy-input", input_kind, "posterior or excess")
      ->check(CLI::IsMember({"posterior", "excess"}))
      ->capture_default_str();
  run->add_option("--threshold-k", config.threshold_k, "Detection threshold in robust sigmas")
      ->capture_default_str();
  run->add_option("--format", format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  run->add_option("--out", config.output_dir, "Output directory")->required();

  auto* fixtures = app.add_subcommand("fixtures", "Manage the bundled fixture");
  fixtures->require_subcommand(1);
  auto* regenerate = fixtures->add_subcommand("regenerate", "Rewrite the 84-row annual fixture");
  std::filesystem::path fixture_out;
  regenerate->add_option("--out", fixture_out, "Output directory")->required();

  auto* stats = app.add_subcommand("stats", "Print summary statistics of the excess series");
  std::filesystem::path stats_input;
  stats->add_option("--input", stats_input, "Market CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      config.priors = parse_prior_list(priors_text);
      config.sigma = sigma;
      config.prior_clamp = prior_clamp;
      config.correntropy_input = input_kind == "excess" ? bic::CorrentropyInput::ExcessReturns
                                                        : bic::CorrentropyInput::PosteriorPath;
      config.format = format == "json"  ? bic::OutputFormat::Json
                      : format == "csv" ? bic::OutputFormat::Csv
                                        : bic::OutputFormat::Both;
      const auto report = bic::run_pipeline(config);
      for (const auto& path : bic::emit_report(report, config))
        std::cout << path.generic_string() << "\n";
    } else if (*regenerate) {
      const bic::FixtureSpec spec;
      const auto csv = bic::format_market_csv(bic::generate_fixture(spec));
      std::filesystem::create_directories(fixture_out);
      bic::write_file(fixture_out / "fixture_annual.csv", csv);
      bic::write_file(fixture_out / "fixture_stats.json",
                      fixture_stats_json(spec, bic::ingest_market_csv(csv)));
      std::cout << (fixture_out / "fixture_annual.csv").generic_string() << "\n"
                << (fixture_out / "fixture_stats.json").generic_string() << "\n";
    } else if (*stats) {
      std::cout << stats_json(bic::ingest_market_csv(bic::read_file(stats_input)));
    }
  } catch (const bic::Error& e) {
    std::cerr << "bic: " << e.module() << ": " << bic::to_string(e.code()) << ": " << e.what()
              << "\n";
    return bic::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "bic: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
