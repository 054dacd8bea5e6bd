#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stocap/manifest.hpp"

namespace stocap::cli {

inline constexpr const char* kFixedClock = "1970-01-01T00:00:00Z";

// Options shared by every subcommand.
struct Globals {
  std::optional<std::uint64_t> seed;
  bool fixed_clock = false;
  std::string out_dir;
  std::string config;

  Clock clock() const { return Clock(fixed_clock ? std::optional<std::string>(kFixedClock) : std::nullopt); }
};

// Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestArgs {
  std::string input;
  std::string out;
  double pce_length = 9.0;
};

struct DetectArgs {
  std::string minutes;
  std::string out;
  std::optional<double> breakdown_speed;
  std::optional<double> discard_speed;
  std::optional<double> recovery_speed;
};

struct EstimateArgs {
  std::string method = "cfb";
  std::string detection;
  std::optional<int> imin;
  std::optional<int> imax;
  int starts = 5;
  std::string out;
};

struct SynthArgs {
  double lambda = 150.0;
  double gamma = 6.5;
  std::uint64_t records = 6486;
  std::uint64_t seed = 42;
  double spread = 0.5;
  double profile_total = 51.4;
  std::string out;
};

struct ReportArgs {
  std::string a;
  std::string b;
  std::string out;
  std::vector<double> levels;  // percent
};

int run_ingest(const Globals& g, const IngestArgs& args);
int run_detect(const Globals& g, const DetectArgs& args);
int run_estimate(const Globals& g, const EstimateArgs& args);
int run_synth(const Globals& g, const SynthArgs& args);
int run_experiment(const Globals& g, const std::string& study);
int run_report(const Globals& g, const ReportArgs& args);
int run_pipeline(const Globals& g);

// Fully resolved configurations, exposed for tests.
Json default_experiment_config(const std::string& study);
Json default_pipeline_config();

}  // namespace stocap::cli
