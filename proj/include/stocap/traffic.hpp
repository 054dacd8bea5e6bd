#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stocap/histogram.hpp"
#include "stocap/timestamp.hpp"

namespace stocap {

struct VehicleEvent {
  Millis timestamp;
  double speed_kmh = 0.0;
  double length_m = 0.0;
  bool valid = true;

  bool operator==(const VehicleEvent&) const = default;
};

struct RowDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ParsedEvents {
  std::vector<VehicleEvent> events;  // sorted by timestamp
  std::size_t rows = 0;
  std::size_t dropped_invalid = 0;
  std::size_t dropped_duplicate = 0;
  std::size_t dropped_implausible = 0;
  std::size_t rejected_malformed = 0;
  std::vector<RowDiagnostic> diagnostics;
};

class CsvFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxPlausibleSpeed = 250.0;
inline constexpr double kMaxPlausibleLength = 30.0;

// Reads `timestamp,speed_kmh,length_m,valid`. Throws CsvFormatError when the
// header is wrong; bad rows are rejected with a diagnostic and parsing goes on.
ParsedEvents parse_events(std::istream& in);

struct DetectionConfig {
  double breakdown_speed = 40.0;
  double discard_speed = 50.0;
  double recovery_speed = 70.0;
  int breakdown_window = 3;
  int recovery_window = 5;
  double pce_length_threshold = 9.0;

  void validate() const;
};

struct FlowInterval {
  Minute start;
  int width = 1;  // minutes
  int intensity = 0;  // PCE
  int vehicle_count = 0;
  // Harmonic mean for width 1, mean of the defined minute means otherwise.
  // Empty when no vehicle with non-zero speed was seen.
  std::optional<double> mean_speed;
  int zero_speed_vehicles = 0;
  // Width > 1 only: at least one constituent minute had no vehicles.
  bool partial = false;

  bool empty() const { return vehicle_count == 0; }
  Minute end() const { return start + std::chrono::minutes{width}; }

  bool operator==(const FlowInterval&) const = default;
};

// One interval per calendar minute from the first to the last event.
std::vector<FlowInterval> aggregate_minutes(const std::vector<VehicleEvent>& events,
                                            const DetectionConfig& config = {});

// Overlapping width-k windows, stride one minute; output[i] covers
// minutes[i .. i+k-1]. Requires a contiguous minute sequence.
std::vector<FlowInterval> rolling_aggregate(const std::vector<FlowInterval>& minutes, int k);

void write_minutes_csv(std::ostream& out, const std::vector<FlowInterval>& minutes);
std::vector<FlowInterval> read_minutes_csv(std::istream& in);

struct BreakdownObservation {
  Minute breakdown_minute;
  int breakdown_flow = 0;  // PCE per 3 min
  bool shifted_back = false;

  bool operator==(const BreakdownObservation&) const = default;
};

// What the trailing 3-minute record ending at each minute was used for.
enum class MinuteClass : unsigned char {
  warmup,     // no full trailing window yet
  censored,   // histogram record
  breakdown,  // the uncensored breakdown-flow record
  discarded,  // speed dip or detector gap
  congested,
};

struct DetectionResult {
  std::vector<BreakdownObservation> breakdowns;
  IntensityHistogram histogram;
  std::vector<MinuteClass> classes;  // parallel to the input minutes
  std::size_t eligible_minutes = 0;
  std::size_t discarded_minutes = 0;
  std::size_t congested_minutes = 0;
  std::size_t gap_windows = 0;  // subset of discarded
  std::size_t skipped_breakdowns = 0;
  bool ended_congested = false;
  std::vector<std::string> warnings;
};

DetectionResult detect_breakdowns(const std::vector<FlowInterval>& minutes,
                                  const DetectionConfig& config = {});

}  // namespace stocap
