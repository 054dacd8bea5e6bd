#include "stocap/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace stocap {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_flag(std::string_view s) {
  s = trim(s);
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  return std::nullopt;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void check_header(std::istream& in, std::string_view expected, std::string_view what) {
  std::string header;
  if (!read_line(in, header)) throw CsvFormatError(fmt::format("{}: missing header", what));
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
  std::string cleaned;
  for (auto field : split_commas(header)) {
    if (!cleaned.empty()) cleaned += ',';
    cleaned += trim(field);
  }
  if (cleaned != expected)
    throw CsvFormatError(
        fmt::format("{}: unexpected header '{}', expected '{}'", what, header, expected));
}

// Mean of the defined speeds, window [first, first + k).
std::optional<double> window_speed(const std::vector<FlowInterval>& minutes, std::size_t first,
                                   int k) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = first; i < first + static_cast<std::size_t>(k); ++i) {
    if (minutes[i].mean_speed) {
      sum += *minutes[i].mean_speed;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

void require_contiguous(const std::vector<FlowInterval>& minutes) {
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    if (minutes[i].width != 1) throw std::invalid_argument("expected one-minute intervals");
    if (i > 0 && minutes[i].start != minutes[i - 1].start + std::chrono::minutes{1})
      throw std::invalid_argument(
          fmt::format("minute sequence is not contiguous at {}", format_minute(minutes[i].start)));
  }
}

}  // namespace

IntensityHistogram build_histogram(std::span<const int> intensities, int bin_width) {
  if (bin_width < 1) throw std::invalid_argument("histogram bin width must be >= 1");
  IntensityHistogram h;
  h.bin_width = bin_width;
  for (int v : intensities) h.add(v);
  return h;
}

ParsedEvents parse_events(std::istream& in) {
  check_header(in, "timestamp,speed_kmh,length_m,valid", "events csv");

  ParsedEvents out;
  std::set<std::tuple<Millis, double, double, bool>> seen;
  std::string line;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++out.rows;
    auto reject = [&](std::string msg) {
      ++out.rejected_malformed;
      out.diagnostics.push_back({line_no, std::move(msg)});
    };

    auto fields = split_commas(line);
    if (fields.size() != 4) {
      reject(fmt::format("expected 4 fields, got {}", fields.size()));
      continue;
    }
    auto ts = parse_timestamp(trim(fields[0]));
    if (!ts) {
      reject(fmt::format("bad timestamp '{}'", trim(fields[0])));
      continue;
    }
    auto speed = parse_double(fields[1]);
    auto length = parse_double(fields[2]);
    auto valid = parse_flag(fields[3]);
    if (!speed || !length || !valid) {
      reject("unparseable speed, length or validity field");
      continue;
    }
    if (*speed < 0.0 || *length < 0.0) {
      reject(*speed < 0.0 ? "negative speed" : "negative length");
      continue;
    }
    if (!*valid) {
      ++out.dropped_invalid;
      continue;
    }
    if (*speed > kMaxPlausibleSpeed || *length > kMaxPlausibleLength) {
      ++out.dropped_implausible;
      continue;
    }
    if (!seen.emplace(*ts, *speed, *length, *valid).second) {
      ++out.dropped_duplicate;
      continue;
    }
    out.events.push_back({*ts, *speed, *length, *valid});
  }

  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const VehicleEvent& a, const VehicleEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return out;
}

void DetectionConfig::validate() const {
  if (!(breakdown_speed > 0.0)) throw std::invalid_argument("breakdown speed must be positive");
  if (discard_speed < breakdown_speed)
    throw std::invalid_argument("discard speed must be >= breakdown speed");
  if (!(recovery_speed > discard_speed))
    throw std::invalid_argument("recovery speed must exceed discard speed");
  if (breakdown_window < 1 || recovery_window < 1)
    throw std::invalid_argument("detection windows must be at least one minute");
  if (!(pce_length_threshold > 0.0)) throw std::invalid_argument("PCE length threshold must be positive");
}

std::vector<FlowInterval> aggregate_minutes(const std::vector<VehicleEvent>& events,
                                            const DetectionConfig& config) {
  std::vector<FlowInterval> minutes;
  if (events.empty()) return minutes;
  if (!std::is_sorted(events.begin(), events.end(),
                      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; }))
    throw std::invalid_argument("aggregate_minutes: events must be sorted by timestamp");

  const Minute first = floor_minute(events.front().timestamp);
  const Minute last = floor_minute(events.back().timestamp);
  const auto n = static_cast<std::size_t>((last - first).count()) + 1;
  minutes.resize(n);
  std::vector<double> inverse_speed_sum(n, 0.0);
  std::vector<int> moving(n, 0);
  for (std::size_t i = 0; i < n; ++i) minutes[i].start = first + std::chrono::minutes{i};

  for (const auto& e : events) {
    auto i = static_cast<std::size_t>((floor_minute(e.timestamp) - first).count());
    auto& m = minutes[i];
    ++m.vehicle_count;
    m.intensity += e.length_m > config.pce_length_threshold ? 2 : 1;
    if (e.speed_kmh > 0.0) {
      inverse_speed_sum[i] += 1.0 / e.speed_kmh;
      ++moving[i];
    } else {
      ++m.zero_speed_vehicles;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (moving[i] > 0) minutes[i].mean_speed = moving[i] / inverse_speed_sum[i];
  return minutes;
}

std::vector<FlowInterval> rolling_aggregate(const std::vector<FlowInterval>& minutes, int k) {
  if (k < 1) throw std::invalid_argument("rolling_aggregate: window must be >= 1");
  require_contiguous(minutes);
  std::vector<FlowInterval> out;
  const auto width = static_cast<std::size_t>(k);
  if (minutes.size() < width) return out;
  out.reserve(minutes.size() - width + 1);
  for (std::size_t i = 0; i + width <= minutes.size(); ++i) {
    FlowInterval w;
    w.start = minutes[i].start;
    w.width = k;
    for (std::size_t j = i; j < i + width; ++j) {
      w.intensity += minutes[j].intensity;
      w.vehicle_count += minutes[j].vehicle_count;
      w.zero_speed_vehicles += minutes[j].zero_speed_vehicles;
      w.partial = w.partial || minutes[j].empty();
    }
    w.mean_speed = window_speed(minutes, i, k);
    out.push_back(w);
  }
  return out;
}

void write_minutes_csv(std::ostream& out, const std::vector<FlowInterval>& minutes) {
  out << "minute_start,intensity_pce,harmonic_speed_kmh,vehicle_count,empty_flag\n";
  for (const auto& m : minutes) {
    out << format_minute(m.start) << ',' << m.intensity << ',';
    if (m.mean_speed) out << fmt::format("{:.6f}", *m.mean_speed);
    out << ',' << m.vehicle_count << ',' << (m.empty() ? 1 : 0) << '\n';
  }
}

std::vector<FlowInterval> read_minutes_csv(std::istream& in) {
  check_header(in, "minute_start,intensity_pce,harmonic_speed_kmh,vehicle_count,empty_flag",
               "minutes csv");
  std::vector<FlowInterval> out;
  std::string line;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fail = [&](std::string_view what) {
      return CsvFormatError(fmt::format("minutes csv line {}: {}", line_no, what));
    };
    auto f = split_commas(line);
    if (f.size() != 5) throw fail("expected 5 fields");
    FlowInterval m;
    auto start = parse_minute(trim(f[0]));
    auto intensity = parse_integer(f[1]);
    auto count = parse_integer(f[3]);
    auto empty = parse_flag(f[4]);
    if (!start || !intensity || !count || !empty || *intensity < 0 || *count < 0)
      throw fail("bad field");
    m.start = *start;
    m.intensity = static_cast<int>(*intensity);
    m.vehicle_count = static_cast<int>(*count);
    if (!trim(f[2]).empty()) {
      auto v = parse_double(f[2]);
      if (!v || *v <= 0.0) throw fail("bad speed");
      m.mean_speed = *v;
    }
    if (*empty != m.empty()) throw fail("empty_flag disagrees with vehicle_count");
    out.push_back(m);
  }
  return out;
}

DetectionResult detect_breakdowns(const std::vector<FlowInterval>& minutes,
                                  const DetectionConfig& config) {
  config.validate();
  require_contiguous(minutes);

  DetectionResult r;
  const std::size_t n = minutes.size();
  r.classes.assign(n, MinuteClass::warmup);
  const auto bw = static_cast<std::size_t>(config.breakdown_window);
  const auto rw = static_cast<std::size_t>(config.recovery_window);
  if (n < bw) return r;

  // short_windows[t - bw + 1] is the breakdown-window interval ending at minute t.
  const auto short_windows = rolling_aggregate(minutes, config.breakdown_window);
  const auto long_windows = rolling_aggregate(minutes, config.recovery_window);
  auto trailing = [&](std::size_t t) -> const FlowInterval& { return short_windows[t + 1 - bw]; };
  auto below = [](const std::optional<double>& v, double limit) { return v && *v < limit; };

  bool congested = false;
  // Last minute classified congested; breakdown-flow windows must start after it.
  std::optional<std::size_t> last_congested;

  for (std::size_t t = bw - 1; t < n; ++t) {
    if (congested) {
      r.classes[t] = MinuteClass::congested;
      last_congested = t;
      if (t + 1 >= rw) {
        const auto& w = long_windows[t + 1 - rw];
        if (!w.partial && w.mean_speed && *w.mean_speed > config.recovery_speed) congested = false;
      }
      continue;
    }

    const auto& w = trailing(t);
    if (w.partial || !w.mean_speed) {
      r.classes[t] = MinuteClass::discarded;
      ++r.gap_windows;
      continue;
    }

    if (*w.mean_speed < config.breakdown_speed) {
      std::size_t onset = t + 1 - bw;
      while (!below(minutes[onset].mean_speed, config.breakdown_speed)) ++onset;

      bool shifted = onset >= 1 && below(minutes[onset - 1].mean_speed, config.discard_speed);
      // The breakdown-flow record is the trailing window ending here.
      const std::ptrdiff_t flow_end =
          static_cast<std::ptrdiff_t>(onset) - (shifted ? 2 : 1);
      const std::ptrdiff_t flow_start = flow_end - static_cast<std::ptrdiff_t>(bw) + 1;

      bool usable = flow_start >= 0;
      if (usable && last_congested)
        usable = flow_start > static_cast<std::ptrdiff_t>(*last_congested);
      if (usable) usable = !trailing(static_cast<std::size_t>(flow_end)).partial;

      if (usable) {
        const auto end = static_cast<std::size_t>(flow_end);
        r.classes[end] = MinuteClass::breakdown;
        r.breakdowns.push_back({minutes[onset].start, trailing(end).intensity, shifted});
      } else {
        ++r.skipped_breakdowns;
        r.warnings.push_back(fmt::format(
            "breakdown at {} skipped: no complete free-flow window precedes it",
            format_minute(minutes[onset].start)));
      }
      const std::size_t from = std::max<std::ptrdiff_t>(flow_end + 1, bw - 1);
      for (std::size_t k = from; k <= t; ++k) r.classes[k] = MinuteClass::congested;
      last_congested = t;
      congested = true;
      continue;
    }

    r.classes[t] = below(minutes[t].mean_speed, config.discard_speed) ? MinuteClass::discarded
                                                                      : MinuteClass::censored;
  }

  if (congested) {
    r.ended_congested = true;
    r.warnings.push_back("dataset ends during congestion; congested tail discarded");
  }

  for (std::size_t t = bw - 1; t < n; ++t) {
    ++r.eligible_minutes;
    switch (r.classes[t]) {
      case MinuteClass::censored:
        r.histogram.add(trailing(t).intensity);
        break;
      case MinuteClass::discarded:
        ++r.discarded_minutes;
        break;
      case MinuteClass::congested:
        ++r.congested_minutes;
        break;
      default:
        break;
    }
  }
  for (const auto& w : r.warnings) spdlog::warn("detect: {}", w);
  return r;
}

}  // namespace stocap
