#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ttkit/caveats.hpp"

namespace ttkit {

enum class Axis { Lon, Lat };

std::string_view to_string(Axis axis) noexcept;

/// Fixed-point coordinate: decimal degrees times 1e5, held as a signed 32-bit value.
/// Longitudes live in [-18'000'000, 18'000'000], latitudes in [-9'000'000, 9'000'000].
struct CoordinateE5 {
    static constexpr std::int32_t kLonLimit = 18'000'000;
    static constexpr std::int32_t kLatLimit = 9'000'000;

    std::int32_t value = 0;

    static bool in_range(std::int64_t value, Axis axis) noexcept;

    friend bool operator==(const CoordinateE5&, const CoordinateE5&) = default;
};

struct GeoPoint {
    CoordinateE5 lon;
    CoordinateE5 lat;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Renders a raw E5 value as decimal degrees with exactly five digits after the
/// point, e.g. 472002 -> "4.72002", -1 -> "-0.00001". Pure integer formatting.
std::string render_degrees(std::int32_t value);

/// Range-checks `value` for the given axis and renders it as decimal degrees.
/// Throws RangeError naming the axis and the violated bound.
std::string decode_coordinate(std::int32_t value, Axis axis);

struct HalvedCoordinate {
    std::int32_t value = 0;
    bool precision_loss = false;  // set when the input was odd
};

/// Floor-halves a doubled coordinate. Total over the 32-bit input range;
/// odd inputs lose the half unit and are flagged.
HalvedCoordinate halve_poi_coordinate(std::int32_t raw) noexcept;

enum class TimeUnit { Seconds, Minutes };
enum class TimeBasis { DeviceClock, ServerClock, Unknown };

std::string_view to_string(TimeUnit unit) noexcept;
std::string_view to_string(TimeBasis basis) noexcept;

/// A raw stored time plus everything needed to interpret it.
/// anomaly_flag marks the server-time family observed skewed by one month and
/// one day; it is only meaningful with basis = ServerClock.
struct TimestampSpec {
    std::int64_t raw = 0;
    TimeUnit unit = TimeUnit::Seconds;
    TimeBasis basis = TimeBasis::Unknown;
    bool anomaly_flag = false;

    friend bool operator==(const TimestampSpec&, const TimestampSpec&) = default;
};

struct NormalizedTime {
    std::int64_t seconds = 0;                        // epoch seconds, unit applied
    std::optional<std::int64_t> anomaly_alternative; // candidate minus one month and one day
    CaveatSet caveats;
};

/// Applies the unit conversion and attaches the interpretation caveats.
/// Anomaly-flagged specs yield both candidates; the caller must present both.
/// Throws Error if anomaly_flag is set outside ServerClock basis and
/// RangeError when the minutes conversion overflows 64 bits.
NormalizedTime normalize_timestamp(const TimestampSpec& spec);

struct ClockOffset {
    static constexpr std::int32_t kLimit = 50'400;  // +-14 h, widest civil UTC offset

    std::int32_t seconds = 0;

    friend bool operator==(const ClockOffset&, const ClockOffset&) = default;
};

struct UserTimeOffset {
    ClockOffset offset;
    std::string rendering;  // "+02:00:59"
};

/// Decodes the device clock offset stored in seconds. Throws RangeError when
/// |value| exceeds 14 hours.
UserTimeOffset decode_user_time_offset(std::int64_t value);

/// 86401 is the unreachable 24h+1s sentinel meaning "not set".
struct ArrivalTime {
    std::int64_t raw = 0;                        // value as stored
    std::optional<std::int32_t> seconds_of_day;  // nullopt = unset
    CaveatSet caveats;

    bool unset() const noexcept { return !seconds_of_day.has_value(); }
};

/// Total over all inputs: the sentinel and anything outside [0, 86400] map to
/// unset (the latter with a caveat).
ArrivalTime decode_arrival_time(std::int64_t value) noexcept;

/// Calendar arithmetic for the server-time anomaly: subtracts one month
/// (clamping to the target month's last day) and then one day.
std::int64_t minus_one_month_one_day(std::int64_t epoch_seconds) noexcept;

/// "YYYY-MM-DDTHH:MM:SSZ" under the assumed Unix epoch.
std::string format_utc(std::int64_t epoch_seconds);

}  // namespace ttkit
