#include "ttkit/geo_time.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>

#include "ttkit/errors.hpp"

namespace ttkit {
namespace {

constexpr std::int64_t kSecondsPerDay = 86'400;

// Floor division split of epoch seconds into civil day and second-of-day.
std::pair<std::int64_t, std::int64_t> split_days(std::int64_t epoch_seconds) noexcept {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    std::int64_t sod = epoch_seconds % kSecondsPerDay;
    if (sod < 0) {
        days -= 1;
        sod += kSecondsPerDay;
    }
    return {days, sod};
}

}  // namespace

std::string_view to_string(Axis axis) noexcept {
    return axis == Axis::Lon ? "longitude" : "latitude";
}

bool CoordinateE5::in_range(std::int64_t value, Axis axis) noexcept {
    const std::int64_t limit = axis == Axis::Lon ? kLonLimit : kLatLimit;
    return value >= -limit && value <= limit;
}

std::string render_degrees(std::int32_t value) {
    const std::int64_t v = value;
    const std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%" PRIu64 ".%05" PRIu64,
                  v < 0 ? "-" : "", mag / 100'000, mag % 100'000);
    return buf;
}

std::string decode_coordinate(std::int32_t value, Axis axis) {
    if (!CoordinateE5::in_range(value, axis)) {
        const std::int32_t limit = axis == Axis::Lon ? CoordinateE5::kLonLimit
                                                     : CoordinateE5::kLatLimit;
        throw RangeError(std::string(to_string(axis)) + " " + std::to_string(value) +
                         " outside [-" + std::to_string(limit) + ", " +
                         std::to_string(limit) + "]");
    }
    return render_degrees(value);
}

HalvedCoordinate halve_poi_coordinate(std::int32_t raw) noexcept {
    // Arithmetic shift is floor division by two, total over the full range
    // (plain / truncates toward zero for negatives).
    return {raw >> 1, (raw & 1) != 0};
}

std::string_view to_string(TimeUnit unit) noexcept {
    return unit == TimeUnit::Seconds ? "seconds" : "minutes";
}

std::string_view to_string(TimeBasis basis) noexcept {
    switch (basis) {
        case TimeBasis::DeviceClock: return "device_clock";
        case TimeBasis::ServerClock: return "server_clock";
        default: return "unknown";
    }
}

NormalizedTime normalize_timestamp(const TimestampSpec& spec) {
    if (spec.anomaly_flag && spec.basis != TimeBasis::ServerClock) {
        throw Error("anomaly flag requires server clock basis");
    }
    std::int64_t seconds = spec.raw;
    if (spec.unit == TimeUnit::Minutes) {
        if (spec.raw > INT64_MAX / 60 || spec.raw < INT64_MIN / 60) {
            throw RangeError("minute value " + std::to_string(spec.raw) +
                             " overflows seconds conversion");
        }
        seconds = spec.raw * 60;
    }

    NormalizedTime out;
    out.seconds = seconds;
    add_caveat(out.caveats, caveat::kEpochAssumed);
    if (spec.basis == TimeBasis::DeviceClock) {
        add_caveat(out.caveats, caveat::kDeviceClock);
    } else if (spec.basis == TimeBasis::Unknown) {
        add_caveat(out.caveats, caveat::kUnknownBasis);
    }
    if (spec.anomaly_flag) {
        out.anomaly_alternative = minus_one_month_one_day(seconds);
        add_caveat(out.caveats, caveat::kServerAnomaly);
    }
    return out;
}

UserTimeOffset decode_user_time_offset(std::int64_t value) {
    if (value > ClockOffset::kLimit || value < -ClockOffset::kLimit) {
        throw RangeError("clock offset " + std::to_string(value) +
                         " outside +-14 hours");
    }
    const std::int64_t mag = value < 0 ? -value : value;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%02" PRId64 ":%02" PRId64 ":%02" PRId64,
                  value < 0 ? '-' : '+', mag / 3600, mag / 60 % 60, mag % 60);
    return {ClockOffset{static_cast<std::int32_t>(value)}, buf};
}

ArrivalTime decode_arrival_time(std::int64_t value) noexcept {
    ArrivalTime out;
    out.raw = value;
    if (value == kSecondsPerDay + 1) {
        return out;  // stored "not set" sentinel
    }
    if (value < 0 || value > kSecondsPerDay) {
        add_caveat(out.caveats, caveat::kArrivalOutOfRange);
        return out;
    }
    out.seconds_of_day = static_cast<std::int32_t>(value);
    return out;
}

std::int64_t minus_one_month_one_day(std::int64_t epoch_seconds) noexcept {
    using namespace std::chrono;
    const auto [day_count, sod] = split_days(epoch_seconds);
    year_month_day ymd{sys_days{days{day_count}}};
    ymd -= months{1};
    if (!ymd.ok()) {
        ymd = ymd.year() / ymd.month() / last;  // clamp into the shorter month
    }
    const sys_days shifted = sys_days{ymd} - days{1};
    return static_cast<std::int64_t>(shifted.time_since_epoch().count()) * kSecondsPerDay + sod;
}

std::string format_utc(std::int64_t epoch_seconds) {
    using namespace std::chrono;
    const auto [day_count, sod] = split_days(epoch_seconds);
    const year_month_day ymd{sys_days{days{day_count}}};
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02" PRId64 ":%02" PRId64 ":%02" PRId64 "Z",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), sod / 3600, sod / 60 % 60, sod % 60);
    return buf;
}

}  // namespace ttkit
