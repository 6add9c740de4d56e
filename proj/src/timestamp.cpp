#include "vidlog/timestamp.hpp"

#include <cmath>
#include <cstdio>

#include "vidlog/errors.hpp"

namespace vidlog {

using std::chrono::milliseconds;

Timestamp timestamp_from_seconds(double epoch_seconds) {
    if (!std::isfinite(epoch_seconds)) throw InputError("timestamp is not finite");
    return Timestamp{milliseconds{std::llround(epoch_seconds * 1000.0)}};
}

double to_epoch_seconds(Timestamp t) {
    return static_cast<double>(t.time_since_epoch().count()) / 1000.0;
}

FrameClock::FrameClock(Rational fps, double base_time) : fps_(fps), base_(timestamp_from_seconds(base_time)) {
    if (fps_.num() <= 0) throw ConfigError("fps must be positive");
    if (fps_ > Rational(1000)) throw ConfigError("fps above 1000 cannot be represented at millisecond resolution");
}

Timestamp FrameClock::at(std::size_t frame) const {
    // round(frame * 1000 * den / num), exact in 128-bit integers
    const __int128 numer = static_cast<__int128>(frame) * 1000 * fps_.den();
    const __int128 denom = fps_.num();
    const auto offset = static_cast<long long>((2 * numer + denom) / (2 * denom));
    return base_ + milliseconds{offset};
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const auto ms = (t - day).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                  static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
    return buf;
}

Timestamp parse_iso8601(const std::string& text) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, used = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s, &used) != 6 || used != 19)
        throw InputError("not an ISO-8601 timestamp: '" + text + "'");
    std::size_t pos = 19;

    long long frac_ms = 0;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        const std::size_t begin = pos;
        long long scaled = 0;
        int digits = 0;
        bool round_up = false;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 3) {
                scaled = scaled * 10 + (text[pos] - '0');
                ++digits;
            } else if (digits == 3) {
                round_up = text[pos] >= '5';
                ++digits;
            }
            ++pos;
        }
        if (pos == begin) throw InputError("empty fraction in '" + text + "'");
        for (int i = std::min(digits, 3); i < 3; ++i) scaled *= 10;
        frac_ms = scaled + (round_up ? 1 : 0);
    }

    long long offset_minutes = 0;
    if (pos < text.size()) {
        if (text[pos] == 'Z' && pos + 1 == text.size()) {
            pos = text.size();
        } else if ((text[pos] == '+' || text[pos] == '-') && text.size() - pos == 6 && text[pos + 3] == ':') {
            int oh = 0, om = 0;
            if (std::sscanf(text.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2)
                throw InputError("bad UTC offset in '" + text + "'");
            offset_minutes = (text[pos] == '-' ? -1 : 1) * (oh * 60 + om);
            pos = text.size();
        } else {
            throw InputError("trailing characters in timestamp '" + text + "'");
        }
    }

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw InputError("invalid date in '" + text + "'");
    const sys_days date{ymd};
    return Timestamp{date.time_since_epoch()} + hours{h} + minutes{mi} + seconds{s} + milliseconds{frac_ms} -
           minutes{offset_minutes};
}

}  // namespace vidlog
