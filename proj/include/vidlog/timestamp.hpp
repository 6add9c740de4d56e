#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "vidlog/rational.hpp"

namespace vidlog {

// Event timestamps are kept at millisecond resolution, the precision every
// log format carries, so serialisation round-trips are exact.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// Nearest millisecond to a UTC epoch-seconds value.
Timestamp timestamp_from_seconds(double epoch_seconds);
double to_epoch_seconds(Timestamp t);

// Maps frame indices to wall-clock time: t(f) = base_time + f / fps.
class FrameClock {
public:
    // Throws ConfigError for fps <= 0 or fps > 1000; above 1000 fps two
    // consecutive frames can share a millisecond.
    FrameClock(Rational fps, double base_time);

    Timestamp at(std::size_t frame) const;
    const Rational& fps() const noexcept { return fps_; }

private:
    Rational fps_;
    Timestamp base_;
};

// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_iso8601(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MM:SS", optional fraction (rounded to ms), and a
// "Z" or "+HH:MM"/"-HH:MM" suffix; no suffix means UTC. Throws InputError.
Timestamp parse_iso8601(const std::string& text);

}  // namespace vidlog
