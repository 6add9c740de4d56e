#include "vidlog/rational.hpp"

#include <charconv>
#include <cstdint>

namespace vidlog {
namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a rational number: '" + whole + "'");
    return v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
    const std::string_view s(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos)
        return Rational(parse_int(s.substr(0, slash), text), parse_int(s.substr(slash + 1), text));
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto frac = s.substr(dot + 1);
        if (frac.size() > 9) throw std::invalid_argument("too many decimals in '" + text + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const auto int_part = s.substr(0, dot);
        const bool negative = !int_part.empty() && int_part.front() == '-';
        const std::int64_t whole = int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, text);
        const std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
        return Rational(whole * scale + (negative ? -f : f), scale);
    }
    return Rational(parse_int(s, text));
}

}  // namespace vidlog
