#include "xreg/numeric.hpp"

#include <charconv>
#include <system_error>

namespace xreg {

double mean(std::span<const double> v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
    const double m = mean(v);
    CompensatedSum s;
    for (double x : v) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(v.size());
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double span = hi - lo;
    const double last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + span * static_cast<double>(i) / last;
    v.back() = hi;
    return v;
}

}  // namespace xreg
