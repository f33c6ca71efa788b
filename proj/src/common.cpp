#include "wps/common.hpp"

#include <algorithm>
#include <cctype>

namespace wps {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

} // namespace

bool natural_less(std::string_view a, std::string_view b) {
    if (all_digits(a) && all_digits(b)) {
        std::string_view ta = a.substr(std::min(a.find_first_not_of('0'), a.size() - 1));
        std::string_view tb = b.substr(std::min(b.find_first_not_of('0'), b.size() - 1));
        if (ta.size() != tb.size()) return ta.size() < tb.size();
        if (ta != tb) return ta < tb;
        return a < b; // equal values, e.g. "07" vs "7": keep a total order
    }
    return a < b;
}

} // namespace wps
