#include "votekit/rational.hpp"

#include <algorithm>
#include <cctype>

namespace votekit {

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

} // namespace

Rational parse_rational(const std::string& text) {
    if (auto slash = text.find('/'); slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw InputError("bad rational '" + text + "'");
        BigInt d(den);
        if (d == 0)
            throw InputError("bad rational '" + text + "': zero denominator");
        return Rational(BigInt(num), d);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        const std::string whole = text.substr(0, dot);
        const std::string frac = text.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac))
            throw InputError("bad rational '" + text + "'");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        return Rational(BigInt(whole) * scale + BigInt(frac), scale);
    }
    if (!all_digits(text))
        throw InputError("bad rational '" + text + "'");
    return Rational(BigInt(text));
}

Rational parse_probability(const std::string& text) {
    const Rational r = parse_rational(text);
    if (r < 0 || r > 1)
        throw InputError("probability '" + text + "' is outside [0, 1]");
    return r;
}

} // namespace votekit
