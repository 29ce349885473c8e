#ifndef DLOEWNER_SHIFT_SPEC_HPP
#define DLOEWNER_SHIFT_SPEC_HPP

#include <cctype>
#include <charconv>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace dloewner
{

namespace detail
{

inline double parse_real(std::string_view text, std::string_view context)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last  = text.data() + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw PreconditionError("invalid number '" + std::string(text) + "' in " +
                                std::string(context));
    return v;
}

inline std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const std::size_t pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

/// Parses "1.5", "-2e-3", "0.5+2i", "0.5-2i", "3i", "-i" (j works as i).
inline Complex parse_complex(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw PreconditionError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j')
        return {detail::parse_real(s, "complex literal"), 0.0};
    s.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
        {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? std::string() : s.substr(0, split);
    std::string im       = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return {re.empty() ? 0.0 : detail::parse_real(re, "complex literal"),
            detail::parse_real(im, "complex literal")};
}

///
/// Shift lists for the command line:
///   "0.1,1,2+3i,2-3i"     explicit comma-separated list
///   "logspace:a:b:n"      n points log-spaced on [a, b]
///   "linspace:a:b:n"      n points evenly spaced on [a, b]
///   "random:a:b:n"        n points log-uniform on [a, b], drawn with `seed`
///
inline std::vector<Complex> parse_shift_spec(std::string_view spec, std::uint64_t seed = 0)
{
    const auto generator = [&](std::string_view name) {
        return spec.substr(0, name.size() + 1) == std::string(name) + ":";
    };
    if (generator("logspace") || generator("linspace") || generator("random"))
    {
        const auto parts = detail::split(spec, ':');
        if (parts.size() != 4)
            throw PreconditionError("generator must read name:a:b:n, got '" + std::string(spec) + "'");
        const double a = detail::parse_real(parts[1], "shift generator");
        const double b = detail::parse_real(parts[2], "shift generator");
        const double nd = detail::parse_real(parts[3], "shift generator");
        const int n = static_cast<int>(nd);
        if (n < 1 || static_cast<double>(n) != nd)
            throw PreconditionError("generator count must be a positive integer");
        std::vector<Complex> out;
        if (parts[0] == "linspace")
        {
            for (int i = 0; i < n; ++i)
                out.emplace_back(n == 1 ? a : a + (b - a) * i / (n - 1), 0.0);
            return out;
        }
        if (!(a > 0.0) || !(b > 0.0))
            throw PreconditionError("logarithmic generators need positive bounds");
        if (parts[0] == "logspace")
        {
            for (double v : logspace(a, b, n))
                out.emplace_back(v, 0.0);
            return out;
        }
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> expo(std::log(a), std::log(b));
        for (int i = 0; i < n; ++i)
            out.emplace_back(std::exp(expo(rng)), 0.0);
        return out;
    }
    std::vector<Complex> out;
    for (const auto& item : detail::split(spec, ','))
        out.push_back(parse_complex(item));
    return out;
}

} // namespace dloewner

#endif /* DLOEWNER_SHIFT_SPEC_HPP */
