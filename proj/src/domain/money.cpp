#include "domain/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace cx::domain {

Money Money::from_dollars(double dollars) {
    return from_micros(static_cast<std::int64_t>(std::llround(dollars * 1e6)));
}

double Money::dollars() const {
    return static_cast<double>(micros_) / 1e6;
}

Money Money::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty money literal");
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    std::int64_t whole = 0;
    bool any_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        whole = whole * 10 + (text[i] - '0');
        any_digit = true;
    }
    std::int64_t frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        int digits = 0;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            if (digits < 6) {
                frac = frac * 10 + (text[i] - '0');
                ++digits;
            }
            any_digit = true;
        }
        while (digits < 6) {
            frac *= 10;
            ++digits;
        }
    }
    if (!any_digit || i != text.size())
        throw std::invalid_argument("bad money literal: " + text);
    std::int64_t micros = whole * 1'000'000 + frac;
    return from_micros(neg ? -micros : micros);
}

std::string Money::str() const {
    std::int64_t m = micros_;
    std::string sign = m < 0 ? "-" : "";
    if (m < 0) m = -m;
    std::string out = sign + std::to_string(m / 1'000'000);
    std::int64_t frac = m % 1'000'000;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(frac));
        std::string f(buf);
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

std::string Money::str2() const {
    std::int64_t m = micros_;
    std::string sign = m < 0 ? "-" : "";
    if (m < 0) m = -m;
    std::int64_t cents = (m + 5'000) / 10'000;  // half-up to 1/100
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", sign.c_str(),
                  static_cast<long long>(cents / 100), static_cast<long long>(cents % 100));
    return buf;
}

Money token_cost(std::int64_t tokens, Money price_per_mtok) {
    __int128 num = static_cast<__int128>(tokens) * price_per_mtok.micros();
    bool neg = num < 0;
    if (neg) num = -num;
    __int128 micros = (num + 500'000) / 1'000'000;
    auto v = static_cast<std::int64_t>(micros);
    return Money::from_micros(neg ? -v : v);
}

}  // namespace cx::domain
