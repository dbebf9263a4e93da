#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace cx::domain {

// Fixed-point currency amount with six fractional digits (micro-dollars).
// Token prices are sub-cent; accumulating them in floating point would
// drift across the budget-threshold comparisons, so all ledger math stays
// in integer micros.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_micros(std::int64_t micros) {
        Money m;
        m.micros_ = micros;
        return m;
    }
    // Nearest-micro rounding; config files and JSON carry dollar doubles.
    static Money from_dollars(double dollars);
    // Parses "1.54", "-0.000015", "3". Throws std::invalid_argument.
    static Money parse(const std::string& text);

    constexpr std::int64_t micros() const { return micros_; }
    double dollars() const;

    // Decimal string without trailing zero noise: "1.54", "0.3", "0".
    std::string str() const;
    // Fixed two-decimal rendering, half-up: "1.54", "0.30".
    std::string str2() const;

    constexpr Money operator+(Money o) const { return from_micros(micros_ + o.micros_); }
    constexpr Money operator-(Money o) const { return from_micros(micros_ - o.micros_); }
    Money& operator+=(Money o) {
        micros_ += o.micros_;
        return *this;
    }
    constexpr Money operator*(std::int64_t k) const { return from_micros(micros_ * k); }
    auto operator<=>(const Money&) const = default;

private:
    std::int64_t micros_ = 0;
};

// tokens priced in dollars-per-million-tokens, result rounded half-up to
// the nearest micro. Exact integer arithmetic (128-bit intermediate).
Money token_cost(std::int64_t tokens, Money price_per_mtok);

}  // namespace cx::domain
