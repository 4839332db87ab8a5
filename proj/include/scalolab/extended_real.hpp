#pragma once

#include <compare>
#include <optional>
#include <string>

namespace scalolab {

// Real number or +infinity. Infinity is a distinct state, not a float sentinel.
class ExtendedReal {
public:
    static ExtendedReal finite(double v) { return ExtendedReal(v); }
    static ExtendedReal infinity() { return ExtendedReal(); }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }
    double value() const;  // throws if infinite

    std::string to_string() const;

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        return a.value_ == b.value_;
    }
    friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.is_infinite() && b.is_infinite()) return std::partial_ordering::equivalent;
        if (a.is_infinite()) return std::partial_ordering::greater;
        if (b.is_infinite()) return std::partial_ordering::less;
        return *a.value_ <=> *b.value_;
    }

    static ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) { return (b < a) ? b : a; }

private:
    ExtendedReal() = default;
    explicit ExtendedReal(double v) : value_(v) {}
    std::optional<double> value_;
};

}  // namespace scalolab
