#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>

namespace pvcsp {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_error : error {
    using error::error;
};

using Rat = mpq_class;

// Parse "p", "-p" or "p/q" into a canonical rational.
auto parse_rat(const std::string & s) -> Rat;
auto rat_to_string(const Rat & q) -> std::string;

// An extended rational: a finite value or +infinity. There is no -infinity.
// Addition saturates at infinity and c * inf = inf for every c >= 0,
// including c = 0.
class ExtValue {
public:
    ExtValue() : _finite(true), _q(0) {}
    ExtValue(Rat q) : _finite(true), _q(std::move(q)) {}
    ExtValue(long n) : _finite(true), _q(n) {}

    static auto infinity() -> ExtValue {
        ExtValue v;
        v._finite = false;
        v._q = 0;
        return v;
    }

    auto is_finite() const -> bool { return _finite; }
    auto is_infinite() const -> bool { return ! _finite; }

    auto rational() const -> const Rat & {
        if (! _finite)
            throw error("rational() on infinite value");
        return _q;
    }

    friend auto operator+(const ExtValue & a, const ExtValue & b) -> ExtValue {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        return ExtValue(a._q + b._q);
    }

    auto operator+=(const ExtValue & b) -> ExtValue & { return *this = *this + b; }

    // Scale by a nonnegative rational; 0 * inf = inf.
    auto scaled(const Rat & c) const -> ExtValue {
        if (sgn(c) < 0)
            throw error("scaling factor must be nonnegative");
        if (is_infinite())
            return infinity();
        return ExtValue(Rat(_q * c));
    }

    auto shifted(const Rat & c) const -> ExtValue {
        if (is_infinite())
            return infinity();
        return ExtValue(Rat(_q + c));
    }

    friend auto operator==(const ExtValue & a, const ExtValue & b) -> bool {
        if (a._finite != b._finite)
            return false;
        return ! a._finite || a._q == b._q;
    }

    friend auto operator!=(const ExtValue & a, const ExtValue & b) -> bool { return ! (a == b); }

    // Total order with every finite value < inf.
    friend auto operator<(const ExtValue & a, const ExtValue & b) -> bool {
        if (a._finite && b._finite)
            return a._q < b._q;
        return a._finite && ! b._finite;
    }

    friend auto operator<=(const ExtValue & a, const ExtValue & b) -> bool { return a < b || a == b; }
    friend auto operator>(const ExtValue & a, const ExtValue & b) -> bool { return b < a; }
    friend auto operator>=(const ExtValue & a, const ExtValue & b) -> bool { return b <= a; }

    auto to_string() const -> std::string { return _finite ? rat_to_string(_q) : "inf"; }

    static auto from_string(const std::string & s) -> ExtValue {
        if (s == "inf")
            return infinity();
        return ExtValue(parse_rat(s));
    }

private:
    bool _finite;
    Rat _q;
};

inline const ExtValue INF = ExtValue::infinity();

}
