#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqrule/bigint.hpp"

namespace seqrule {

/// A linear recurrence f(n) = a1*f(n-1) + ... + ak*f(n-k) with constant
/// integer coefficients. Initial conditions are either the default
/// (f(0) = 1, f(h) = 0 for h < 0, recurrence applied from n = 1 on) or an
/// explicit list h1..h(k-1) for f(1)..f(k-1); f(0) = 1 in both cases.
class Recurrence {
public:
    /// Throws Error{InvalidArgument} if coeffs is empty, the trailing
    /// coefficient is zero (the order must be genuine), or an explicit init
    /// list does not have exactly k-1 entries.
    explicit Recurrence(std::vector<BigInt> coeffs,
                        std::optional<std::vector<BigInt>> inits = std::nullopt);

    int order() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    const BigInt& lead() const { return coeffs_.front(); }

    bool has_default_inits() const { return !inits_.has_value(); }
    /// Empty for default inits; otherwise h1..h(k-1).
    const std::vector<BigInt>& explicit_inits() const;

    /// The recurrence with the same coefficients and default inits.
    Recurrence default_core() const { return Recurrence(coeffs_); }

    bool operator==(const Recurrence&) const = default;

private:
    std::vector<BigInt> coeffs_;
    std::optional<std::vector<BigInt>> inits_;
};

/// Numerator/denominator pair of an exact rational generating function.
/// Coefficient vectors are dense, index = power of x; the denominator has
/// constant term 1.
struct RationalGF {
    std::vector<BigInt> numerator;
    std::vector<BigInt> denominator;

    bool operator==(const RationalGF&) const = default;
    std::string to_string() const;
};

/// f(0)..f(n), exact. This is the ground-truth oracle the rule pipeline is
/// checked against.
std::vector<BigInt> eval_sequence(const Recurrence& rec, int n);

/// Denominator 1 - a1*x - ... - ak*x^k; numerator chosen so the series
/// expansion reproduces eval_sequence (identically 1 for default inits).
RationalGF generating_function(const Recurrence& rec);

/// First n+1 power-series coefficients of gf, exact.
std::vector<BigInt> series_of_gf(const RationalGF& gf, int n);

}  // namespace seqrule
