#include "seqrule/recurrence.hpp"

#include <sstream>

#include "seqrule/error.hpp"

namespace seqrule {

Recurrence::Recurrence(std::vector<BigInt> coeffs,
                       std::optional<std::vector<BigInt>> inits)
    : coeffs_(std::move(coeffs)), inits_(std::move(inits)) {
    if (coeffs_.empty()) {
        throw Error(Error::Code::InvalidArgument,
                    "recurrence needs at least one coefficient");
    }
    if (coeffs_.back() == 0) {
        throw Error(Error::Code::InvalidArgument,
                    "trailing coefficient is zero; drop it so the order is genuine");
    }
    if (inits_ && static_cast<int>(inits_->size()) != order() - 1) {
        std::ostringstream msg;
        msg << "explicit initial conditions need exactly " << order() - 1
            << " entries (f(0) = 1 is fixed), got " << inits_->size();
        throw Error(Error::Code::InvalidArgument, msg.str());
    }
}

const std::vector<BigInt>& Recurrence::explicit_inits() const {
    static const std::vector<BigInt> kEmpty;
    return inits_ ? *inits_ : kEmpty;
}

std::vector<BigInt> eval_sequence(const Recurrence& rec, int n) {
    if (n < 0) {
        throw Error(Error::Code::InvalidArgument, "sequence length must be >= 0");
    }
    const int k = rec.order();
    std::vector<BigInt> f;
    f.reserve(n + 1);
    f.push_back(1);
    for (int m = 1; m <= n; ++m) {
        if (!rec.has_default_inits() && m < k) {
            f.push_back(rec.explicit_inits()[m - 1]);
            continue;
        }
        BigInt value = 0;
        for (int i = 1; i <= k && i <= m; ++i) {
            value += rec.coeffs()[i - 1] * f[m - i];
        }
        f.push_back(value);
    }
    return f;
}

RationalGF generating_function(const Recurrence& rec) {
    const int k = rec.order();
    RationalGF gf;
    gf.denominator.assign(k + 1, 0);
    gf.denominator[0] = 1;
    for (int i = 1; i <= k; ++i) {
        gf.denominator[i] = -rec.coeffs()[i - 1];
    }
    if (rec.has_default_inits()) {
        gf.numerator = {1};
        return gf;
    }
    // Numerator = (series truncated to degree k-1) * denominator, which has
    // degree <= k-1 because the sequence obeys the recurrence from n = k on.
    const std::vector<BigInt> prefix = eval_sequence(rec, k - 1);
    gf.numerator.assign(k, 0);
    for (int m = 0; m < k; ++m) {
        BigInt c = prefix[m];
        for (int i = 1; i <= m; ++i) {
            c -= rec.coeffs()[i - 1] * prefix[m - i];
        }
        gf.numerator[m] = c;
    }
    while (gf.numerator.size() > 1 && gf.numerator.back() == 0) {
        gf.numerator.pop_back();
    }
    return gf;
}

std::vector<BigInt> series_of_gf(const RationalGF& gf, int n) {
    if (n < 0) {
        throw Error(Error::Code::InvalidArgument, "series length must be >= 0");
    }
    if (gf.denominator.empty() || gf.denominator[0] != 1) {
        throw Error(Error::Code::InvalidArgument,
                    "denominator must have constant term 1");
    }
    std::vector<BigInt> f;
    f.reserve(n + 1);
    for (int m = 0; m <= n; ++m) {
        BigInt value = m < static_cast<int>(gf.numerator.size()) ? gf.numerator[m]
                                                                 : BigInt(0);
        const int deg = static_cast<int>(gf.denominator.size()) - 1;
        for (int i = 1; i <= deg && i <= m; ++i) {
            value -= gf.denominator[i] * f[m - i];
        }
        f.push_back(value);
    }
    return f;
}

namespace {

void append_poly(std::ostream& out, const std::vector<BigInt>& poly) {
    bool first = true;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const BigInt& c = poly[i];
        if (c == 0 && poly.size() > 1) continue;
        BigInt mag = abs(c);
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (i == 0 || mag != 1) out << mag.str();
        if (i >= 1) out << "x";
        if (i >= 2) out << "^" << i;
    }
    if (first) out << "0";
}

}  // namespace

std::string RationalGF::to_string() const {
    std::ostringstream out;
    const bool plain_num = numerator.size() <= 1;
    if (plain_num) {
        append_poly(out, numerator);
    } else {
        out << "(";
        append_poly(out, numerator);
        out << ")";
    }
    out << " / (";
    append_poly(out, denominator);
    out << ")";
    return out.str();
}

}  // namespace seqrule
