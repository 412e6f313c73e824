#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N), represented on the power
// basis 1, z, ..., z^(phi(N)-1) modulo the N-th cyclotomic polynomial. Every
// value is kept fully reduced, so the zero test is exact and equality is
// structural. Arithmetic never mixes field orders implicitly: callers embed
// into a common order first, and any mismatch is a hard error.
//
// No floating point is used anywhere except numeric_eval(), a read-only
// helper for diagram tracking and path planning.

#include <milnor/rational.hpp>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace milnor {

namespace detail {

using Poly = std::vector<Rat>;  // coefficient list, index = power, no trailing zeros

inline void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    poly_trim(out);
    return out;
}

// Remainder and quotient of p by a monic divisor.
inline void poly_divmod(const Poly& p, const Poly& monic, Poly& quot, Poly& rem) {
    rem = p;
    poly_trim(rem);
    quot.assign(rem.size() > monic.size() ? rem.size() - monic.size() + 1 : 1, Rat(0));
    while (rem.size() >= monic.size() && !rem.empty()) {
        std::size_t shift = rem.size() - monic.size();
        Rat factor = rem.back();
        quot[shift] += factor;
        for (std::size_t i = 0; i < monic.size(); ++i)
            rem[shift + i] -= factor * monic[i];
        poly_trim(rem);
    }
    poly_trim(quot);
}

// N-th cyclotomic polynomial via Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d.
inline const Poly& cyclotomic_poly(std::uint64_t n) {
    static std::map<std::uint64_t, Poly> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Compute iteratively so recursion depth is not a concern.
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (n % k != 0 || cache.count(k)) continue;
        Poly xk_minus_1(k + 1, Rat(0));
        xk_minus_1[0] = Rat(-1);
        xk_minus_1[k] = Rat(1);
        Poly denom{Rat(1)};
        for (std::uint64_t d = 1; d < k; ++d)
            if (k % d == 0) denom = poly_mul(denom, cache.at(d));
        Poly quot, rem;
        poly_divmod(xk_minus_1, denom, quot, rem);
        if (!rem.empty())
            throw std::logic_error("cyclotomic polynomial division left a remainder");
        cache.emplace(k, std::move(quot));
    }
    return cache.at(n);
}

}  // namespace detail

class CycloNum {
public:
    CycloNum() : order_(1), coeffs_(1, Rat(0)) {}

    // Rational constant in Q(zeta_order).
    explicit CycloNum(const Rat& value, std::uint64_t order = 1)
        : order_(check_order(order)), coeffs_(euler_phi(order), Rat(0)) {
        coeffs_[0] = value;
    }

    // Value from raw power-basis coefficients (length phi(order)).
    CycloNum(std::uint64_t order, std::vector<Rat> coeffs)
        : order_(check_order(order)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != euler_phi(order_))
            throw std::invalid_argument("coefficient list length must be phi(order)");
    }

    static CycloNum zero(std::uint64_t order) { return CycloNum(Rat(0), order); }
    static CycloNum one(std::uint64_t order) { return CycloNum(Rat(1), order); }

    // zeta_order^power, reduced to the power basis.
    static CycloNum root_power(std::uint64_t order, std::int64_t power) {
        check_order(order);
        std::int64_t n = static_cast<std::int64_t>(order);
        std::int64_t k = ((power % n) + n) % n;
        detail::Poly p(static_cast<std::size_t>(k) + 1, Rat(0));
        p[static_cast<std::size_t>(k)] = Rat(1);
        return from_poly(order, p);
    }

    static CycloNum root(std::uint64_t order) { return root_power(order, 1); }

    std::uint64_t order() const { return order_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const Rat& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return false;
        return true;
    }

    // The rational value of a constant; error if the value is not constant.
    Rat as_rat() const {
        if (!is_rational())
            throw std::domain_error("value is not rational");
        return coeffs_[0];
    }

    friend bool operator==(const CycloNum& a, const CycloNum& b) {
        return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

    friend CycloNum operator+(const CycloNum& a, const CycloNum& b) {
        require_same_order(a, b, "add");
        CycloNum out = a;
        for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
        return out;
    }

    friend CycloNum operator-(const CycloNum& a, const CycloNum& b) {
        require_same_order(a, b, "subtract");
        CycloNum out = a;
        for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_[i];
        return out;
    }

    friend CycloNum operator-(const CycloNum& a) {
        CycloNum out = a;
        for (Rat& c : out.coeffs_) c = -c;
        return out;
    }

    friend CycloNum operator*(const CycloNum& a, const CycloNum& b) {
        require_same_order(a, b, "multiply");
        return from_poly(a.order_, detail::poly_mul(a.coeffs_, b.coeffs_));
    }

    friend CycloNum operator*(const CycloNum& a, const Rat& s) {
        CycloNum out = a;
        for (Rat& c : out.coeffs_) c *= s;
        return out;
    }
    friend CycloNum operator*(const Rat& s, const CycloNum& a) { return a * s; }

    CycloNum inverse() const {
        if (is_zero()) throw std::domain_error("division by zero");
        // Extended Euclid in Q[x]: u * this + v * Phi = 1 (Phi irreducible).
        detail::Poly r0 = detail::cyclotomic_poly(order_);
        detail::Poly r1 = coeffs_;
        detail::poly_trim(r1);
        detail::Poly u0{}, u1{Rat(1)};  // coefficients of `this`
        while (true) {
            detail::poly_trim(r1);
            if (r1.empty()) throw std::logic_error("unit gcd expected in cyclotomic field");
            if (r1.size() == 1) {
                // gcd is the constant r1[0]; inverse = u1 / r1[0].
                CycloNum out = zero(order_);
                for (std::size_t i = 0; i < u1.size() && i < out.coeffs_.size(); ++i)
                    out.coeffs_[i] = u1[i] / r1[0];
                if (u1.size() > out.coeffs_.size())
                    throw std::logic_error("Bezout coefficient exceeds basis degree");
                return out;
            }
            // r0 = q * r1 + r2 with deg r2 < deg r1; make r1 monic for divmod.
            Rat lead = r1.back();
            detail::Poly monic = r1;
            for (Rat& c : monic) c /= lead;
            detail::Poly quot, rem;
            detail::poly_divmod(r0, monic, quot, rem);
            for (Rat& c : quot) c /= lead;  // true quotient of r0 by r1
            // u2 = u0 - q * u1
            detail::Poly qu = detail::poly_mul(quot, u1);
            detail::Poly u2 = u0;
            if (u2.size() < qu.size()) u2.resize(qu.size(), Rat(0));
            for (std::size_t i = 0; i < qu.size(); ++i) u2[i] -= qu[i];
            detail::poly_trim(u2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            u0 = std::move(u1);
            u1 = std::move(u2);
        }
    }

    friend CycloNum operator/(const CycloNum& a, const CycloNum& b) {
        require_same_order(a, b, "divide");
        return a * b.inverse();
    }

    // Image under zeta_N -> zeta_M^(M/N); requires N | M.
    CycloNum embedded(std::uint64_t target_order) const {
        if (target_order % order_ != 0)
            throw std::invalid_argument("embedding target order must be a multiple of the source order");
        if (target_order == order_) return *this;
        std::uint64_t step = target_order / order_;
        detail::Poly p(coeffs_.size() > 0 ? (coeffs_.size() - 1) * step + 1 : 1, Rat(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) p[i * step] = coeffs_[i];
        return from_poly(target_order, p);
    }

    std::complex<double> numeric_eval() const {
        std::complex<double> acc(0.0, 0.0);
        const double tau = 6.283185307179586476925286766559;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            double angle = tau * static_cast<double>(i) / static_cast<double>(order_);
            acc += rat_to_double(coeffs_[i]) * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        return acc;
    }

    // Polynomial-in-z literal, e.g. "1/2 - 3z^2"; inverse of parse_cyclo.
    std::string to_string() const {
        std::ostringstream out;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rat& c = coeffs_[i];
            if (c == 0) continue;
            Rat mag = rat_abs(c);
            if (first) {
                if (c < 0) out << "-";
                first = false;
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            bool unit = (mag == 1);
            if (i == 0 || !unit) out << rat_to_string(mag);
            if (i > 0) {
                out << "z";
                if (i > 1) out << "^" << i;
            }
        }
        if (first) out << "0";
        return out.str();
    }

private:
    static std::uint64_t check_order(std::uint64_t order) {
        if (order == 0) throw std::invalid_argument("field order must be positive");
        return order;
    }

    static void require_same_order(const CycloNum& a, const CycloNum& b, const char* op) {
        if (a.order_ != b.order_)
            throw std::invalid_argument(std::string("cannot ") + op +
                                        " values of different field orders (" +
                                        std::to_string(a.order_) + " vs " +
                                        std::to_string(b.order_) + "); embed explicitly first");
    }

    static CycloNum from_poly(std::uint64_t order, detail::Poly p) {
        const detail::Poly& phi = detail::cyclotomic_poly(order);
        detail::poly_trim(p);
        if (p.size() >= phi.size()) {
            detail::Poly quot, rem;
            detail::poly_divmod(p, phi, quot, rem);
            p = std::move(rem);
        }
        CycloNum out = zero(order);
        for (std::size_t i = 0; i < p.size(); ++i) out.coeffs_[i] = p[i];
        return out;
    }

    std::uint64_t order_;
    std::vector<Rat> coeffs_;
};

// Exact sum of zeta_m^j over a multiset of residues.
inline CycloNum sum_roots(std::uint64_t m, const std::vector<std::int64_t>& residues) {
    if (m < 2) throw std::invalid_argument("sum_roots requires m >= 2");
    CycloNum acc = CycloNum::zero(m);
    for (std::int64_t j : residues) acc = acc + CycloNum::root_power(m, j);
    return acc;
}

// True iff every sum of `size` distinct powers of a primitive m-th root of
// unity is guaranteed nonzero: gcd(size, m) = 1 and (m prime or size <= 4).
inline bool nonvanishing_guaranteed(std::uint64_t m, std::uint64_t size) {
    if (m < 2) throw std::invalid_argument("nonvanishing_guaranteed requires m >= 2");
    if (gcd_u64(size, m) != 1) return false;
    return is_prime_u64(m) || size <= 4;
}

// Parses a polynomial-in-z literal over Q(zeta_order): terms joined by + or -,
// each term "[coef][*][z[^exp]]" with coef a rational "p/q" or "p".
inline CycloNum parse_cyclo(const std::string& text, std::uint64_t order) {
    CycloNum acc = CycloNum::zero(order);
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip_ws();
    if (i == n) throw std::invalid_argument("empty coefficient literal");
    bool expect_term = true;
    int pending_sign = 1;
    while (i < n) {
        skip_ws();
        if (i == n) break;
        char c = text[i];
        if (c == '+' || c == '-') {
            if (expect_term && c == '-') pending_sign = -pending_sign;
            else if (expect_term && c == '+') { /* unary plus */ }
            else {
                pending_sign = (c == '-') ? -1 : 1;
                expect_term = true;
            }
            ++i;
            continue;
        }
        if (!expect_term)
            throw std::invalid_argument("expected '+' or '-' between terms in '" + text + "'");
        // coefficient part
        Rat coef(1);
        bool saw_coef = false;
        std::size_t start = i;
        while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
        if (i > start) {
            coef = parse_rat(text.substr(start, i - start));
            saw_coef = true;
        }
        skip_ws();
        if (i < n && text[i] == '*') {
            ++i;
            skip_ws();
        }
        std::int64_t exponent = 0;
        if (i < n && text[i] == 'z') {
            ++i;
            exponent = 1;
            if (i < n && text[i] == '^') {
                ++i;
                std::size_t estart = i;
                while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (i == estart) throw std::invalid_argument("missing exponent in '" + text + "'");
                exponent = std::stoll(text.substr(estart, i - estart));
            }
        } else if (!saw_coef) {
            throw std::invalid_argument("malformed term in coefficient literal '" + text + "'");
        }
        if (exponent > 0 && order == 1)
            throw std::invalid_argument("'z' used in a literal but field_order is 1");
        CycloNum term = CycloNum::root_power(order, exponent) * (pending_sign < 0 ? Rat(-coef) : coef);
        acc = acc + term;
        pending_sign = 1;
        expect_term = false;
    }
    if (expect_term) throw std::invalid_argument("dangling sign in coefficient literal '" + text + "'");
    return acc;
}

}  // namespace milnor
