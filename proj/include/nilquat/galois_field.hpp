#pragma once

// Finite fields GF(p^r) as polynomials over GF(p) modulo a monic irreducible.
//
// Elements are dense indices in [0, q): the index of c_0 + c_1 t + ... +
// c_{r-1} t^{r-1} is c_0 + c_1 p + ... + c_{r-1} p^{r-1}.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilquat {

namespace detail {

inline bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    while (exp-- > 0) out *= base;
    return out;
}

// Dense polynomial over GF(p), low degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
    std::int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t t = r0 / r1;
        std::int64_t r2 = r0 - t * r1;
        r0 = r1;
        r1 = r2;
        std::int64_t s2 = s0 - t * s1;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("no inverse modulo " + std::to_string(p));
    std::int64_t out = s0 % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(out < 0 ? out + p : out);
}

// Remainder of f modulo g over GF(p); g must be nonzero.
inline Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    const std::uint32_t lead_inv = inv_mod_prime(g.back(), p);
    while (f.size() >= g.size()) {
        const std::uint64_t c = static_cast<std::uint64_t>(f.back()) * lead_inv % p;
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t i = 0; i <= dg; ++i) {
            const std::uint64_t sub = c * g[i] % p;
            f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
        }
        trim(f);
    }
    return f;
}

// Monic polynomial of degree d whose lower coefficients are the base-p
// digits of `code`.
inline Poly monic_from_code(std::uint64_t code, unsigned degree, std::uint32_t p) {
    Poly f(degree + 1, 0);
    for (unsigned i = 0; i < degree; ++i) {
        f[i] = static_cast<std::uint32_t>(code % p);
        code /= p;
    }
    f[degree] = 1;
    return f;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    Poly g = f;
    trim(g);
    if (g.size() < 2) return false;
    const unsigned degree = static_cast<unsigned>(g.size() - 1);
    for (unsigned d = 1; 2 * d <= degree; ++d) {
        const std::uint64_t count = ipow(p, d);
        for (std::uint64_t code = 0; code < count; ++code) {
            if (poly_mod(g, monic_from_code(code, d, p), p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Smallest monic irreducible polynomial of the given degree over GF(p),
/// ordered by the base-p code of its non-leading coefficients (c_0 least
/// significant).
inline std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, unsigned degree) {
    if (degree == 1) return {0, 1};
    const std::uint64_t count = detail::ipow(p, degree);
    for (std::uint64_t code = 0; code < count; ++code) {
        auto f = detail::monic_from_code(code, degree, p);
        if (detail::is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

class GaloisField {
public:
    GaloisField(std::uint32_t p, unsigned r, std::vector<std::uint32_t> modulus)
        : p_(p), r_(r), modulus_(std::move(modulus)) {
        if (!detail::is_prime(p)) throw std::invalid_argument("characteristic must be prime");
        if (r == 0) throw std::invalid_argument("extension degree must be >= 1");
        detail::trim(modulus_);
        if (modulus_.size() != r + 1 || modulus_.back() != 1)
            throw std::invalid_argument("modulus polynomial must be monic of degree r");
        for (auto c : modulus_)
            if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
        if (!detail::is_irreducible(modulus_, p))
            throw std::invalid_argument("modulus polynomial is reducible");
        q_ = static_cast<std::uint32_t>(detail::ipow(p, r));
        build_tables();
    }

    GaloisField(std::uint32_t p, unsigned r) : GaloisField(p, r, smallest_irreducible(p, r)) {}

    std::uint32_t characteristic() const { return p_; }
    unsigned degree() const { return r_; }
    std::uint32_t order() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        if (r_ == 1) return (a + b) % p_;
        return tables_->add[a * q_ + b];
    }
    std::uint32_t neg(std::uint32_t a) const {
        if (r_ == 1) return a == 0 ? 0 : p_ - a;
        return tables_->neg[a];
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (r_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
        return tables_->mul[a * q_ + b];
    }
    std::uint32_t inverse(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("non-unit");
        if (r_ == 1) return detail::inv_mod_prime(a, p_);
        return tables_->inv[a];
    }
    /// Image of the integer k under Z -> GF(p) -> GF(q).
    std::uint32_t from_int(std::int64_t k) const {
        std::int64_t m = k % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(m < 0 ? m + p_ : m);
    }

private:
    struct Tables {
        std::vector<std::uint32_t> add, mul, neg, inv;
    };

    std::vector<std::uint32_t> coeffs(std::uint32_t a) const {
        std::vector<std::uint32_t> c(r_);
        for (unsigned i = 0; i < r_; ++i) {
            c[i] = a % p_;
            a /= p_;
        }
        return c;
    }
    std::uint32_t encode(const std::vector<std::uint32_t>& c) const {
        std::uint32_t out = 0;
        for (unsigned i = r_; i-- > 0;) out = out * p_ + (i < c.size() ? c[i] : 0);
        return out;
    }
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
        auto ca = coeffs(a), cb = coeffs(b);
        detail::Poly prod(2 * r_ - 1, 0);
        for (unsigned i = 0; i < r_; ++i)
            for (unsigned j = 0; j < r_; ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % p_);
        return encode(detail::poly_mod(prod, modulus_, p_));
    }

    // Extension fields used here are small (q <= a few thousand); full
    // tables keep the enumeration kernels branch-free.
    void build_tables() {
        if (r_ == 1) return;
        auto t = std::make_shared<Tables>();
        const std::size_t qq = static_cast<std::size_t>(q_) * q_;
        t->add.resize(qq);
        t->mul.resize(qq);
        t->neg.resize(q_);
        t->inv.assign(q_, 0);
        for (std::uint32_t a = 0; a < q_; ++a) {
            auto ca = coeffs(a);
            std::vector<std::uint32_t> cn(r_);
            for (unsigned i = 0; i < r_; ++i) cn[i] = ca[i] == 0 ? 0 : p_ - ca[i];
            t->neg[a] = encode(cn);
            for (std::uint32_t b = 0; b < q_; ++b) {
                auto cb = coeffs(b);
                std::vector<std::uint32_t> cs(r_);
                for (unsigned i = 0; i < r_; ++i) cs[i] = (ca[i] + cb[i]) % p_;
                t->add[a * q_ + b] = encode(cs);
                t->mul[a * q_ + b] = slow_mul(a, b);
            }
        }
        for (std::uint32_t a = 1; a < q_; ++a)
            for (std::uint32_t b = 1; b < q_; ++b)
                if (t->mul[a * q_ + b] == 1) {
                    t->inv[a] = b;
                    break;
                }
        tables_ = std::move(t);
    }

    std::uint32_t p_;
    unsigned r_;
    std::uint32_t q_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::shared_ptr<const Tables> tables_;
};

}  // namespace nilquat
