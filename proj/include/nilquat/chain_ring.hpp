#pragma once

// Finite commutative chain rings R with residue field GF(q), q = p^r odd,
// and |R| = q^n. Two families are supported:
//
//   zmod:p^n      Z / p^n Z               (r = 1, uniformizer p)
//   polyq:p^r^n   GF(p^r)[t] / (t^n)      (uniformizer t)
//
// Every element is the little-endian digit vector (d_0, ..., d_{n-1}) of
// GF(q) digits in powers of the uniformizer. Its canonical index is
// d_0 + d_1 q + ... + d_{n-1} q^{n-1}; for zmod this is the usual
// representative in [0, p^n).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilquat/galois_field.hpp"

namespace nilquat {

/// Ring element, stored as its canonical index. Elements carry no ring
/// pointer; the Ring that produced them interprets them.
struct Elem {
    std::uint32_t index = 0;

    friend constexpr bool operator==(Elem, Elem) = default;
    friend constexpr auto operator<=>(Elem, Elem) = default;
};

enum class Family { IntegersModPn, PolyQuotient };

struct RingSpec {
    std::uint32_t p = 3;
    unsigned r = 1;
    unsigned n = 1;
    Family family = Family::IntegersModPn;
    /// GF(p^r) modulus, low degree first. Empty selects the smallest monic
    /// irreducible of degree r.
    std::vector<std::uint32_t> modulus_poly;

    /// Parses "zmod:p^n" or "polyq:p^r^n".
    static RingSpec parse(std::string_view text);
    std::string to_string() const;
};

namespace detail {

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline RingSpec RingSpec::parse(std::string_view text) {
    const std::string grammar = "expected \"zmod:p^n\" or \"polyq:p^r^n\"";
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("bad ring spec '" + std::string(text) + "': " + grammar);
    auto family = text.substr(0, colon);
    auto parts = detail::split(text.substr(colon + 1), '^');
    std::vector<std::uint64_t> nums;
    for (auto part : parts) {
        auto v = detail::parse_uint(part);
        if (!v || *v == 0 || *v > 0xFFFFFFFFu)
            throw std::invalid_argument("bad ring spec '" + std::string(text) + "': " + grammar);
        nums.push_back(*v);
    }
    RingSpec spec;
    if (family == "zmod" && nums.size() == 2) {
        spec.family = Family::IntegersModPn;
        spec.p = static_cast<std::uint32_t>(nums[0]);
        spec.r = 1;
        spec.n = static_cast<unsigned>(nums[1]);
    } else if (family == "polyq" && nums.size() == 3) {
        spec.family = Family::PolyQuotient;
        spec.p = static_cast<std::uint32_t>(nums[0]);
        spec.r = static_cast<unsigned>(nums[1]);
        spec.n = static_cast<unsigned>(nums[2]);
    } else {
        throw std::invalid_argument("bad ring spec '" + std::string(text) + "': " + grammar);
    }
    return spec;
}

inline std::string RingSpec::to_string() const {
    if (family == Family::IntegersModPn) return "zmod:" + std::to_string(p) + "^" + std::to_string(n);
    return "polyq:" + std::to_string(p) + "^" + std::to_string(r) + "^" + std::to_string(n);
}

class Ring {
public:
    /// Largest ring for which full operation tables are built.
    static constexpr std::uint32_t kTableLimit = 1024;

    explicit Ring(RingSpec spec) : spec_(std::move(spec)) {
        if (spec_.p == 2) throw std::invalid_argument("odd order required");
        if (!detail::is_prime(spec_.p)) throw std::invalid_argument("p must be prime");
        if (spec_.r == 0 || spec_.n == 0) throw std::invalid_argument("r and n must be >= 1");
        if (spec_.family == Family::IntegersModPn && spec_.r != 1)
            throw std::invalid_argument("zmod family requires r = 1");
        const double bits = spec_.r * spec_.n * std::log2(static_cast<double>(spec_.p));
        if (bits > 31.0) throw std::invalid_argument("ring too large: q^n must be below 2^31");
        if (spec_.family == Family::IntegersModPn) {
            field_ = std::make_shared<const GaloisField>(spec_.p, 1);
        } else if (spec_.modulus_poly.empty()) {
            field_ = std::make_shared<const GaloisField>(spec_.p, spec_.r);
        } else {
            field_ = std::make_shared<const GaloisField>(spec_.p, spec_.r, spec_.modulus_poly);
        }
        q_ = field_->order();
        size_ = static_cast<std::uint32_t>(detail::ipow(q_, spec_.n));
        build_tables();
    }

    const RingSpec& spec() const { return spec_; }
    std::string name() const { return spec_.to_string(); }
    const GaloisField& residue_field() const { return *field_; }
    std::uint32_t p() const { return spec_.p; }
    std::uint32_t q() const { return q_; }
    unsigned n() const { return spec_.n; }
    std::uint32_t size() const { return size_; }

    Elem zero() const { return {0}; }
    Elem one() const { return {1}; }
    /// Generator of J(R); zero when n = 1.
    Elem uniformizer() const { return spec_.n == 1 ? Elem{0} : Elem{q_}; }

    bool contains(Elem a) const { return a.index < size_; }
    Elem check(Elem a) const {
        if (!contains(a)) throw std::invalid_argument("element does not belong to ring " + name());
        return a;
    }

    /// Image of the integer k under Z -> R.
    Elem from_int(std::int64_t k) const {
        if (spec_.family == Family::IntegersModPn) {
            std::int64_t m = k % static_cast<std::int64_t>(size_);
            return {static_cast<std::uint32_t>(m < 0 ? m + size_ : m)};
        }
        return {field_->from_int(k)};
    }

    Elem add(Elem a, Elem b) const {
        if (tables_) return {tables_->add[a.index * size_ + b.index]};
        return slow_add(a, b);
    }
    Elem mul(Elem a, Elem b) const {
        if (tables_) return {tables_->mul[a.index * size_ + b.index]};
        return slow_mul(a, b);
    }
    Elem neg(Elem a) const {
        if (tables_) return {tables_->neg[a.index]};
        return slow_neg(a);
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem pow(Elem a, unsigned e) const {
        Elem out = one();
        while (e-- > 0) out = mul(out, a);
        return out;
    }

    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> d(spec_.n);
        std::uint32_t v = a.index;
        for (unsigned i = 0; i < spec_.n; ++i) {
            d[i] = v % q_;
            v /= q_;
        }
        return d;
    }
    Elem from_digits(std::span<const std::uint32_t> d) const {
        if (d.size() != spec_.n) throw std::invalid_argument("expected " + std::to_string(spec_.n) + " digits");
        std::uint32_t v = 0;
        for (std::size_t i = d.size(); i-- > 0;) {
            if (d[i] >= q_) throw std::invalid_argument("digit out of range for GF(" + std::to_string(q_) + ")");
            v = v * q_ + d[i];
        }
        return {v};
    }

    /// Largest k with a in J^k; n for zero.
    unsigned valuation(Elem a) const {
        if (tables_) return tables_->val[a.index];
        if (a.index == 0) return spec_.n;
        unsigned k = 0;
        for (std::uint32_t v = a.index; v % q_ == 0; v /= q_) ++k;
        return k;
    }
    bool in_radical(Elem a) const { return a.index % q_ == 0; }
    bool is_unit(Elem a) const { return a.index % q_ != 0; }

    Elem inverse(Elem a) const {
        if (!is_unit(a)) throw std::domain_error("non-unit");
        if (tables_) return {tables_->inv[a.index]};
        return newton_inverse(a);
    }

    std::uint32_t residue(Elem a) const { return a.index % q_; }
    Elem lift(std::uint32_t f) const {
        if (f >= q_) throw std::invalid_argument("residue out of range");
        return {f};
    }

    std::vector<Elem> elements() const {
        std::vector<Elem> out(size_);
        for (std::uint32_t i = 0; i < size_; ++i) out[i] = {i};
        return out;
    }
    /// J^k in canonical order: exactly the elements whose first k digits vanish.
    std::vector<Elem> ideal(unsigned k) const {
        if (k > spec_.n) throw std::out_of_range("ideal power out of range");
        const std::uint32_t step = static_cast<std::uint32_t>(detail::ipow(q_, k));
        std::vector<Elem> out;
        out.reserve(size_ / step);
        for (std::uint64_t v = 0; v < size_; v += step) out.push_back({static_cast<std::uint32_t>(v)});
        return out;
    }

    /// (a, b) with a^2 + b^2 = -1 and a a unit: residue search, then Hensel
    /// lifting of a with b fixed.
    std::pair<Elem, Elem> solve_sum_of_squares() const;

    /// "(d0,d1,...)" digit tuple.
    std::string render(Elem a) const {
        std::string out = "(";
        auto d = digits(a);
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(d[i]);
        }
        return out + ")";
    }
    /// Accepts a digit tuple or a (possibly negative) canonical index.
    Elem parse(std::string_view text) const;

private:
    struct Tables {
        std::vector<std::uint32_t> add, mul, neg, inv;
        std::vector<std::uint8_t> val;
    };

    Elem slow_add(Elem a, Elem b) const {
        if (spec_.family == Family::IntegersModPn) return {static_cast<std::uint32_t>((std::uint64_t{a.index} + b.index) % size_)};
        auto da = digits(a), db = digits(b);
        for (unsigned i = 0; i < spec_.n; ++i) da[i] = field_->add(da[i], db[i]);
        return from_digits(da);
    }
    Elem slow_neg(Elem a) const {
        if (spec_.family == Family::IntegersModPn) return {a.index == 0 ? 0 : size_ - a.index};
        auto da = digits(a);
        for (auto& d : da) d = field_->neg(d);
        return from_digits(da);
    }
    Elem slow_mul(Elem a, Elem b) const {
        if (spec_.family == Family::IntegersModPn) return {static_cast<std::uint32_t>(std::uint64_t{a.index} * b.index % size_)};
        auto da = digits(a), db = digits(b);
        std::vector<std::uint32_t> out(spec_.n, 0);
        for (unsigned i = 0; i < spec_.n; ++i) {
            if (da[i] == 0) continue;
            for (unsigned j = 0; i + j < spec_.n; ++j)
                out[i + j] = field_->add(out[i + j], field_->mul(da[i], db[j]));
        }
        return from_digits(out);
    }
    Elem newton_inverse(Elem a) const {
        // x <- x (2 - a x) doubles the number of correct digits.
        Elem x = lift(field_->inverse(residue(a)));
        const Elem two = from_int(2);
        for (unsigned step = 0; step <= spec_.n + 1; ++step) {
            Elem ax = slow_mul(a, x);
            if (ax == one()) return x;
            x = slow_mul(x, slow_add(two, slow_neg(ax)));
        }
        throw std::logic_error("Newton inversion did not converge");
    }

    void build_tables() {
        if (size_ > kTableLimit) return;
        auto t = std::make_shared<Tables>();
        const std::size_t sq = static_cast<std::size_t>(size_) * size_;
        t->add.resize(sq);
        t->mul.resize(sq);
        t->neg.resize(size_);
        t->inv.assign(size_, 0);
        t->val.resize(size_);
        for (std::uint32_t a = 0; a < size_; ++a) {
            t->neg[a] = slow_neg({a}).index;
            unsigned k = 0;
            if (a == 0) {
                k = spec_.n;
            } else {
                for (std::uint32_t v = a; v % q_ == 0; v /= q_) ++k;
            }
            t->val[a] = static_cast<std::uint8_t>(k);
            for (std::uint32_t b = 0; b < size_; ++b) {
                t->add[a * size_ + b] = slow_add({a}, {b}).index;
                t->mul[a * size_ + b] = slow_mul({a}, {b}).index;
            }
        }
        for (std::uint32_t a = 0; a < size_; ++a)
            if (a % q_ != 0) t->inv[a] = newton_inverse({a}).index;
        tables_ = std::move(t);
    }

    RingSpec spec_;
    std::shared_ptr<const GaloisField> field_;
    std::uint32_t q_ = 0;
    std::uint32_t size_ = 0;
    std::shared_ptr<const Tables> tables_;
};

inline std::pair<Elem, Elem> Ring::solve_sum_of_squares() const {
    const GaloisField& f = *field_;
    const std::uint32_t minus_one = f.neg(1);
    auto residue_solution = [&]() -> std::pair<std::uint32_t, std::uint32_t> {
        std::optional<std::pair<std::uint32_t, std::uint32_t>> fallback;
        for (std::uint32_t a = 0; a < q_; ++a)
            for (std::uint32_t b = 0; b < q_; ++b)
                if (f.add(f.mul(a, a), f.mul(b, b)) == minus_one) {
                    if (a != 0) return {a, b};
                    if (!fallback) fallback = std::pair{b, a};
                }
        if (!fallback) throw std::logic_error("no residue solution of a^2 + b^2 = -1");
        return *fallback;
    }();
    Elem a = lift(residue_solution.first);
    const Elem b = lift(residue_solution.second);
    const Elem b2_plus_1 = add(mul(b, b), one());
    const Elem two = from_int(2);
    for (unsigned step = 0; step <= spec_.n + 1; ++step) {
        Elem defect = add(mul(a, a), b2_plus_1);
        if (defect == zero()) return {a, b};
        a = sub(a, mul(defect, inverse(mul(two, a))));
    }
    throw std::logic_error("Hensel lifting did not converge");
}

inline Elem Ring::parse(std::string_view text) const {
    text = detail::strip(text);
    if (!text.empty() && text.front() == '(') {
        if (text.back() != ')') throw std::invalid_argument("unterminated digit tuple '" + std::string(text) + "'");
        std::vector<std::uint32_t> d;
        for (auto part : detail::split(text.substr(1, text.size() - 2), ',')) {
            auto v = detail::parse_uint(detail::strip(part));
            if (!v || *v >= q_) throw std::invalid_argument("bad digit in '" + std::string(text) + "'");
            d.push_back(static_cast<std::uint32_t>(*v));
        }
        return from_digits(d);
    }
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    auto v = detail::parse_uint(text);
    if (!v || *v >= size_) throw std::invalid_argument("bad ring element '" + std::string(text) + "' for " + name());
    Elem e{static_cast<std::uint32_t>(*v)};
    return negative ? neg(e) : e;
}

}  // namespace nilquat
