#pragma once

// 2x2 matrices over a chain ring, with nilpotency tests and the four-class
// nilpotent taxonomy (radical, upper unit, lower unit, unit trace-type).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nilquat/chain_ring.hpp"

namespace nilquat {

/// Row-major 2x2 matrix: e = {a11, a12, a21, a22}.
struct Mat2 {
    std::array<Elem, 4> e{};

    Elem a11() const { return e[0]; }
    Elem a12() const { return e[1]; }
    Elem a21() const { return e[2]; }
    Elem a22() const { return e[3]; }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Thrown when an exhaustive enumeration would exceed the configured cap.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::uint64_t needed, std::uint64_t cap)
        : std::runtime_error("enumeration cap exceeded: need " + std::to_string(needed) +
                             " packed indices, cap is " + std::to_string(cap) + " (raise with --cap)"),
          needed_(needed),
          cap_(cap) {}
    std::uint64_t needed() const { return needed_; }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t needed_, cap_;
};

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

enum class NilKind { Radical = 1, UpperUnit = 2, LowerUnit = 3, UnitTrace = 4 };

struct NilClass {
    NilKind kind = NilKind::Radical;
    Elem u{};
    Elem v{};
    Mat2 perturbation{};
};

class MatrixRing {
public:
    explicit MatrixRing(Ring ring) : ring_(std::move(ring)), q_n_(ring_.size()) {}

    const Ring& ring() const { return ring_; }

    Mat2 make(Elem a11, Elem a12, Elem a21, Elem a22) const { return {{a11, a12, a21, a22}}; }
    Mat2 make_int(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22) const {
        return make(ring_.from_int(a11), ring_.from_int(a12), ring_.from_int(a21), ring_.from_int(a22));
    }
    Mat2 zero() const { return {}; }
    Mat2 identity() const { return make(ring_.one(), ring_.zero(), ring_.zero(), ring_.one()); }
    /// M(a, b): first row (a, b), second row zero.
    Mat2 m_ab(Elem a, Elem b) const { return make(a, b, ring_.zero(), ring_.zero()); }

    Mat2 add(const Mat2& x, const Mat2& y) const {
        Mat2 out;
        for (int i = 0; i < 4; ++i) out.e[i] = ring_.add(x.e[i], y.e[i]);
        return out;
    }
    Mat2 neg(const Mat2& x) const {
        Mat2 out;
        for (int i = 0; i < 4; ++i) out.e[i] = ring_.neg(x.e[i]);
        return out;
    }
    Mat2 sub(const Mat2& x, const Mat2& y) const { return add(x, neg(y)); }
    Mat2 scale(Elem c, const Mat2& x) const {
        Mat2 out;
        for (int i = 0; i < 4; ++i) out.e[i] = ring_.mul(c, x.e[i]);
        return out;
    }
    Mat2 mul(const Mat2& x, const Mat2& y) const {
        const Ring& r = ring_;
        return make(r.add(r.mul(x.e[0], y.e[0]), r.mul(x.e[1], y.e[2])),
                    r.add(r.mul(x.e[0], y.e[1]), r.mul(x.e[1], y.e[3])),
                    r.add(r.mul(x.e[2], y.e[0]), r.mul(x.e[3], y.e[2])),
                    r.add(r.mul(x.e[2], y.e[1]), r.mul(x.e[3], y.e[3])));
    }
    Mat2 pow(const Mat2& x, unsigned k) const {
        Mat2 out = identity();
        for (unsigned i = 0; i < k; ++i) out = mul(out, x);
        return out;
    }
    /// Ordered product of a nonempty factor list.
    Mat2 product(const std::vector<Mat2>& factors) const {
        Mat2 out = identity();
        for (const auto& f : factors) out = mul(out, f);
        return out;
    }

    Elem det(const Mat2& x) const { return ring_.sub(ring_.mul(x.e[0], x.e[3]), ring_.mul(x.e[1], x.e[2])); }
    Elem trace(const Mat2& x) const { return ring_.add(x.e[0], x.e[3]); }

    bool is_invertible(const Mat2& x) const { return ring_.is_unit(det(x)); }
    /// Adjugate divided by the (unit) determinant.
    Mat2 inverse(const Mat2& x) const {
        Elem d = det(x);
        if (!ring_.is_unit(d)) throw std::domain_error("matrix is not invertible");
        Elem di = ring_.inverse(d);
        return scale(di, make(x.e[3], ring_.neg(x.e[1]), ring_.neg(x.e[2]), x.e[0]));
    }

    /// Entrywise membership in M_2(J^k).
    bool in_radical_power(const Mat2& x, unsigned k) const {
        for (auto v : x.e)
            if (ring_.valuation(v) < k) return false;
        return true;
    }

    /// Nilpotent iff trace and determinant lie in J(R).
    bool is_nilpotent(const Mat2& x) const { return ring_.in_radical(trace(x)) && ring_.in_radical(det(x)); }
    /// Definition-level check: x^{2n} = 0.
    bool is_nilpotent_by_powers(const Mat2& x) const { return pow(x, 2 * ring_.n()) == zero(); }

    Mat2 representative(NilKind kind, Elem u, Elem v) const {
        const Ring& r = ring_;
        switch (kind) {
            case NilKind::Radical: return zero();
            case NilKind::UpperUnit: return make(r.zero(), u, r.zero(), r.zero());
            case NilKind::LowerUnit: return make(r.zero(), r.zero(), u, r.zero());
            case NilKind::UnitTrace:
                return make(u, r.neg(v), r.mul(r.inverse(v), r.mul(u, u)), r.neg(u));
        }
        throw std::logic_error("unknown nilpotent class");
    }
    Mat2 reconstruct(const NilClass& c) const { return add(representative(c.kind, c.u, c.v), c.perturbation); }

    NilClass classify(const Mat2& x) const {
        if (!is_nilpotent(x)) throw std::domain_error("not nilpotent");
        const Ring& r = ring_;
        const bool z11 = r.in_radical(x.e[0]), z12 = r.in_radical(x.e[1]);
        const bool z21 = r.in_radical(x.e[2]), z22 = r.in_radical(x.e[3]);
        NilClass c;
        if (z11 && z12 && z21 && z22) {
            c.kind = NilKind::Radical;
        } else if (z11 && z21 && z22) {
            c.kind = NilKind::UpperUnit;
            c.u = r.lift(r.residue(x.e[1]));
        } else if (z11 && z12 && z22) {
            c.kind = NilKind::LowerUnit;
            c.u = r.lift(r.residue(x.e[2]));
        } else {
            // A nonzero nilpotent residue with both off-diagonal residues
            // nonzero has a unit diagonal; anything else is not rank <= 1.
            if (z11 || z12 || z21 || z22) throw std::logic_error("inconsistent residue pattern in classify");
            c.kind = NilKind::UnitTrace;
            c.u = r.lift(r.residue(x.e[0]));
            c.v = r.lift(r.residue(r.neg(x.e[1])));
        }
        c.perturbation = sub(x, representative(c.kind, c.u, c.v));
        if (!in_radical_power(c.perturbation, 1)) throw std::logic_error("classification perturbation not in M2(J)");
        return c;
    }

    // Packed index a11 + a12 Q + a21 Q^2 + a22 Q^3 with Q = q^n.
    std::uint64_t matrix_count() const { return static_cast<std::uint64_t>(q_n_) * q_n_ * q_n_ * q_n_; }
    std::uint64_t pack(const Mat2& x) const {
        const std::uint64_t Q = q_n_;
        return x.e[0].index + Q * (x.e[1].index + Q * (x.e[2].index + Q * std::uint64_t{x.e[3].index}));
    }
    Mat2 unpack(std::uint64_t idx) const {
        Mat2 out;
        for (int i = 0; i < 4; ++i) {
            out.e[i] = {static_cast<std::uint32_t>(idx % q_n_)};
            idx /= q_n_;
        }
        return out;
    }
    void require_cap(std::uint64_t cap) const {
        // q^{4n} can overflow 64 bits for large rings; compare in floating point first.
        const double approx = std::pow(static_cast<double>(q_n_), 4.0);
        if (approx > static_cast<double>(cap) * 1.01 || matrix_count() > cap)
            throw CapExceeded(approx > 1.8e19 ? UINT64_MAX : matrix_count(), cap);
    }

    std::vector<Mat2> enumerate_nilpotents(std::uint64_t cap = kDefaultCap) const {
        return enumerate_if(cap, [this](const Mat2& m) { return is_nilpotent(m); });
    }
    std::vector<Mat2> enumerate_invertibles(std::uint64_t cap = kDefaultCap) const {
        return enumerate_if(cap, [this](const Mat2& m) { return is_invertible(m); });
    }

    /// "[[a,b],[c,d]]" with digit-tuple entries.
    std::string render(const Mat2& x) const {
        return "[[" + ring_.render(x.e[0]) + "," + ring_.render(x.e[1]) + "],[" + ring_.render(x.e[2]) + "," +
               ring_.render(x.e[3]) + "]]";
    }
    Mat2 parse(std::string_view text) const;

private:
    template <class Pred>
    std::vector<Mat2> enumerate_if(std::uint64_t cap, Pred pred) const {
        require_cap(cap);
        std::vector<Mat2> out;
        const std::uint64_t total = matrix_count();
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            Mat2 m = unpack(idx);
            if (pred(m)) out.push_back(m);
        }
        return out;
    }

    Ring ring_;
    std::uint32_t q_n_;
};

inline Mat2 MatrixRing::parse(std::string_view text) const {
    // Split on top-level commas at bracket depth 2 (inside a row), ignoring
    // commas nested in digit tuples.
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    auto bad = [&]() { return std::invalid_argument("bad matrix '" + std::string(text) + "', expected [[a,b],[c,d]]"); };
    if (compact.size() < 2 || compact.front() != '[' || compact.back() != ']') throw bad();
    std::vector<std::string> entries;
    std::string current;
    int depth = 0, paren = 0;
    for (char c : compact) {
        if (c == '(') ++paren;
        if (c == ')') --paren;
        if (paren == 0 && c == '[') {
            ++depth;
            if (depth > 2) throw bad();
            continue;
        }
        if (paren == 0 && c == ']') {
            if (depth == 2) {
                entries.push_back(current);
                current.clear();
            }
            --depth;
            continue;
        }
        if (paren == 0 && c == ',') {
            if (depth == 2) {
                entries.push_back(current);
                current.clear();
            } else if (depth != 1) {
                throw bad();
            }
            continue;
        }
        current += c;
    }
    if (depth != 0 || paren != 0 || entries.size() != 4) throw bad();
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.e[i] = ring_.parse(entries[i]);
    return out;
}

}  // namespace nilquat
