#pragma once

// The quaternion ring H(R) = R + Ri + Rj + Rk with i^2 = j^2 = k^2 = ijk = -1,
// and an explicit ring isomorphism H(R) -> M_2(R) for rings of odd order.

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "nilquat/mat2.hpp"

namespace nilquat {

/// r1 + r2 i + r3 j + r4 k.
struct Quaternion {
    std::array<Elem, 4> c{};

    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

class QuaternionRing {
public:
    explicit QuaternionRing(Ring ring) : ring_(std::move(ring)) {}

    const Ring& ring() const { return ring_; }

    Quaternion make(Elem r1, Elem r2, Elem r3, Elem r4) const { return {{r1, r2, r3, r4}}; }
    Quaternion one() const { return make(ring_.one(), ring_.zero(), ring_.zero(), ring_.zero()); }
    Quaternion i() const { return make(ring_.zero(), ring_.one(), ring_.zero(), ring_.zero()); }
    Quaternion j() const { return make(ring_.zero(), ring_.zero(), ring_.one(), ring_.zero()); }
    Quaternion k() const { return make(ring_.zero(), ring_.zero(), ring_.zero(), ring_.one()); }

    Quaternion add(const Quaternion& x, const Quaternion& y) const {
        Quaternion out;
        for (int t = 0; t < 4; ++t) out.c[t] = ring_.add(x.c[t], y.c[t]);
        return out;
    }
    Quaternion neg(const Quaternion& x) const {
        Quaternion out;
        for (int t = 0; t < 4; ++t) out.c[t] = ring_.neg(x.c[t]);
        return out;
    }
    Quaternion sub(const Quaternion& x, const Quaternion& y) const { return add(x, neg(y)); }

    // Hamilton product; the signs follow from ij = k, jk = i, ki = j and
    // their anticommuted counterparts.
    Quaternion mul(const Quaternion& x, const Quaternion& y) const {
        const Ring& r = ring_;
        auto m = [&](int s, int t) { return r.mul(x.c[s], y.c[t]); };
        auto sum = [&](Elem a, Elem b, Elem c, Elem d) { return r.add(r.add(a, b), r.add(c, d)); };
        return make(sum(m(0, 0), r.neg(m(1, 1)), r.neg(m(2, 2)), r.neg(m(3, 3))),
                    sum(m(0, 1), m(1, 0), m(2, 3), r.neg(m(3, 2))),
                    sum(m(0, 2), r.neg(m(1, 3)), m(2, 0), m(3, 1)),
                    sum(m(0, 3), m(1, 2), r.neg(m(2, 1)), m(3, 0)));
    }

    /// Dense index c1 + c2 Q + c3 Q^2 + c4 Q^3, Q = |R|.
    std::uint64_t pack(const Quaternion& x) const {
        const std::uint64_t Q = ring_.size();
        return x.c[0].index + Q * (x.c[1].index + Q * (x.c[2].index + Q * std::uint64_t{x.c[3].index}));
    }
    Quaternion unpack(std::uint64_t idx) const {
        Quaternion out;
        for (int t = 0; t < 4; ++t) {
            out.c[t] = {static_cast<std::uint32_t>(idx % ring_.size())};
            idx /= ring_.size();
        }
        return out;
    }

    /// "r1+r2*i+r3*j+r4*k" with digit-tuple coefficients.
    std::string render(const Quaternion& x) const {
        return ring_.render(x.c[0]) + "+" + ring_.render(x.c[1]) + "*i+" + ring_.render(x.c[2]) + "*j+" +
               ring_.render(x.c[3]) + "*k";
    }
    Quaternion parse(std::string_view text) const {
        auto bad = [&]() { return std::invalid_argument("bad quaternion '" + std::string(text) + "', expected r1+r2*i+r3*j+r4*k"); };
        // Coefficients never contain '+', so the terms split cleanly.
        auto terms = detail::split(detail::strip(text), '+');
        if (terms.size() != 4) throw bad();
        static constexpr std::array<std::string_view, 4> unit{"", "*i", "*j", "*k"};
        Quaternion out;
        for (int t = 0; t < 4; ++t) {
            auto term = detail::strip(terms[t]);
            if (term.size() < unit[t].size() || term.substr(term.size() - unit[t].size()) != unit[t]) throw bad();
            out.c[t] = ring_.parse(term.substr(0, term.size() - unit[t].size()));
        }
        return out;
    }

private:
    Ring ring_;
};

/// phi : H(R) -> M_2(R) determined by a^2 + b^2 = -1:
///   phi(i) = [[a, b], [b, -a]], phi(j) = [[0, 1], [-1, 0]], phi(k) = phi(i) phi(j).
class QuaternionIso {
public:
    /// Uses the ring's canonical sum-of-squares solution.
    explicit QuaternionIso(const MatrixRing& mats) : QuaternionIso(mats, mats.ring().solve_sum_of_squares()) {}

    QuaternionIso(const MatrixRing& mats, std::pair<Elem, Elem> ab) : mats_(mats), a_(ab.first), b_(ab.second) {
        const Ring& r = mats_.ring();
        if (r.add(r.add(r.mul(a_, a_), r.mul(b_, b_)), r.one()) != r.zero())
            throw std::invalid_argument("a^2 + b^2 != -1");
        basis_[0] = mats_.identity();
        basis_[1] = mats_.make(a_, b_, b_, r.neg(a_));
        basis_[2] = mats_.make(r.zero(), r.one(), r.neg(r.one()), r.zero());
        basis_[3] = mats_.mul(basis_[1], basis_[2]);

        const Mat2 minus_i = mats_.neg(mats_.identity());
        for (int t = 1; t < 4; ++t)
            if (mats_.mul(basis_[t], basis_[t]) != minus_i) throw std::logic_error("basis square is not -I");
        if (mats_.mul(mats_.mul(basis_[1], basis_[2]), basis_[3]) != minus_i)
            throw std::logic_error("phi(i) phi(j) phi(k) != -I");
        if (mats_.mul(basis_[1], basis_[2]) != mats_.neg(mats_.mul(basis_[2], basis_[1])))
            throw std::logic_error("phi(i), phi(j) do not anticommute");
        solve_coordinates();
    }

    Elem a() const { return a_; }
    Elem b() const { return b_; }
    const MatrixRing& matrices() const { return mats_; }
    /// phi(1), phi(i), phi(j), phi(k).
    const std::array<Mat2, 4>& basis() const { return basis_; }

    Mat2 to_mat(const Quaternion& x) const {
        Mat2 out = mats_.zero();
        for (int t = 0; t < 4; ++t) out = mats_.add(out, mats_.scale(x.c[t], basis_[t]));
        return out;
    }

    Quaternion from_mat(const Mat2& m) const {
        const Ring& r = mats_.ring();
        Quaternion out;
        for (int t = 0; t < 4; ++t) {
            Elem acc = r.zero();
            for (int s = 0; s < 4; ++s) acc = r.add(acc, r.mul(coord_[t][s], m.e[s]));
            out.c[t] = acc;
        }
        return out;
    }

    bool is_nilpotent(const Quaternion& x) const { return mats_.is_nilpotent(to_mat(x)); }

private:
    // Invert the 4x4 matrix whose column t holds the entries of basis_[t],
    // by Gauss-Jordan elimination with unit pivots (always available in a
    // local ring when the matrix is invertible).
    void solve_coordinates() {
        const Ring& r = mats_.ring();
        std::array<std::array<Elem, 8>, 4> aug{};
        for (int row = 0; row < 4; ++row) {
            for (int col = 0; col < 4; ++col) aug[row][col] = basis_[col].e[row];
            for (int col = 0; col < 4; ++col) aug[row][4 + col] = row == col ? r.one() : r.zero();
        }
        for (int col = 0; col < 4; ++col) {
            int pivot = -1;
            for (int row = col; row < 4; ++row)
                if (r.is_unit(aug[row][col])) {
                    pivot = row;
                    break;
                }
            if (pivot < 0) throw std::logic_error("basis change is not invertible over R");
            std::swap(aug[col], aug[pivot]);
            const Elem inv = r.inverse(aug[col][col]);
            for (auto& v : aug[col]) v = r.mul(v, inv);
            for (int row = 0; row < 4; ++row) {
                if (row == col || aug[row][col] == r.zero()) continue;
                const Elem f = aug[row][col];
                for (int k = 0; k < 8; ++k) aug[row][k] = r.sub(aug[row][k], r.mul(f, aug[col][k]));
            }
        }
        for (int t = 0; t < 4; ++t)
            for (int s = 0; s < 4; ++s) coord_[t][s] = aug[t][4 + s];
    }

    MatrixRing mats_;
    Elem a_, b_;
    std::array<Mat2, 4> basis_{};
    // coord_[t] is the linear functional returning the t-th quaternion coordinate.
    std::array<std::array<Elem, 4>, 4> coord_{};
};

}  // namespace nilquat
