#pragma once

// Conjugation orbits of GL_2(R) on M_2(R), the M(a, b) orbit family and its
// union. All sweeps are brute force over the enumerated invertible matrices.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nilquat/mat2.hpp"
#include "nilquat/packed_set.hpp"

namespace nilquat {

struct EngineOptions {
    std::uint64_t cap = kDefaultCap;
    unsigned threads = 1;
};

/// T_t = [[1, t], [0, 1]], V_alpha = [[1, 0], [0, alpha]], or an arbitrary
/// invertible matrix.
struct Conjugator {
    enum class Kind { Tt, Valpha, General };

    Kind kind = Kind::General;
    Elem param{};
    Mat2 matrix{};

    static Conjugator translation(const MatrixRing& mats, Elem t) {
        const Ring& r = mats.ring();
        return {Kind::Tt, t, mats.make(r.one(), t, r.zero(), r.one())};
    }
    static Conjugator scaling(const MatrixRing& mats, Elem alpha) {
        const Ring& r = mats.ring();
        if (!r.is_unit(alpha)) throw std::domain_error("V_alpha requires a unit alpha");
        return {Kind::Valpha, alpha, mats.make(r.one(), r.zero(), r.zero(), alpha)};
    }
    static Conjugator general(const MatrixRing& mats, const Mat2& p) {
        if (!mats.is_invertible(p)) throw std::domain_error("conjugator is not invertible");
        return {Kind::General, {}, p};
    }
};

struct Orbit {
    Mat2 representative{};
    /// Sorted packed indices.
    std::vector<std::uint64_t> members;

    std::size_t size() const { return members.size(); }
    bool contains(std::uint64_t idx) const { return std::binary_search(members.begin(), members.end(), idx); }
};

/// Witness that conjugator^{-1} * M(a, b) * conjugator equals the target.
struct OrbitCertificate {
    Elem a{};
    Elem b{};
    Mat2 conjugator{};
};

struct OrbitUnion {
    PackedSet members;
    /// Number of distinct orbits O_{M(a,b)} making up the union.
    std::size_t orbit_count = 0;
};

namespace detail {

// Process-wide memo of orbit unions keyed by ring identity. Each entry is
// written once under the lock and read-only afterwards.
inline std::mutex& union_cache_mutex() {
    static std::mutex m;
    return m;
}
inline std::map<std::string, std::shared_ptr<const OrbitUnion>>& union_cache() {
    static std::map<std::string, std::shared_ptr<const OrbitUnion>> cache;
    return cache;
}
inline std::string ring_key(const Ring& r) {
    std::string key = r.name();
    for (auto c : r.residue_field().modulus()) key += "," + std::to_string(c);
    return key;
}

}  // namespace detail

class OrbitEngine {
public:
    explicit OrbitEngine(MatrixRing mats, EngineOptions options = {})
        : mats_(std::move(mats)), options_(options), cache_(std::make_shared<Cache>()) {}

    const MatrixRing& matrices() const { return mats_; }
    const EngineOptions& options() const { return options_; }

    /// P^{-1} A P.
    Mat2 conjugate(const Mat2& a, const Mat2& p) const { return mats_.mul(mats_.mul(mats_.inverse(p), a), p); }
    Mat2 conjugate(const Mat2& a, const Conjugator& c) const { return conjugate(a, c.matrix); }

    /// GL_2(R) in packed order.
    const std::vector<Mat2>& invertibles() const {
        std::call_once(cache_->gl_once, [this] {
            cache_->gl = mats_.enumerate_invertibles(options_.cap);
            cache_->gl_inv.reserve(cache_->gl.size());
            for (const auto& p : cache_->gl) cache_->gl_inv.push_back(mats_.inverse(p));
        });
        return cache_->gl;
    }

    Orbit orbit_of(const Mat2& a) const {
        Orbit out;
        out.representative = a;
        sweep_orbit(a).for_each([&](std::uint64_t idx) { out.members.push_back(idx); });
        return out;
    }

    /// Union of O_{M(a,b)} over all a, b; memoized per ring. The cap is
    /// still enforced when the memo already holds the ring.
    const OrbitUnion& m_orbit_union() const {
        mats_.require_cap(options_.cap);
        std::call_once(cache_->union_once, [this] {
            const std::string key = detail::ring_key(mats_.ring());
            {
                std::lock_guard lock(detail::union_cache_mutex());
                auto it = detail::union_cache().find(key);
                if (it != detail::union_cache().end()) {
                    cache_->m_union = it->second;
                    return;
                }
            }
            auto computed = std::make_shared<const OrbitUnion>(compute_union());
            std::lock_guard lock(detail::union_cache_mutex());
            auto [it, inserted] = detail::union_cache().emplace(key, computed);
            cache_->m_union = it->second;
        });
        return *cache_->m_union;
    }

    /// Deterministic witness: least b (a is forced to be tr A), then the
    /// least conjugator in packed order.
    std::optional<OrbitCertificate> in_m_orbit(const Mat2& target) const {
        if (!m_orbit_union().members.test(mats_.pack(target))) return std::nullopt;
        const Ring& r = mats_.ring();
        const auto& gl = invertibles();
        const auto& gl_inv = cache_->gl_inv;
        std::optional<OrbitCertificate> best;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            // P^{-1} M P = A  <=>  M = P A P^{-1}
            Mat2 m = mats_.mul(mats_.mul(gl[i], target), gl_inv[i]);
            if (m.a21() != r.zero() || m.a22() != r.zero()) continue;
            if (!best || m.a12() < best->b) best = OrbitCertificate{m.a11(), m.a12(), gl[i]};
        }
        if (!best) throw std::logic_error("orbit union membership without a witness");
        return best;
    }

    /// Checks a certificate directly.
    bool certifies(const Mat2& target, const OrbitCertificate& cert) const {
        return mats_.is_invertible(cert.conjugator) && conjugate(mats_.m_ab(cert.a, cert.b), cert.conjugator) == target;
    }

private:
    struct Cache {
        std::once_flag gl_once;
        std::vector<Mat2> gl;
        std::vector<Mat2> gl_inv;
        std::once_flag union_once;
        std::shared_ptr<const OrbitUnion> m_union;
    };

    PackedSet sweep_orbit(const Mat2& a) const {
        const auto& gl = invertibles();
        const auto& gl_inv = cache_->gl_inv;
        return sharded_union(mats_.matrix_count(), gl.size(), options_.threads,
                             [&](std::size_t begin, std::size_t end, PackedSet& out) {
                                 for (std::size_t i = begin; i < end; ++i)
                                     out.set(mats_.pack(mats_.mul(mats_.mul(gl_inv[i], a), gl[i])));
                             });
    }

    OrbitUnion compute_union() const {
        mats_.require_cap(options_.cap);
        const Ring& r = mats_.ring();
        OrbitUnion out;
        out.members = PackedSet(mats_.matrix_count());
        // Orbits partition M_2(R): a representative already covered adds nothing.
        for (std::uint32_t b = 0; b < r.size(); ++b) {
            for (std::uint32_t a = 0; a < r.size(); ++a) {
                Mat2 m = mats_.m_ab({a}, {b});
                if (out.members.test(mats_.pack(m))) continue;
                out.members |= sweep_orbit(m);
                ++out.orbit_count;
            }
        }
        return out;
    }

    MatrixRing mats_;
    EngineOptions options_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace nilquat
