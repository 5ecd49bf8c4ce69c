#pragma once

// Products of nilpotent matrices: exact censuses of S_s (the set of s-fold
// products), constructive s-fold factorizations of orbit-union members, the
// 2n-2 factor sharpness example and a sampled determinant-valuation scan.

#include <chrono>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilquat/formula.hpp"
#include "nilquat/orbits.hpp"

namespace nilquat {

inline constexpr std::uint64_t kDefaultSeed = 218184014;

struct NilFactorization {
    std::vector<Mat2> factors;
    /// The target equals conjugator^{-1} * (product of the unconjugated
    /// factors) * conjugator; the stored factors are already conjugated.
    Mat2 conjugator{};
    Mat2 target{};
};

enum class CensusMethod { SetProduct, OrbitUnion, FormulaOnly };

inline std::string to_string(CensusMethod m) {
    switch (m) {
        case CensusMethod::SetProduct: return "set-product";
        case CensusMethod::OrbitUnion: return "orbit-union";
        case CensusMethod::FormulaOnly: return "formula";
    }
    return "?";
}
inline CensusMethod parse_census_method(const std::string& s) {
    if (s == "set-product") return CensusMethod::SetProduct;
    if (s == "orbit-union") return CensusMethod::OrbitUnion;
    if (s == "formula") return CensusMethod::FormulaOnly;
    throw std::invalid_argument("unknown census method '" + s + "'");
}

struct CensusReport {
    std::string ring;
    std::uint64_t q = 0;
    unsigned n = 0;
    unsigned s = 0;
    std::optional<std::uint64_t> brute_count;
    std::optional<BigInt> formula_count;
    /// Present only when both counts are.
    std::optional<bool> match;
    CensusMethod method = CensusMethod::SetProduct;
    double elapsed_ms = 0;
};

/// Formula value for (q, n, s) when the closed form covers s, else empty.
inline std::optional<BigInt> formula_if_applicable(std::uint64_t q, unsigned n, unsigned s) {
    if (s < 2 * n - 1) return std::nullopt;
    return formula_count(q, n, s);
}

inline void finish_report(CensusReport& report) {
    if (report.brute_count && report.formula_count)
        report.match = BigInt(*report.brute_count) == *report.formula_count;
}

enum class Refusal { TraceObstruction, NotInOrbitUnion, NotNilpotent, NoFactorization };

class DecompositionRefused : public std::runtime_error {
public:
    explicit DecompositionRefused(Refusal reason) : std::runtime_error(message(reason)), reason_(reason) {}
    Refusal reason() const { return reason_; }

    static std::string message(Refusal reason) {
        switch (reason) {
            case Refusal::TraceObstruction: return "impossible: trace obstruction";
            case Refusal::NotInOrbitUnion: return "not in orbit union";
            case Refusal::NotNilpotent: return "not nilpotent";
            case Refusal::NoFactorization: return "no factorization into nilpotents found";
        }
        return "refused";
    }

private:
    Refusal reason_;
};

struct SharpnessCertificate {
    Mat2 target{};
    /// (N1 N2)^{n-1}, length 2n - 2.
    std::vector<Mat2> factors;
    bool factors_nilpotent = false;
    bool product_matches = false;
    /// Whether the target lies in some O_{M(a,b)}; false for this target.
    bool in_orbit_union = true;
};

struct DeterScan {
    std::uint64_t samples = 0;
    /// Products satisfying the valuation hypothesis.
    std::uint64_t hypothesis_hits = 0;
    std::vector<Mat2> violations;
    std::string note;
};

struct NilpotentCount {
    std::uint64_t enumerated = 0;
    BigInt formula = 0;
    bool match = false;
};

class NilFactorEngine {
public:
    explicit NilFactorEngine(Ring ring, EngineOptions options = {})
        : mats_(std::move(ring)), orbits_(mats_, options), cache_(std::make_shared<Cache>()) {}

    const MatrixRing& matrices() const { return mats_; }
    const OrbitEngine& orbits() const { return orbits_; }
    const Ring& ring() const { return mats_.ring(); }

    const std::vector<Mat2>& nilpotents() const {
        std::call_once(cache_->nil_once, [this] { cache_->nil = mats_.enumerate_nilpotents(orbits_.options().cap); });
        return cache_->nil;
    }

    PackedSet nilpotent_set() const {
        PackedSet out(mats_.matrix_count());
        for (const auto& m : nilpotents()) out.set(mats_.pack(m));
        return out;
    }

    /// S_1, ..., S_{s_max}; S_{k+1} = { X N : X in S_k, N nilpotent } is
    /// recomputed in full at each step since S_k need not be monotone.
    std::vector<PackedSet> product_sets(unsigned s_max) const {
        if (s_max == 0) throw std::invalid_argument("s must be >= 1");
        const auto& nil = nilpotents();
        std::vector<PackedSet> out;
        out.push_back(nilpotent_set());
        for (unsigned k = 1; k < s_max; ++k) {
            std::vector<Mat2> frontier;
            out.back().for_each([&](std::uint64_t idx) { frontier.push_back(mats_.unpack(idx)); });
            out.push_back(sharded_union(mats_.matrix_count(), frontier.size(), orbits_.options().threads,
                                        [&](std::size_t begin, std::size_t end, PackedSet& acc) {
                                            for (std::size_t i = begin; i < end; ++i)
                                                for (const auto& nmat : nil) acc.set(mats_.pack(mats_.mul(frontier[i], nmat)));
                                        }));
        }
        return out;
    }
    PackedSet product_set(unsigned s) const { return product_sets(s).back(); }

    CensusReport census_set_product(unsigned s) const {
        auto start = std::chrono::steady_clock::now();
        CensusReport report = blank_report(s, CensusMethod::SetProduct);
        report.brute_count = product_set(s).count();
        report.formula_count = formula_if_applicable(ring().q(), ring().n(), s);
        finish_report(report);
        report.elapsed_ms = elapsed_since(start);
        return report;
    }

    /// The orbit union equals S_s for s >= 2n - 1 when n >= 2, and for s >= 3
    /// when n = 1.
    static bool union_characterizes(unsigned n, unsigned s) { return n == 1 ? s >= 3 : s >= 2 * n - 1; }

    CensusReport census_orbit_union(unsigned s) const {
        if (!union_characterizes(ring().n(), s))
            throw std::domain_error("orbit union characterizes S_s only for s >= " +
                                    std::to_string(ring().n() == 1 ? 3 : 2 * ring().n() - 1));
        auto start = std::chrono::steady_clock::now();
        CensusReport report = blank_report(s, CensusMethod::OrbitUnion);
        report.brute_count = orbits_.m_orbit_union().members.count();
        report.formula_count = formula_if_applicable(ring().q(), ring().n(), s);
        finish_report(report);
        report.elapsed_ms = elapsed_since(start);
        return report;
    }

    CensusReport census_formula(unsigned s) const {
        CensusReport report = blank_report(s, CensusMethod::FormulaOnly);
        report.formula_count = formula_count(ring().q(), ring().n(), s);
        return report;
    }

    NilpotentCount nilpotent_count_check() const {
        NilpotentCount out;
        out.enumerated = nilpotents().size();
        out.formula = nilpotent_formula(ring().q(), ring().n());
        out.match = BigInt(out.enumerated) == out.formula;
        return out;
    }

    /// Factors M(a, b) into s >= 3 nilpotents using the fixed identities for
    /// a in J, b in J, and a, b units; leading [E12, E21] pairs (whose
    /// product is E11) pad to the requested length.
    std::vector<Mat2> factor_m_ab(Elem a, Elem b, unsigned s) const {
        if (s < 3) throw std::invalid_argument("factor_m_ab requires s >= 3");
        const Ring& r = ring();
        const Elem o = r.zero(), one = r.one(), m1 = r.neg(r.one());
        const Mat2 e12 = mats_.make(o, one, o, o);
        const Mat2 e21 = mats_.make(o, o, one, o);
        const Mat2 w = mats_.make(m1, one, m1, one);
        auto pairs = [&](unsigned t) {
            std::vector<Mat2> out;
            for (unsigned i = 0; i < t; ++i) {
                out.push_back(e12);
                out.push_back(e21);
            }
            return out;
        };
        auto append = [](std::vector<Mat2> head, std::initializer_list<Mat2> tail) {
            head.insert(head.end(), tail);
            return head;
        };

        if (r.in_radical(a)) {
            const Mat2 m = mats_.m_ab(a, b);
            if (s % 2 == 1) return append(pairs((s - 1) / 2), {m});
            // E12 E21 = E12 W E21 turns one pair into three factors.
            auto out = pairs(s / 2 - 2);
            out.insert(out.begin(), {e12, w, e21});
            out.push_back(m);
            return out;
        }
        if (r.in_radical(b)) {
            const Mat2 y = mats_.make(o, o, a, b);
            if (s % 2 == 1) return append(pairs((s - 3) / 2), {e12, w, y});
            return append(pairs((s - 4) / 2), {e12, e21, w, y});
        }
        const Mat2 c = mats_.make(one, r.mul(r.inverse(a), b), r.neg(r.mul(r.inverse(b), a)), m1);
        if (s % 2 == 1) return append(pairs((s - 3) / 2), {e12, mats_.make(o, o, a, o), c});
        return append(pairs((s - 4) / 2), {e12, mats_.make(o, o, r.neg(b), o), e12, c});
    }

    NilFactorization decompose(const Mat2& target, unsigned s) const {
        if (s == 0) throw std::invalid_argument("s must be >= 1");
        const Ring& r = ring();
        NilFactorization out;
        out.target = target;
        out.conjugator = mats_.identity();

        if (s == 1) {
            if (!mats_.is_nilpotent(target)) throw DecompositionRefused(Refusal::NotNilpotent);
            out.factors = {target};
            return verified(std::move(out));
        }

        const auto cert = orbits_.in_m_orbit(target);
        if (s == 2) {
            const Elem o = r.zero();
            const Mat2 e12 = mats_.make(o, r.one(), o, o);
            if (target == mats_.zero()) {
                out.factors = {e12, e12};
                return verified(std::move(out));
            }
            if (cert && r.is_unit(cert->a)) {
                // M(a, b) = E12 [[-b, -a^{-1} b^2], [a, b]]
                const Elem a = cert->a, b = cert->b;
                const Mat2 second = mats_.make(r.neg(b), r.neg(r.mul(r.inverse(a), r.mul(b, b))), a, b);
                out.factors = {e12, second};
                out.conjugator = cert->conjugator;
                conjugate_factors(out);
                return verified(std::move(out));
            }
            if (r.n() == 1) {
                if (!cert) throw DecompositionRefused(Refusal::NotInOrbitUnion);
                throw DecompositionRefused(Refusal::TraceObstruction);
            }
            // n >= 2: S_2 is not described by the orbit union; search directly.
            if (auto pair = search_pair(target)) {
                out.factors = *pair;
                return verified(std::move(out));
            }
            throw DecompositionRefused(Refusal::NoFactorization);
        }

        if (!cert) throw DecompositionRefused(Refusal::NotInOrbitUnion);
        out.factors = factor_m_ab(cert->a, cert->b, s);
        out.conjugator = cert->conjugator;
        conjugate_factors(out);
        return verified(std::move(out));
    }

    /// Every factor nilpotent and the ordered product equal to the target.
    bool check(const NilFactorization& f) const {
        if (f.factors.empty()) return false;
        for (const auto& m : f.factors)
            if (!mats_.is_nilpotent(m)) return false;
        return mats_.product(f.factors) == f.target;
    }

    SharpnessCertificate sharpness_example() const {
        const Ring& r = ring();
        const unsigned n = r.n();
        if (n < 2) throw std::domain_error("example inapplicable: requires n >= 2");
        const Elem nm1 = r.from_int(n - 1);
        if (!r.is_unit(nm1)) throw std::domain_error("example inapplicable: n - 1 is not a unit");
        const Elem x = r.uniformizer(), o = r.zero();
        const Mat2 n1 = mats_.make(x, r.one(), r.mul(nm1, x), o);
        const Mat2 n2 = mats_.make(o, r.inverse(nm1), x, o);
        const Elem xn = r.pow(x, n - 1);

        SharpnessCertificate out;
        out.target = mats_.make(xn, xn, o, xn);
        for (unsigned i = 0; i + 1 < n; ++i) {
            out.factors.push_back(n1);
            out.factors.push_back(n2);
        }
        out.factors_nilpotent = mats_.is_nilpotent(n1) && mats_.is_nilpotent(n2);
        out.product_matches = mats_.product(out.factors) == out.target;
        out.in_orbit_union = orbits_.in_m_orbit(out.target).has_value();
        return out;
    }

    /// Samples products X of 2n - 3 uniformly random nilpotents. Whenever the
    /// second row of X lies in J^{n-1} and the first row has valuations
    /// l = v(X11) < k = v(X12) <= n - 2, X22 must vanish.
    DeterScan deter_obstruction_scan(std::uint64_t samples, std::uint64_t seed = kDefaultSeed) const {
        const Ring& r = ring();
        const unsigned n = r.n();
        DeterScan out;
        if (n < 3) {
            out.note = "hypothesis unsatisfiable for n=" + std::to_string(n);
            return out;
        }
        if (samples == 0) return out;
        const auto& nil = nilpotents();
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, nil.size() - 1);
        for (std::uint64_t i = 0; i < samples; ++i) {
            Mat2 x = nil[pick(rng)];
            for (unsigned f = 1; f < 2 * n - 3; ++f) x = mats_.mul(x, nil[pick(rng)]);
            ++out.samples;
            const unsigned l = r.valuation(x.a11()), k = r.valuation(x.a12());
            if (r.valuation(x.a21()) < n - 1 || r.valuation(x.a22()) < n - 1) continue;
            if (!(l < k && k <= n - 2)) continue;
            ++out.hypothesis_hits;
            if (x.a22() != r.zero()) out.violations.push_back(x);
        }
        return out;
    }

private:
    struct Cache {
        std::once_flag nil_once;
        std::vector<Mat2> nil;
    };

    CensusReport blank_report(unsigned s, CensusMethod method) const {
        CensusReport report;
        report.ring = ring().name();
        report.q = ring().q();
        report.n = ring().n();
        report.s = s;
        report.method = method;
        return report;
    }
    static double elapsed_since(std::chrono::steady_clock::time_point start) {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }

    void conjugate_factors(NilFactorization& f) const {
        for (auto& m : f.factors) m = orbits_.conjugate(m, f.conjugator);
    }

    NilFactorization verified(NilFactorization f) const {
        if (!check(f)) throw std::logic_error("factorization failed verification");
        return f;
    }

    std::optional<std::vector<Mat2>> search_pair(const Mat2& target) const {
        const auto& nil = nilpotents();
        for (const auto& a : nil)
            for (const auto& b : nil)
                if (mats_.mul(a, b) == target) return std::vector<Mat2>{a, b};
        return std::nullopt;
    }

    MatrixRing mats_;
    OrbitEngine orbits_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace nilquat
