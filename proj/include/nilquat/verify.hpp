#pragma once

// Invariant suites over a single ring. Each check reports how many cases it
// examined and every violation it found; the CLI and the acceptance driver
// both run these.

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nilquat/nilfactor.hpp"
#include "nilquat/quaternion.hpp"

namespace nilquat {

struct CheckResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string detail;
    bool skipped = false;

    CheckResult() = default;
    explicit CheckResult(std::string n) : name(std::move(n)) {}

    bool ok() const { return violations == 0; }
};

struct VerifyOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = kDefaultSeed;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"axioms", "iso",     "lemma33", "lemma34",   "lemma35", "lemma36",
                                                "lemma37", "lemma311", "thm38",  "cor310", "example39", "thm312"};
    return names;
}

namespace detail {

// Exhaustive below these sizes, random sampling above.
inline constexpr std::uint32_t kExhaustiveRing = 81;
inline constexpr std::uint64_t kExhaustivePairs = 2'000'000;

inline CheckResult skipped(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.detail = std::move(why);
    c.skipped = true;
    return c;
}

inline std::string eq_detail(std::uint64_t lhs, const BigInt& rhs) {
    std::ostringstream os;
    os << lhs << (BigInt(lhs) == rhs ? " = " : " != ") << rhs;
    return os.str();
}

class Suites {
public:
    Suites(const NilFactorEngine& engine, VerifyOptions opt)
        : eng_(engine), mats_(engine.matrices()), ring_(engine.ring()), opt_(opt), rng_(opt.seed) {}

    std::vector<CheckResult> run(const std::string& suite) {
        if (suite == "all") {
            std::vector<CheckResult> out;
            for (const auto& s : suite_names()) {
                auto part = run(s);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        if (suite == "axioms") return axioms();
        if (suite == "iso") return iso();
        if (suite == "lemma33") return nilpotency_criteria();
        if (suite == "lemma34") return orbit_shapes();
        if (suite == "lemma35") return conjugation_identities();
        if (suite == "lemma36") return union_closure();
        if (suite == "lemma37") return valuation_scan();
        if (suite == "lemma311") return trace_obstruction();
        if (suite == "thm38") return union_containment();
        if (suite == "cor310") return union_equality();
        if (suite == "example39") return sharpness();
        if (suite == "thm312") return census_formula();
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }

private:
    Elem random_elem() { return {static_cast<std::uint32_t>(rng_() % ring_.size())}; }
    Mat2 random_mat() { return mats_.make(random_elem(), random_elem(), random_elem(), random_elem()); }

    // Calls fn(a, b, c) on every triple when the ring is small, else on
    // `samples` random triples.
    template <class Fn>
    std::uint64_t for_triples(std::uint64_t samples, Fn fn) {
        if (ring_.size() <= kExhaustiveRing) {
            const auto all = ring_.elements();
            for (auto a : all)
                for (auto b : all)
                    for (auto c : all) fn(a, b, c);
            return static_cast<std::uint64_t>(all.size()) * all.size() * all.size();
        }
        for (std::uint64_t i = 0; i < samples; ++i) fn(random_elem(), random_elem(), random_elem());
        return samples;
    }

    std::vector<CheckResult> axioms() {
        const Ring& r = ring_;
        std::vector<CheckResult> out;

        CheckResult ax{"ring axioms"};
        ax.checked = for_triples(10000, [&](Elem a, Elem b, Elem c) {
            bool good = r.add(r.add(a, b), c) == r.add(a, r.add(b, c)) && r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)) &&
                        r.add(a, b) == r.add(b, a) && r.mul(a, b) == r.mul(b, a) &&
                        r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)) && r.add(a, r.zero()) == a &&
                        r.mul(a, r.one()) == a && r.add(a, r.neg(a)) == r.zero();
            if (!good) ++ax.violations;
        });
        out.push_back(ax);

        CheckResult val{"valuation of products"};
        val.checked = for_triples(10000, [&](Elem a, Elem b, Elem) {
            if (r.valuation(r.mul(a, b)) != std::min(r.valuation(a) + r.valuation(b), r.n())) ++val.violations;
        });
        if (r.size() <= kExhaustiveRing) val.checked /= r.size();
        out.push_back(val);

        CheckResult units{"unit + radical is a unit"};
        const auto radical = r.ideal(1);
        for (auto u : r.elements()) {
            if (!r.is_unit(u)) continue;
            if (r.size() > kExhaustiveRing && units.checked > 200000) break;
            for (auto j : radical) {
                ++units.checked;
                if (!r.is_unit(r.add(u, j)) || r.mul(u, r.inverse(u)) != r.one()) ++units.violations;
            }
        }
        out.push_back(units);

        CheckResult filt{"ideal filtration J^k = (pi^k), |J^k| = q^(n-k)"};
        for (unsigned k = 0; k <= r.n(); ++k) {
            ++filt.checked;
            auto ideal = r.ideal(k);
            std::set<Elem> generated;
            const Elem pk = r.pow(r.uniformizer(), k);
            for (auto x : r.elements()) generated.insert(r.mul(pk, x));
            std::set<Elem> listed(ideal.begin(), ideal.end());
            if (listed != generated || ideal.size() != detail::ipow(r.q(), r.n() - k)) ++filt.violations;
        }
        out.push_back(filt);

        CheckResult sos{"a^2 + b^2 = -1 with a a unit"};
        auto [a, b] = r.solve_sum_of_squares();
        sos.checked = 1;
        if (r.add(r.add(r.mul(a, a), r.mul(b, b)), r.one()) != r.zero() || !r.is_unit(a)) sos.violations = 1;
        sos.detail = "(a,b) = (" + r.render(a) + "," + r.render(b) + ")";
        out.push_back(sos);
        return out;
    }

    std::vector<CheckResult> iso() {
        std::vector<CheckResult> out;
        QuaternionRing h(ring_);
        QuaternionIso phi(mats_);
        const Mat2 minus_id = mats_.neg(mats_.identity());
        const auto& basis = phi.basis();

        CheckResult rel{"phi(i)^2 = phi(j)^2 = phi(k)^2 = phi(i)phi(j)phi(k) = -I"};
        rel.checked = 4;
        for (int t = 1; t < 4; ++t)
            if (mats_.mul(basis[t], basis[t]) != minus_id) ++rel.violations;
        if (mats_.mul(mats_.mul(basis[1], basis[2]), basis[3]) != minus_id) ++rel.violations;
        out.push_back(rel);

        const std::uint64_t hsize = mats_.matrix_count();
        auto random_q = [&]() { return h.make(random_elem(), random_elem(), random_elem(), random_elem()); };
        CheckResult hom{"to_mat is a ring homomorphism"};
        auto check_pair = [&](const Quaternion& x, const Quaternion& y) {
            ++hom.checked;
            if (phi.to_mat(h.mul(x, y)) != mats_.mul(phi.to_mat(x), phi.to_mat(y)) ||
                phi.to_mat(h.add(x, y)) != mats_.add(phi.to_mat(x), phi.to_mat(y)))
                ++hom.violations;
        };
        if (hsize * hsize <= 81 * 81) {
            for (std::uint64_t i = 0; i < hsize; ++i)
                for (std::uint64_t j = 0; j < hsize; ++j) check_pair(h.unpack(i), h.unpack(j));
        } else {
            for (std::uint64_t i = 0; i < opt_.samples; ++i) check_pair(random_q(), random_q());
        }
        if (phi.to_mat(h.one()) != mats_.identity()) ++hom.violations;
        out.push_back(hom);

        CheckResult bij{"to_mat / from_mat are inverse bijections"};
        if (hsize <= eng_.orbits().options().cap) {
            PackedSet image(hsize);
            for (std::uint64_t i = 0; i < hsize; ++i) {
                const Quaternion x = h.unpack(i);
                const Mat2 m = phi.to_mat(x);
                image.set(mats_.pack(m));
                if (phi.from_mat(m) != x) ++bij.violations;
                ++bij.checked;
            }
            if (image.count() != hsize) ++bij.violations;
            bij.detail = std::to_string(image.count()) + " distinct images of " + std::to_string(hsize);
        } else {
            for (std::uint64_t i = 0; i < opt_.samples; ++i) {
                const Quaternion x = random_q();
                const Mat2 m = random_mat();
                if (phi.from_mat(phi.to_mat(x)) != x || phi.to_mat(phi.from_mat(m)) != m) ++bij.violations;
                ++bij.checked;
            }
        }
        out.push_back(bij);
        return out;
    }

    std::vector<CheckResult> nilpotency_criteria() {
        std::vector<CheckResult> out;
        const Ring& r = ring_;
        mats_.require_cap(eng_.orbits().options().cap);
        // Class membership by the definition: A minus a representative built
        // from residue-field witnesses lies in M_2(J).
        std::vector<Mat2> reps{mats_.zero()};
        for (std::uint32_t u = 1; u < r.q(); ++u) {
            reps.push_back(mats_.representative(NilKind::UpperUnit, r.lift(u), {}));
            reps.push_back(mats_.representative(NilKind::LowerUnit, r.lift(u), {}));
            for (std::uint32_t v = 1; v < r.q(); ++v)
                reps.push_back(mats_.representative(NilKind::UnitTrace, r.lift(u), r.lift(v)));
        }
        CheckResult equiv{"nilpotent: tr,det in J <=> A^(2n) = 0 <=> class membership"};
        CheckResult part{"classification is an exact partition"};
        std::uint64_t nil_count = 0;
        const std::uint64_t total = mats_.matrix_count();
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const Mat2 m = mats_.unpack(idx);
            const bool fast = mats_.is_nilpotent(m);
            const bool powers = mats_.is_nilpotent_by_powers(m);
            unsigned classes = 0;
            for (const auto& rep : reps)
                if (mats_.in_radical_power(mats_.sub(m, rep), 1)) ++classes;
            ++equiv.checked;
            if (fast != powers || powers != (classes > 0)) ++equiv.violations;
            if (!fast) continue;
            ++nil_count;
            ++part.checked;
            const NilClass c = mats_.classify(m);
            if (classes != 1 || mats_.reconstruct(c) != m || !mats_.in_radical_power(c.perturbation, 1)) ++part.violations;
        }
        out.push_back(equiv);
        out.push_back(part);

        CheckResult count{"|N(M2(R))| = q^(2(2n-1))"};
        count.checked = 1;
        const BigInt expected = nilpotent_formula(r.q(), r.n());
        if (BigInt(nil_count) != expected) count.violations = 1;
        count.detail = eq_detail(nil_count, expected);
        out.push_back(count);
        return out;
    }

    std::vector<CheckResult> orbit_shapes() {
        const Ring& r = ring_;
        const unsigned n = r.n();
        const auto& u = eng_.orbits().m_orbit_union().members;
        std::vector<CheckResult> out;

        CheckResult first{"[[t,j1],[j2,0]] with v(t) < v(j1), j2 in J^(n-1) is in the orbit union"};
        const auto top = r.ideal(n - 1);
        for (auto t : r.elements())
            for (auto j1 : r.elements()) {
                if (!(r.valuation(t) < r.valuation(j1))) continue;
                for (auto j2 : top) {
                    ++first.checked;
                    if (!u.test(mats_.pack(mats_.make(t, j1, j2, r.zero())))) ++first.violations;
                }
            }
        out.push_back(first);

        CheckResult second{"[[0,j1],[0,j2]] with j1, j2 in J^(n-1) is in the orbit union"};
        for (auto j1 : top)
            for (auto j2 : top) {
                ++second.checked;
                if (!u.test(mats_.pack(mats_.make(r.zero(), j1, r.zero(), j2)))) ++second.violations;
            }
        out.push_back(second);
        return out;
    }

    std::vector<CheckResult> conjugation_identities() {
        const Ring& r = ring_;
        const auto& orb = eng_.orbits();
        std::vector<CheckResult> out;
        const bool exhaustive = r.size() <= 9;
        auto elems = [&]() {
            if (exhaustive) return r.elements();
            std::vector<Elem> sample;
            for (int i = 0; i < 60; ++i) sample.push_back(random_elem());
            return sample;
        }();

        CheckResult t_units{"T_t^-1 M(a,b) T_t = M(a, b + a t) for units t"};
        CheckResult t_all{"same identity for all t (not only units)"};
        for (auto a : elems)
            for (auto b : elems)
                for (auto t : elems) {
                    const bool holds = orb.conjugate(mats_.m_ab(a, b), Conjugator::translation(mats_, t)) ==
                                       mats_.m_ab(a, r.add(b, r.mul(a, t)));
                    ++t_all.checked;
                    if (!holds) ++t_all.violations;
                    if (r.is_unit(t)) {
                        ++t_units.checked;
                        if (!holds) ++t_units.violations;
                    }
                }
        out.push_back(t_units);
        out.push_back(t_all);

        CheckResult second{"T_(v/u)^-1 [[u,-v],[u^2/v,-u]] T_(v/u) = [[0,0],[u^2/v,0]]"};
        for (auto uu : elems)
            for (auto vv : elems) {
                if (!r.is_unit(uu) || !r.is_unit(vv)) continue;
                ++second.checked;
                const Mat2 rep = mats_.representative(NilKind::UnitTrace, uu, vv);
                const Conjugator t = Conjugator::translation(mats_, r.mul(vv, r.inverse(uu)));
                const Mat2 want = mats_.make(r.zero(), r.zero(), r.mul(r.inverse(vv), r.mul(uu, uu)), r.zero());
                if (orb.conjugate(rep, t) != want) ++second.violations;
            }
        out.push_back(second);

        CheckResult valpha{"V_alpha invertible for units alpha"};
        for (auto alpha : elems) {
            if (!r.is_unit(alpha)) continue;
            ++valpha.checked;
            if (!mats_.is_invertible(Conjugator::scaling(mats_, alpha).matrix)) ++valpha.violations;
        }
        out.push_back(valpha);
        return out;
    }

    std::vector<CheckResult> union_closure() {
        const auto& u = eng_.orbits().m_orbit_union().members;
        const auto members = u.members();
        const std::uint64_t total = mats_.matrix_count();
        CheckResult c{"orbit union is closed under right multiplication"};
        if (members.size() * total <= kExhaustivePairs) {
            for (auto ai : members) {
                const Mat2 a = mats_.unpack(ai);
                for (std::uint64_t bi = 0; bi < total; ++bi) {
                    ++c.checked;
                    if (!u.test(mats_.pack(mats_.mul(a, mats_.unpack(bi))))) ++c.violations;
                }
            }
            c.detail = "exhaustive";
        } else {
            for (std::uint64_t i = 0; i < opt_.samples; ++i) {
                const Mat2 a = mats_.unpack(members[rng_() % members.size()]);
                ++c.checked;
                if (!u.test(mats_.pack(mats_.mul(a, random_mat())))) ++c.violations;
            }
            c.detail = "random pairs";
        }
        return {c};
    }

    std::vector<CheckResult> valuation_scan() {
        CheckResult c{"sampled products of 2n-3 nilpotents: hypothesis => X22 = 0"};
        const DeterScan scan = eng_.deter_obstruction_scan(opt_.samples, opt_.seed);
        c.checked = scan.samples;
        c.violations = scan.violations.size();
        c.detail = scan.note.empty() ? std::to_string(scan.hypothesis_hits) + " samples met the hypothesis" : scan.note;
        return {c};
    }

    std::vector<CheckResult> trace_obstruction() {
        if (ring_.n() != 1) return {skipped("trace obstruction", "field case only (n = 1)")};
        const auto& nil = eng_.nilpotents();
        CheckResult c{"nonzero products of two nilpotents have nonzero trace"};
        for (const auto& a : nil)
            for (const auto& b : nil) {
                const Mat2 p = mats_.mul(a, b);
                ++c.checked;
                if (p != mats_.zero() && mats_.trace(p) == ring_.zero()) ++c.violations;
            }
        return {c};
    }

    unsigned lowest_characterized() const { return ring_.n() == 1 ? 3 : 2 * ring_.n() - 1; }

    const std::vector<PackedSet>& products() {
        if (products_.empty()) products_ = eng_.product_sets(2 * ring_.n() + 2);
        return products_;
    }

    std::vector<CheckResult> union_containment() {
        const auto& u = eng_.orbits().m_orbit_union().members;
        CheckResult c{"S_s is contained in the orbit union for s >= 2n-1"};
        for (unsigned s = 2 * ring_.n() - 1; s <= 2 * ring_.n() + 2; ++s) {
            ++c.checked;
            if (!products()[s - 1].is_subset_of(u)) ++c.violations;
        }
        return {c};
    }

    std::vector<CheckResult> union_equality() {
        const auto& orb = eng_.orbits();
        const auto& u = orb.m_orbit_union().members;
        std::vector<CheckResult> out;
        CheckResult eq{"S_s equals the orbit union as bitsets"};
        for (unsigned s = lowest_characterized(); s <= 2 * ring_.n() + 2; ++s) {
            ++eq.checked;
            if (products()[s - 1] != u) ++eq.violations;
        }
        eq.detail = "|union| = " + std::to_string(u.count());
        out.push_back(eq);

        CheckResult dec{"every orbit-union member factors into s nilpotents"};
        u.for_each([&](std::uint64_t idx) {
            const Mat2 a = mats_.unpack(idx);
            const auto cert = orb.in_m_orbit(a);
            if (!cert || !orb.certifies(a, *cert)) {
                ++dec.violations;
                return;
            }
            for (unsigned s = lowest_characterized(); s <= 2 * ring_.n() + 2; ++s) {
                ++dec.checked;
                NilFactorization f;
                f.target = a;
                f.factors = eng_.factor_m_ab(cert->a, cert->b, s);
                for (auto& m : f.factors) m = orb.conjugate(m, cert->conjugator);
                if (f.factors.size() != s || !eng_.check(f)) ++dec.violations;
            }
        });
        out.push_back(dec);
        return out;
    }

    std::vector<CheckResult> sharpness() {
        if (ring_.n() < 2 || !ring_.is_unit(ring_.from_int(ring_.n() - 1)))
            return {skipped("sharpness target", "requires n >= 2 with n - 1 a unit")};
        CheckResult c{"sharpness target: 2n-2 nilpotent factors, outside the orbit union"};
        const auto cert = eng_.sharpness_example();
        c.checked = 1;
        if (!cert.factors_nilpotent || !cert.product_matches || cert.in_orbit_union ||
            cert.factors.size() != 2 * ring_.n() - 2)
            c.violations = 1;
        c.detail = "target " + mats_.render(cert.target);

        CheckResult refuse{"decompose at s = 2n-1 refuses the sharpness target"};
        refuse.checked = 1;
        try {
            eng_.decompose(cert.target, 2 * ring_.n() - 1);
            refuse.violations = 1;
        } catch (const DecompositionRefused& e) {
            if (e.reason() != Refusal::NotInOrbitUnion) refuse.violations = 1;
        }
        CheckResult member{"sharpness target lies in S_(2n-2)"};
        member.checked = 1;
        if (!products()[2 * ring_.n() - 3].test(mats_.pack(cert.target))) member.violations = 1;
        return {c, refuse, member};
    }

    std::vector<CheckResult> census_formula() {
        const Ring& r = ring_;
        std::vector<CheckResult> out;
        CheckResult census{"set-product census equals the closed form"};
        std::ostringstream detail;
        for (unsigned s = 1; s <= 2 * r.n() + 2; ++s) {
            auto f = formula_if_applicable(r.q(), r.n(), s);
            if (!f) continue;
            ++census.checked;
            const std::uint64_t brute = products()[s - 1].count();
            if (BigInt(brute) != *f) ++census.violations;
            detail << "s=" << s << ": " << eq_detail(brute, *f) << "; ";
        }
        census.detail = detail.str();
        out.push_back(census);

        CheckResult h{"nilpotents of H(R) via the isomorphism"};
        QuaternionRing hr(r);
        QuaternionIso phi(mats_);
        std::uint64_t hn = 0;
        for (std::uint64_t i = 0; i < mats_.matrix_count(); ++i)
            if (phi.is_nilpotent(hr.unpack(i))) ++hn;
        h.checked = mats_.matrix_count();
        const BigInt expected = nilpotent_formula(r.q(), r.n());
        if (BigInt(hn) != expected) h.violations = 1;
        h.detail = eq_detail(hn, expected);
        out.push_back(h);

        CheckResult sing{"non-invertible count"};
        sing.checked = 1;
        const std::uint64_t gl = eng_.orbits().invertibles().size();
        const BigInt q = r.q();
        const BigInt gl_formula = big_pow(q, 4 * (r.n() - 1)) * (q * q - 1) * (q * q - q);
        if (BigInt(gl) != gl_formula) sing.violations = 1;
        sing.detail = std::to_string(mats_.matrix_count() - gl) + " non-invertible";
        out.push_back(sing);

        CheckResult div{"(q+2)q^(3n+1) + q^3 + q^2 + 1 divisible by q^2+q+1"};
        for (std::uint64_t p : {3, 5, 7, 11, 13})
            for (unsigned e = 1; e <= 3; ++e)
                for (unsigned n = 1; n <= 6; ++n) {
                    ++div.checked;
                    const std::uint64_t qq = detail::ipow(p, e);
                    if (formula_numerator(qq, n) % formula_denominator(qq) != 0) ++div.violations;
                }
        out.push_back(div);
        return out;
    }

    const NilFactorEngine& eng_;
    const MatrixRing& mats_;
    const Ring& ring_;
    VerifyOptions opt_;
    std::mt19937_64 rng_;
    std::vector<PackedSet> products_;
};

}  // namespace detail

inline std::vector<CheckResult> run_suite(const NilFactorEngine& engine, const std::string& suite,
                                          const VerifyOptions& options = {}) {
    detail::Suites suites(engine, options);
    return suites.run(suite);
}

}  // namespace nilquat
