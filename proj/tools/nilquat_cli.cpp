// nilquat: censuses, factorizations and invariant suites for products of
// nilpotents in M_2(R) ~ H(R) over finite chain rings.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nilquat/report.hpp"
#include "nilquat/verify.hpp"

namespace {

using namespace nilquat;

enum Exit : int {
    kOk = 0,
    kInvalidInput = 1,
    kCapExceeded = 2,
    kTraceObstruction = 3,
    kNotInUnion = 4,
    kNotNilpotent = 5,
    kNoFactorization = 6,
    kFailed = 7,
};

struct Common {
    std::string ring;
    std::uint64_t cap = kDefaultCap;
    unsigned threads = 1;
    std::string format = "json";
    std::string out;
    bool stable = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_ring = true) {
    if (with_ring) cmd->add_option("--ring", c.ring, "ring spec: zmod:p^n or polyq:p^r^n")->required();
    cmd->add_option("--cap", c.cap, "maximum q^(4n) for exhaustive enumeration")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    cmd->add_option("--out", c.out, "write output to this file instead of stdout");
    cmd->add_flag("--stable-output", c.stable, "omit volatile fields (timings)");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

NilFactorEngine make_engine(const Common& c) {
    return NilFactorEngine(Ring(RingSpec::parse(c.ring)), EngineOptions{c.cap, c.threads});
}

CensusReport run_census(const NilFactorEngine& eng, unsigned s, CensusMethod method) {
    switch (method) {
        case CensusMethod::SetProduct: return eng.census_set_product(s);
        case CensusMethod::OrbitUnion: return eng.census_orbit_union(s);
        case CensusMethod::FormulaOnly: return eng.census_formula(s);
    }
    throw std::logic_error("unreachable");
}

void print_census(std::ostream& os, const CensusReport& r, const Common& c) {
    if (c.format == "csv") {
        os << kCsvHeader << '\n' << csv_row(r) << '\n';
    } else if (c.format == "text") {
        os << r.ring << " s=" << r.s << " method=" << to_string(r.method) << " brute=";
        if (r.brute_count) os << *r.brute_count; else os << '-';
        os << " formula=";
        if (r.formula_count) os << *r.formula_count; else os << '-';
        os << " match=" << (r.match ? (*r.match ? "true" : "false") : "-") << '\n';
    } else {
        os << census_to_json(r, c.stable).dump() << '\n';
    }
}

int cmd_census(const Common& c, unsigned s, const std::string& method) {
    const auto eng = make_engine(c);
    const CensusReport r = run_census(eng, s, parse_census_method(method));
    Output out(c.out);
    print_census(out.stream(), r, c);
    return (!r.match || *r.match) ? kOk : kFailed;
}

int cmd_decompose(const Common& c, const std::string& matrix, unsigned s) {
    const auto eng = make_engine(c);
    const Mat2 target = eng.matrices().parse(matrix);
    Output out(c.out);
    try {
        const NilFactorization f = eng.decompose(target, s);
        out.stream() << factorization_to_json(eng.matrices(), f, eng.check(f)).dump() << '\n';
        return kOk;
    } catch (const DecompositionRefused& e) {
        ordered_json j;
        j["target"] = eng.matrices().render(target);
        j["s"] = s;
        j["refused"] = e.what();
        out.stream() << j.dump() << '\n';
        std::cerr << "nilquat: " << e.what() << '\n';
        switch (e.reason()) {
            case Refusal::TraceObstruction: return kTraceObstruction;
            case Refusal::NotInOrbitUnion: return kNotInUnion;
            case Refusal::NotNilpotent: return kNotNilpotent;
            case Refusal::NoFactorization: return kNoFactorization;
        }
        return kFailed;
    }
}

int cmd_verify(const Common& c, const std::string& suite, const VerifyOptions& opt) {
    const auto eng = make_engine(c);
    const auto results = run_suite(eng, suite, opt);
    Output out(c.out);
    bool ok = true;
    if (c.format == "json") {
        ordered_json j;
        j["ring"] = eng.ring().name();
        j["suite"] = suite;
        j["checks"] = ordered_json::array();
        for (const auto& r : results) {
            ok = ok && r.ok();
            j["checks"].push_back({{"name", r.name}, {"checked", r.checked}, {"violations", r.violations},
                                   {"skipped", r.skipped}, {"detail", r.detail}});
        }
        j["pass"] = ok;
        out.stream() << j.dump(2) << '\n';
    } else {
        for (const auto& r : results) {
            ok = ok && r.ok();
            out.stream() << (r.skipped ? "[skip] " : r.ok() ? "[ok]   " : "[FAIL] ") << r.name << ": checked " << r.checked
                         << ", violations " << r.violations;
            if (!r.detail.empty()) out.stream() << " (" << r.detail << ")";
            out.stream() << '\n';
        }
        out.stream() << (ok ? "PASS" : "FAIL") << ' ' << eng.ring().name() << " suite=" << suite << '\n';
    }
    return ok ? kOk : kFailed;
}

std::pair<unsigned, unsigned> parse_range(const std::string& text) {
    auto dots = text.find("..");
    auto to_uint = [&](std::string_view v) {
        auto parsed = nilquat::detail::parse_uint(v);
        if (!parsed || *parsed == 0) throw std::invalid_argument("bad s range '" + text + "', expected a..b");
        return static_cast<unsigned>(*parsed);
    };
    if (dots == std::string::npos) {
        unsigned v = to_uint(text);
        return {v, v};
    }
    auto lo = to_uint(std::string_view(text).substr(0, dots));
    auto hi = to_uint(std::string_view(text).substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("bad s range '" + text + "'");
    return {lo, hi};
}

int cmd_table(const Common& c, const std::vector<std::string>& rings, const std::string& range, const std::string& method) {
    const auto [lo, hi] = parse_range(range);
    const CensusMethod m = parse_census_method(method);
    Output out(c.out);
    out.stream() << kCsvHeader << '\n';
    for (const auto& spec : rings) {
        std::optional<NilFactorEngine> eng;
        std::string ring_error;
        try {
            eng.emplace(Ring(RingSpec::parse(spec)), EngineOptions{c.cap, c.threads});
        } catch (const std::exception& e) {
            ring_error = e.what();
        }
        for (unsigned s = lo; s <= hi; ++s) {
            CensusReport r;
            r.ring = spec;
            r.s = s;
            r.method = m;
            std::string error = ring_error;
            if (eng) {
                r.q = eng->ring().q();
                r.n = eng->ring().n();
                try {
                    r = run_census(*eng, s, m);
                } catch (const std::exception& e) {
                    error = e.what();
                }
            }
            for (auto& ch : error)
                if (ch == ',' || ch == '\n') ch = ';';
            out.stream() << csv_row(r, error) << '\n';
        }
    }
    return kOk;
}

int cmd_export_union(const Common& c, const std::string& bitset_path) {
    const auto eng = make_engine(c);
    const OrbitUnion& u = eng.orbits().m_orbit_union();
    {
        std::ofstream f(bitset_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + bitset_path);
        write_bitset(f, eng.ring().name(), u.members);
    }
    Output out(c.out);
    out.stream() << union_summary_json(eng.ring().name(), u).dump() << '\n';
    return kOk;
}

int cmd_enumerate(const Common& c, const std::string& kind, bool binary) {
    const auto eng = make_engine(c);
    const MatrixRing& mats = eng.matrices();
    std::vector<std::uint64_t> idx;
    if (kind == "nilpotent") {
        for (const auto& m : eng.nilpotents()) idx.push_back(mats.pack(m));
    } else if (kind == "invertible") {
        for (const auto& m : eng.orbits().invertibles()) idx.push_back(mats.pack(m));
    } else {
        idx = eng.orbits().m_orbit_union().members.members();
    }
    Output out(c.out);
    write_packed_indices(out.stream(), idx, binary);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nilquat: products of nilpotents over finite chain rings"};
    app.require_subcommand(1);

    Common common;
    unsigned s = 1;
    std::string method = "set-product";
    std::string matrix, suite = "all", range = "1..4", bitset_path, kind = "nilpotent";
    std::vector<std::string> rings;
    VerifyOptions vopt;
    bool binary = false;

    auto* census = app.add_subcommand("census", "count products of s nilpotents");
    add_common(census, common);
    census->add_option("--s", s, "number of factors")->required()->check(CLI::PositiveNumber);
    census->add_option("--method", method)->check(CLI::IsMember({"set-product", "orbit-union", "formula"}))->capture_default_str();

    auto* decompose = app.add_subcommand("decompose", "factor a matrix into s nilpotents");
    add_common(decompose, common);
    decompose->add_option("--matrix", matrix, "[[a,b],[c,d]]")->required();
    decompose->add_option("--s", s, "number of factors")->required()->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "run invariant suites");
    add_common(verify, common);
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    verify->add_option("--suite", suite)->check(CLI::IsMember(suites))->capture_default_str();
    verify->add_option("--samples", vopt.samples, "random samples for sampled checks")->capture_default_str();
    verify->add_option("--seed", vopt.seed, "random seed")->capture_default_str();

    auto* table = app.add_subcommand("table", "CSV of censuses over rings and s values");
    add_common(table, common, false);
    table->add_option("--ring", rings, "ring spec (repeatable or comma separated)")->required()->delimiter(',');
    table->add_option("--s", range, "s or a..b")->capture_default_str();
    table->add_option("--method", method)->check(CLI::IsMember({"set-product", "orbit-union", "formula"}))->capture_default_str();

    auto* exp = app.add_subcommand("export-union", "write the orbit-union bitset and print its summary");
    add_common(exp, common);
    exp->add_option("--bitset", bitset_path, "bitset output path")->required();

    auto* enumerate = app.add_subcommand("enumerate", "write packed indices of a matrix family");
    add_common(enumerate, common);
    enumerate->add_option("--kind", kind)->check(CLI::IsMember({"nilpotent", "invertible", "union"}))->capture_default_str();
    enumerate->add_flag("--binary", binary, "little-endian u64 instead of decimal lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (census->parsed()) return cmd_census(common, s, method);
        if (decompose->parsed()) return cmd_decompose(common, matrix, s);
        if (verify->parsed()) return cmd_verify(common, suite, vopt);
        if (table->parsed()) return cmd_table(common, rings, range, method);
        if (exp->parsed()) return cmd_export_union(common, bitset_path);
        if (enumerate->parsed()) return cmd_enumerate(common, kind, binary);
    } catch (const CapExceeded& e) {
        std::cerr << "nilquat: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const std::exception& e) {
        std::cerr << "nilquat: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}
