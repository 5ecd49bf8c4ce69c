#pragma once

// Serialization: census / factorization JSON, census CSV rows, orbit-union
// bitset files and packed-index bulk files.

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilquat/nilfactor.hpp"

namespace nilquat {

using ordered_json = nlohmann::ordered_json;

inline ordered_json big_to_json(const BigInt& v) {
    if (v >= 0 && v <= BigInt(UINT64_MAX)) return static_cast<std::uint64_t>(v);
    return v.str();
}

/// Key order is fixed; `stable` drops the timing field.
inline ordered_json census_to_json(const CensusReport& r, bool stable) {
    ordered_json j;
    j["ring"] = r.ring;
    j["q"] = r.q;
    j["n"] = r.n;
    j["s"] = r.s;
    j["brute_count"] = r.brute_count ? ordered_json(*r.brute_count) : ordered_json(nullptr);
    j["formula_count"] = r.formula_count ? big_to_json(*r.formula_count) : ordered_json(nullptr);
    j["match"] = r.match ? ordered_json(*r.match) : ordered_json(nullptr);
    j["method"] = to_string(r.method);
    if (!stable) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

inline CensusReport census_from_json(const ordered_json& j) {
    CensusReport r;
    r.ring = j.at("ring").get<std::string>();
    r.q = j.at("q").get<std::uint64_t>();
    r.n = j.at("n").get<unsigned>();
    r.s = j.at("s").get<unsigned>();
    if (!j.at("brute_count").is_null()) r.brute_count = j["brute_count"].get<std::uint64_t>();
    if (!j.at("formula_count").is_null()) {
        const auto& f = j["formula_count"];
        r.formula_count = f.is_string() ? BigInt(f.get<std::string>()) : BigInt(f.get<std::uint64_t>());
    }
    if (!j.at("match").is_null()) r.match = j["match"].get<bool>();
    r.method = parse_census_method(j.at("method").get<std::string>());
    if (j.contains("elapsed_ms")) r.elapsed_ms = j["elapsed_ms"].get<double>();
    return r;
}

inline ordered_json factorization_to_json(const MatrixRing& mats, const NilFactorization& f, bool verified) {
    ordered_json j;
    j["target"] = mats.render(f.target);
    j["factors"] = ordered_json::array();
    for (const auto& m : f.factors) j["factors"].push_back(mats.render(m));
    j["conjugator"] = mats.render(f.conjugator);
    j["verified"] = verified;
    return j;
}

inline NilFactorization factorization_from_json(const MatrixRing& mats, const ordered_json& j) {
    NilFactorization f;
    f.target = mats.parse(j.at("target").get<std::string>());
    for (const auto& m : j.at("factors")) f.factors.push_back(mats.parse(m.get<std::string>()));
    f.conjugator = mats.parse(j.at("conjugator").get<std::string>());
    return f;
}

inline const char* kCsvHeader = "ring,q,n,s,brute_count,formula_count,match,method,error";

inline std::string csv_row(const CensusReport& r, const std::string& error = {}) {
    std::ostringstream os;
    os << r.ring << ',' << r.q << ',' << r.n << ',' << r.s << ',';
    if (r.brute_count) os << *r.brute_count;
    os << ',';
    if (r.formula_count) os << *r.formula_count;
    os << ',';
    if (r.match) os << (*r.match ? "true" : "false");
    os << ',' << to_string(r.method) << ',' << error;
    return os.str();
}

// Bitset file layout:
//   "nilquat-bitset 1\n" "ring <spec>\n" "bits <N>\n"
//   ceil(N / 8) bytes; bit i is bit (i % 8) of byte i / 8.
inline void write_bitset(std::ostream& os, const std::string& ring, const PackedSet& set) {
    os << "nilquat-bitset 1\n" << "ring " << ring << "\n" << "bits " << set.bit_length() << "\n";
    const std::uint64_t bytes = (set.bit_length() + 7) / 8;
    for (std::uint64_t b = 0; b < bytes; ++b) {
        const std::uint64_t word = set.words()[b / 8];
        os.put(static_cast<char>((word >> (8 * (b % 8))) & 0xFF));
    }
}

struct BitsetFile {
    std::string ring;
    PackedSet set;
};

inline BitsetFile read_bitset(std::istream& is) {
    std::string magic, key;
    std::getline(is, magic);
    if (magic != "nilquat-bitset 1") throw std::runtime_error("not a nilquat bitset file");
    BitsetFile out;
    std::uint64_t bits = 0;
    if (!(is >> key >> out.ring) || key != "ring") throw std::runtime_error("bitset file: missing ring line");
    if (!(is >> key >> bits) || key != "bits") throw std::runtime_error("bitset file: missing bits line");
    is.get();
    out.set = PackedSet(bits);
    const std::uint64_t bytes = (bits + 7) / 8;
    for (std::uint64_t b = 0; b < bytes; ++b) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof()) throw std::runtime_error("bitset file truncated");
        out.set.words()[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (b % 8));
    }
    return out;
}

inline ordered_json union_summary_json(const std::string& ring, const OrbitUnion& u) {
    ordered_json j;
    j["ring"] = ring;
    j["union_size"] = u.members.count();
    j["orbit_count"] = u.orbit_count;
    return j;
}

/// Packed matrix indices, either one decimal per line or little-endian u64.
inline void write_packed_indices(std::ostream& os, const std::vector<std::uint64_t>& idx, bool binary) {
    for (auto v : idx) {
        if (binary) {
            for (int b = 0; b < 8; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xFF));
        } else {
            os << v << '\n';
        }
    }
}

inline std::vector<std::uint64_t> read_packed_indices(std::istream& is, bool binary) {
    std::vector<std::uint64_t> out;
    if (binary) {
        char buf[8];
        while (is.read(buf, 8)) {
            std::uint64_t v = 0;
            for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b])) << (8 * b);
            out.push_back(v);
        }
        if (is.gcount() != 0) throw std::runtime_error("packed index file truncated");
    } else {
        std::uint64_t v;
        while (is >> v) out.push_back(v);
        if (!is.eof()) throw std::runtime_error("bad packed index line");
    }
    return out;
}

}  // namespace nilquat
