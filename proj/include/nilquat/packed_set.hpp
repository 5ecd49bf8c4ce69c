#pragma once

// Dense bitset over packed indices plus a small index-range sharding helper.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace nilquat {

class PackedSet {
public:
    PackedSet() = default;
    explicit PackedSet(std::uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::uint64_t bit_length() const { return bits_; }

    bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
        return c;
    }

    PackedSet& operator|=(const PackedSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    bool is_subset_of(const PackedSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                const int b = std::countr_zero(word);
                fn(static_cast<std::uint64_t>(w) * 64 + b);
                word &= word - 1;
            }
        }
    }
    std::vector<std::uint64_t> members() const {
        std::vector<std::uint64_t> out;
        for_each([&](std::uint64_t i) { out.push_back(i); });
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const PackedSet&, const PackedSet&) = default;

private:
    std::uint64_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Splits [0, count) into `threads` contiguous shards and runs
/// fn(begin, end, shard) on each, joining before returning.
inline void for_each_shard(std::size_t count, unsigned threads,
                           const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        fn(0, count, 0);
        return;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(count, t * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        workers.emplace_back(fn, begin, end, t);
    }
    for (auto& w : workers) w.join();
}

/// Runs a sharded sweep where each shard fills a private PackedSet; the
/// result is the OR of all shards and does not depend on `threads`.
template <class Fn>
PackedSet sharded_union(std::uint64_t bits, std::size_t count, unsigned threads, Fn fn) {
    threads = std::max(1u, threads);
    std::vector<PackedSet> partial(threads, PackedSet(bits));
    for_each_shard(count, threads, [&](std::size_t begin, std::size_t end, unsigned shard) {
        fn(begin, end, partial[shard]);
    });
    PackedSet out(bits);
    for (const auto& p : partial) out |= p;
    return out;
}

}  // namespace nilquat
