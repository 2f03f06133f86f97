#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ipstar/errors.hpp"

namespace ipstar {

/// Bit-packed sieve of Eratosthenes up to an inclusive limit.
///
/// Cache file layout (little-endian, bit i of the payload = "i is prime"):
///   magic "IPSV1" (5 bytes) | limit (u64 LE) | ceil((limit+1)/8) payload bytes
class Sieve {
  public:
    static constexpr char kMagic[5] = {'I', 'P', 'S', 'V', '1'};

    static Sieve compute(std::uint64_t limit) {
        Sieve s;
        s.limit_ = limit;
        s.bits_.assign((limit + 64) / 64, 0);
        if (limit >= 2) {
            for (std::uint64_t i = 2; i <= limit; ++i) s.set(i);
            for (std::uint64_t p = 2; p * p <= limit; ++p)
                if (s.is_prime(p))
                    for (std::uint64_t m = p * p; m <= limit; m += p) s.clear(m);
        }
        return s;
    }

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const {
        if (n > limit_) throw SupportExceededError("sieve limit " + std::to_string(limit_) +
                                                   " exceeded by query " + std::to_string(n));
        return (bits_[n >> 6] >> (n & 63)) & 1;
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return c;
    }

    std::vector<std::uint64_t> primes() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t n = 2; n <= limit_; ++n)
            if ((bits_[n >> 6] >> (n & 63)) & 1) out.push_back(n);
        return out;
    }

    void save(const std::filesystem::path& path) const {
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot write sieve cache " + tmp.string());
            f.write(kMagic, 5);
            unsigned char lim[8];
            for (int i = 0; i < 8; ++i) lim[i] = static_cast<unsigned char>((limit_ >> (8 * i)) & 0xff);
            f.write(reinterpret_cast<const char*>(lim), 8);
            std::uint64_t nbytes = payload_bytes(limit_);
            std::vector<unsigned char> buf(nbytes, 0);
            for (std::uint64_t n = 0; n <= limit_; ++n)
                if ((bits_[n >> 6] >> (n & 63)) & 1) buf[n >> 3] |= (1u << (n & 7));
            f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(nbytes));
            if (!f) throw IoError("short write to sieve cache " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    /// Loads a cache file; nullopt if missing, corrupt, or the wrong limit.
    static std::optional<Sieve> load(const std::filesystem::path& path, std::uint64_t limit) {
        std::ifstream f(path, std::ios::binary);
        if (!f) return std::nullopt;
        char magic[5];
        if (!f.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) return std::nullopt;
        unsigned char lim[8];
        if (!f.read(reinterpret_cast<char*>(lim), 8)) return std::nullopt;
        std::uint64_t stored = 0;
        for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(lim[i]) << (8 * i);
        if (stored != limit) return std::nullopt;
        std::uint64_t nbytes = payload_bytes(limit);
        std::vector<unsigned char> buf(nbytes);
        if (!f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(nbytes)))
            return std::nullopt;
        Sieve s;
        s.limit_ = limit;
        s.bits_.assign((limit + 64) / 64, 0);
        for (std::uint64_t n = 0; n <= limit; ++n)
            if ((buf[n >> 3] >> (n & 7)) & 1) s.set(n);
        return s;
    }

  private:
    static std::uint64_t payload_bytes(std::uint64_t limit) { return (limit + 8) / 8; }

    void set(std::uint64_t n) { bits_[n >> 6] |= (1ull << (n & 63)); }
    void clear(std::uint64_t n) { bits_[n >> 6] &= ~(1ull << (n & 63)); }

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Sieve with disk cache. A hit must match magic, limit and payload size;
/// anything corrupt is recomputed and rewritten.
inline std::shared_ptr<const Sieve> sieve_primes(std::uint64_t limit,
                                                 const std::filesystem::path& cache_dir,
                                                 std::uint64_t guard_limit = 100000000ull) {
    if (limit > guard_limit)
        throw GuardExceededError("sieve limit " + std::to_string(limit) + " exceeds guard " +
                                 std::to_string(guard_limit));
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        file = cache_dir / ("primes-" + std::to_string(limit) + ".sieve");
        if (auto cached = Sieve::load(file, limit))
            return std::make_shared<const Sieve>(std::move(*cached));
    }
    auto fresh = std::make_shared<const Sieve>(Sieve::compute(limit));
    if (!file.empty()) fresh->save(file);
    return fresh;
}

}  // namespace ipstar
