#pragma once

#include <array>
#include <cstdint>

#include "csra/rng.hpp"

namespace csra {

// 421 information bits, bit i stored at w[i/64] bit i%64.
struct MessageBits {
    static constexpr int kBits = 421;
    std::array<std::uint64_t, 7> w{};

    bool get(int i) const { return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool v = true) {
        const std::uint64_t m = 1ULL << (i & 63);
        if (v) {
            w[static_cast<std::size_t>(i) >> 6] |= m;
        } else {
            w[static_cast<std::size_t>(i) >> 6] &= ~m;
        }
    }
    int popcount() const;
    bool operator==(const MessageBits&) const = default;

    static MessageBits random(Rng& rng);
};

struct MessageBitsHash {
    std::uint64_t operator()(const MessageBits& m) const {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (auto v : m.w) h = mix64(h ^ v);
        return h;
    }
};

// 512-bit modulation frame: 511 BCH-coded bits plus one null pad (bit 511,
// always 0 on encode, ignored on decode).
struct Codeword {
    static constexpr int kBits = 512;
    static constexpr int kCodeBits = 511;
    std::array<std::uint64_t, 8> w{};

    bool get(int i) const { return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool v = true) {
        const std::uint64_t m = 1ULL << (i & 63);
        if (v) {
            w[static_cast<std::size_t>(i) >> 6] |= m;
        } else {
            w[static_cast<std::size_t>(i) >> 6] &= ~m;
        }
    }
    void flip(int i) { w[static_cast<std::size_t>(i) >> 6] ^= 1ULL << (i & 63); }
    int popcount() const;
    bool operator==(const Codeword&) const = default;
};

struct DecodeResult {
    bool ok = false;
    MessageBits msg{};
    int corrected = 0;
};

// Narrow-sense binary BCH(511, 421) over GF(2^9) (primitive polynomial
// x^9 + x^4 + 1), designed distance 21, corrects up to t = 10 bit errors.
// Systematic layout: parity at bits 0..89, message at bits 90..510.
// Decoding is bounded-distance: syndromes -> Berlekamp-Massey -> locator
// consistency check (degree == distinct root count) -> Chien search. An
// inconsistent locator is reported as DecodeFailure, never "corrected".
class BchCodec {
  public:
    static constexpr int n = 511;
    static constexpr int k = 421;
    static constexpr int t = 10;
    static constexpr int m = 9;

    static const BchCodec& instance();

    Codeword encode(const MessageBits& msg) const;
    DecodeResult decode(const Codeword& received) const;

    int generator_degree() const { return n - k; }

    BchCodec(const BchCodec&) = delete;
    BchCodec& operator=(const BchCodec&) = delete;

  private:
    BchCodec();

    int gmul(int a, int b) const {
        if (a == 0 || b == 0) return 0;
        const int s = index_of_[a] + index_of_[b];
        return alpha_to_[s >= 511 ? s - 511 : s];
    }
    int gdiv(int a, int b) const;

    void compute_syndromes(const Codeword& rec, int* syn) const;

    std::array<std::int16_t, 512> alpha_to_{};  // alpha_to_[511] unused
    std::array<std::int16_t, 512> index_of_{};
    std::uint64_t gen_lo_ = 0, gen_hi_ = 0;  // generator minus its x^90 term

    // Packed per-byte syndrome contributions: 20 syndromes x 9 bits laid out
    // 7 per 64-bit word.
    struct Packed3 {
        std::uint64_t v[3];
    };
    std::array<std::array<Packed3, 256>, 64> syn_table_{};
    // Chien step: multiply-by-alpha^{-m} lookup for m = 1..t.
    std::array<std::array<std::int16_t, 512>, t + 1> chien_step_{};
};

inline Codeword bch_encode(const MessageBits& msg) { return BchCodec::instance().encode(msg); }
inline DecodeResult bch_decode(const Codeword& rec) { return BchCodec::instance().decode(rec); }

}  // namespace csra
