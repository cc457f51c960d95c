#include "csra/bch.hpp"

#include <bit>
#include <cassert>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace csra {
namespace {

constexpr int kPrimPoly = 0x211;  // x^9 + x^4 + 1
constexpr int kFieldOrder = 511;  // 2^9 - 1

// Small dense polynomial over GF(2^9), coefficient-indexed; used only in the
// decoder validity check, so sizes stay <= 2t.
struct Poly {
    std::array<int, 2 * BchCodec::t + 4> c{};
    int deg = -1;  // -1 encodes the zero polynomial

    void trim() {
        while (deg >= 0 && c[static_cast<std::size_t>(deg)] == 0) --deg;
    }
};

}  // namespace

int MessageBits::popcount() const {
    int s = 0;
    for (auto v : w) s += std::popcount(v);
    return s;
}

MessageBits MessageBits::random(Rng& rng) {
    MessageBits msg;
    for (int i = 0; i < 6; ++i) msg.w[static_cast<std::size_t>(i)] = rng.next_u64();
    msg.w[6] = rng.next_u64() & ((1ULL << 37) - 1);  // 421 = 6*64 + 37
    return msg;
}

int Codeword::popcount() const {
    int s = 0;
    for (auto v : w) s += std::popcount(v);
    return s;
}

const BchCodec& BchCodec::instance() {
    static const BchCodec codec;
    return codec;
}

BchCodec::BchCodec() {
    // GF(2^9) log/antilog tables.
    int a = 1;
    for (int i = 0; i < kFieldOrder; ++i) {
        alpha_to_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(a);
        index_of_[static_cast<std::size_t>(a)] = static_cast<std::int16_t>(i);
        a <<= 1;
        if (a & 0x200) a ^= kPrimPoly;
    }
    index_of_[0] = -1;

    // Generator = product of minimal polynomials of alpha^s for the odd
    // cyclotomic coset representatives s = 1, 3, ..., 2t-1.
    std::vector<std::uint8_t> in_coset(kFieldOrder, 0);
    std::vector<std::uint64_t> gen{1};  // bit i of packed word = coeff of x^(64w+i)
    auto gen_bit = [&gen](int i) { return (gen[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ULL; };
    int gen_deg = 0;
    for (int s = 1; s < 2 * t; s += 2) {
        if (in_coset[static_cast<std::size_t>(s)]) continue;
        // Minimal polynomial of alpha^s: product over the 2-cyclotomic coset.
        std::vector<int> mp{1};
        int e = s;
        do {
            in_coset[static_cast<std::size_t>(e)] = 1;
            const int root = alpha_to_[static_cast<std::size_t>(e)];
            std::vector<int> next(mp.size() + 1, 0);
            for (std::size_t i = 0; i < mp.size(); ++i) {
                next[i + 1] ^= mp[i];
                next[i] ^= gmul(mp[i], root);
            }
            mp = std::move(next);
            e = (2 * e) % kFieldOrder;
        } while (e != s);
        // All coefficients must collapse to GF(2).
        for (int coeff : mp) {
            if (coeff != 0 && coeff != 1) throw std::logic_error("BCH: minimal poly not binary");
        }
        // Multiply the packed GF(2) generator by mp.
        const int mdeg = static_cast<int>(mp.size()) - 1;
        std::vector<std::uint64_t> prod((static_cast<std::size_t>(gen_deg + mdeg) >> 6) + 1, 0);
        for (int i = 0; i <= mdeg; ++i) {
            if (!mp[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j <= gen_deg; ++j) {
                if (gen_bit(j)) prod[static_cast<std::size_t>(i + j) >> 6] ^= 1ULL << ((i + j) & 63);
            }
        }
        gen = std::move(prod);
        gen_deg += mdeg;
    }
    if (gen_deg != n - k) throw std::logic_error("BCH: generator degree mismatch");
    // Strip the leading x^90 term for the LFSR feedback mask.
    gen[1] &= ~(1ULL << (90 - 64));
    gen_lo_ = gen[0];
    gen_hi_ = gen[1];

    // Packed syndrome contribution of every (byte position, byte value).
    // Syndrome s_j (j = 1..20) lives 9 bits wide, 7 lanes per word.
    std::array<Packed3, BchCodec::n> pos{};
    int cur[2 * t + 1];
    for (int j = 1; j <= 2 * t; ++j) cur[j] = 1;  // alpha^{j*0}
    for (int p = 0; p < n; ++p) {
        Packed3 pk{{0, 0, 0}};
        for (int j = 1; j <= 2 * t; ++j) {
            const int lane = j - 1;
            pk.v[lane / 7] |= static_cast<std::uint64_t>(cur[j]) << (9 * (lane % 7));
        }
        pos[static_cast<std::size_t>(p)] = pk;
        for (int j = 1; j <= 2 * t; ++j) {
            cur[j] = gmul(cur[j], alpha_to_[static_cast<std::size_t>(j)]);
        }
    }
    for (int b = 0; b < 64; ++b) {
        syn_table_[static_cast<std::size_t>(b)][0] = Packed3{{0, 0, 0}};
        for (int v = 1; v < 256; ++v) {
            const int bit = std::countr_zero(static_cast<unsigned>(v));
            const int p = 8 * b + bit;
            Packed3 pk = syn_table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(v & (v - 1))];
            if (p < n) {  // global bit 511 is the null pad: no contribution
                for (int i = 0; i < 3; ++i) pk.v[i] ^= pos[static_cast<std::size_t>(p)].v[i];
            }
            syn_table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(v)] = pk;
        }
    }

    // Chien search step tables: x -> x * alpha^{-m}.
    for (int mm = 1; mm <= t; ++mm) {
        chien_step_[static_cast<std::size_t>(mm)][0] = 0;
        const int am = alpha_to_[static_cast<std::size_t>(kFieldOrder - mm)];
        for (int x = 1; x < 512; ++x) {
            chien_step_[static_cast<std::size_t>(mm)][static_cast<std::size_t>(x)] =
                static_cast<std::int16_t>(gmul(x, am));
        }
    }
}

int BchCodec::gdiv(int a, int b) const {
    assert(b != 0);
    if (a == 0) return 0;
    int s = index_of_[static_cast<std::size_t>(a)] - index_of_[static_cast<std::size_t>(b)];
    if (s < 0) s += kFieldOrder;
    return alpha_to_[static_cast<std::size_t>(s)];
}

Codeword BchCodec::encode(const MessageBits& msg) const {
    // Long division of x^90 m(x) by g(x); 90-bit LFSR in two words.
    std::uint64_t lo = 0, hi = 0;  // hi holds bits 64..89
    for (int i = k - 1; i >= 0; --i) {
        const std::uint64_t fb = ((hi >> 25) & 1ULL) ^ static_cast<std::uint64_t>(msg.get(i));
        hi = ((hi << 1) | (lo >> 63)) & ((1ULL << 26) - 1);
        lo <<= 1;
        if (fb) {
            lo ^= gen_lo_;
            hi ^= gen_hi_;
        }
    }
    Codeword cw;
    cw.w[0] = lo;
    cw.w[1] = hi;
    // Splice message into bits 90..510 (word 1 bit 26 onward).
    for (int i = 0; i < 7; ++i) {
        cw.w[static_cast<std::size_t>(i) + 1] |= msg.w[static_cast<std::size_t>(i)] << 26;
        if (i + 2 < 8) cw.w[static_cast<std::size_t>(i) + 2] |= msg.w[static_cast<std::size_t>(i)] >> 38;
    }
    return cw;
}

void BchCodec::compute_syndromes(const Codeword& rec, int* syn) const {
    std::uint64_t acc0 = 0, acc1 = 0, acc2 = 0;
    for (int b = 0; b < 64; ++b) {
        const unsigned byte =
            static_cast<unsigned>((rec.w[static_cast<std::size_t>(b) >> 3] >> (8 * (b & 7))) & 0xFF);
        const Packed3& pk = syn_table_[static_cast<std::size_t>(b)][byte];
        acc0 ^= pk.v[0];
        acc1 ^= pk.v[1];
        acc2 ^= pk.v[2];
    }
    const std::uint64_t acc[3] = {acc0, acc1, acc2};
    for (int j = 1; j <= 2 * t; ++j) {
        const int lane = j - 1;
        syn[j] = static_cast<int>((acc[lane / 7] >> (9 * (lane % 7))) & 0x1FF);
    }
}

DecodeResult BchCodec::decode(const Codeword& received) const {
    int syn[2 * t + 1];
    compute_syndromes(received, syn);

    bool all_zero = true;
    for (int j = 1; j <= 2 * t; ++j) all_zero &= (syn[j] == 0);

    const auto extract = [](const Codeword& cw) {
        MessageBits msg;
        for (int i = 0; i < 7; ++i) {
            msg.w[static_cast<std::size_t>(i)] = cw.w[static_cast<std::size_t>(i) + 1] >> 26;
            if (i + 2 < 8) msg.w[static_cast<std::size_t>(i)] |= cw.w[static_cast<std::size_t>(i) + 2] << 38;
        }
        msg.w[6] &= (1ULL << 37) - 1;
        return msg;
    };

    if (all_zero) return {true, extract(received), 0};

    // Berlekamp-Massey over the 2t syndromes.
    int lambda[2 * t + 2] = {};
    int prev[2 * t + 2] = {};
    lambda[0] = 1;
    prev[0] = 1;
    int L = 0, shift = 1, b = 1;
    for (int r = 0; r < 2 * t; ++r) {
        int d = syn[r + 1];
        for (int i = 1; i <= L; ++i) d ^= gmul(lambda[i], syn[r + 1 - i]);
        if (d == 0) {
            ++shift;
            continue;
        }
        int tmp[2 * t + 2];
        std::memcpy(tmp, lambda, sizeof(tmp));
        const int coef = gdiv(d, b);
        for (int i = 0; i + shift <= 2 * t + 1; ++i) {
            if (prev[i]) lambda[i + shift] ^= gmul(coef, prev[i]);
        }
        if (2 * L <= r) {
            L = r + 1 - L;
            std::memcpy(prev, tmp, sizeof(prev));
            b = d;
            shift = 1;
        } else {
            ++shift;
        }
    }
    if (L < 1 || L > t || lambda[L] == 0) return {};

    // Validity: lambda must have exactly L distinct roots in GF(2^9)*, i.e.
    // deg gcd(lambda, x^511 - 1) == L. Cheap filter that rejects nearly all
    // garbage locators before the position search.
    const auto pmulmod = [this](const Poly& a, const Poly& bb, const Poly& mod) {
        Poly r;
        if (a.deg < 0 || bb.deg < 0) return r;
        std::array<int, 4 * t + 8> full{};
        for (int i = 0; i <= a.deg; ++i) {
            if (!a.c[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j <= bb.deg; ++j) {
                full[static_cast<std::size_t>(i + j)] ^=
                    gmul(a.c[static_cast<std::size_t>(i)], bb.c[static_cast<std::size_t>(j)]);
            }
        }
        int fdeg = a.deg + bb.deg;
        const int lead = mod.c[static_cast<std::size_t>(mod.deg)];
        for (int i = fdeg; i >= mod.deg; --i) {
            const int coef = full[static_cast<std::size_t>(i)];
            if (!coef) continue;
            const int q = gdiv(coef, lead);
            for (int j = 0; j <= mod.deg; ++j) {
                full[static_cast<std::size_t>(i - mod.deg + j)] ^=
                    gmul(q, mod.c[static_cast<std::size_t>(j)]);
            }
        }
        r.deg = mod.deg - 1;
        for (int i = 0; i <= r.deg; ++i) r.c[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i)];
        r.trim();
        return r;
    };
    const auto pmod = [this](Poly a, const Poly& bb) {
        const int lead = bb.c[static_cast<std::size_t>(bb.deg)];
        while (a.deg >= bb.deg) {
            const int q = gdiv(a.c[static_cast<std::size_t>(a.deg)], lead);
            const int sh = a.deg - bb.deg;
            for (int j = 0; j <= bb.deg; ++j) {
                a.c[static_cast<std::size_t>(sh + j)] ^= gmul(q, bb.c[static_cast<std::size_t>(j)]);
            }
            a.trim();
            if (a.deg < 0) break;
        }
        return a;
    };

    Poly lam;
    lam.deg = L;
    for (int i = 0; i <= L; ++i) lam.c[static_cast<std::size_t>(i)] = lambda[i];

    Poly x;
    x.c[1] = 1;
    x.deg = 1;
    Poly p = (L == 1) ? pmod(x, lam) : x;
    // x^511 mod lambda by square-and-multiply (511 = 0b111111111).
    for (int bit = 7; bit >= 0; --bit) {
        p = pmulmod(p, p, lam);
        p = pmulmod(p, x, lam);
    }
    p.c[0] ^= 1;  // (x^511 - 1) mod lambda
    p.trim();
    Poly g0 = lam, g1 = p;
    while (g1.deg >= 0) {
        Poly r = pmod(g0, g1);
        g0 = g1;
        g1 = r;
    }
    if (g0.deg != L) return {};

    // Chien search: error at position i iff lambda(alpha^{-i}) == 0.
    int q[t + 1];
    for (int i = 0; i <= L; ++i) q[i] = lambda[i];
    Codeword corrected = received;
    int found = 0;
    for (int i = 0; i < n && found < L; ++i) {
        int sum = q[0];
        for (int mm = 1; mm <= L; ++mm) sum ^= q[mm];
        if (sum == 0) {
            corrected.flip(i);
            ++found;
        }
        for (int mm = 1; mm <= L; ++mm) {
            q[mm] = chien_step_[static_cast<std::size_t>(mm)][static_cast<std::size_t>(q[mm])];
        }
    }
    if (found != L) return {};  // unreachable given the gcd check; kept as a guard

    return {true, extract(corrected), L};
}

}  // namespace csra
