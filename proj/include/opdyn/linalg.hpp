#pragma once

// Exact linear solves. Two independent routes:
//  * solve()            -- Gauss-Jordan elimination over the rationals (small dense systems)
//  * solve_multimodular -- elimination modulo word-size primes, CRT lifting, rational
//                          reconstruction, accepted only once the caller's exact verifier agrees.

#include "opdyn/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace opdyn::linalg {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Solves a·x = b exactly. Throws std::domain_error when a is singular.
inline std::vector<Rational> solve(RationalMatrix a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("solve: dimension mismatch");
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("solve: matrix is not square");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("solve: singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);

        const Rational inv = 1 / a[col][col];
        for (std::size_t k = col; k < n; ++k) a[col][k] *= inv;
        b[col] *= inv;

        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational factor = a[row][col];
            for (std::size_t k = col; k < n; ++k) {
                if (a[col][k] != 0) a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    return b;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1u) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1u;
    }
    return r;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1u;
        ++s;
    }
    // Deterministic for 64-bit inputs.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::uint64_t prime_below(std::uint64_t bound) {
    std::uint64_t c = bound - 1;
    if ((c & 1u) == 0) --c;
    while (!is_prime(c)) c -= 2;
    return c;
}

inline std::uint64_t to_mod(const Integer& v, std::uint64_t p) {
    Integer r = v % Integer(static_cast<unsigned long>(p));
    if (r < 0) r += Integer(static_cast<unsigned long>(p));
    return static_cast<std::uint64_t>(r.get_ui());
}

/// Rational reconstruction of a residue modulo m with |num|, den <= sqrt(m/2).
inline std::optional<Rational> reconstruct(const Integer& residue, const Integer& modulus) {
    Integer bound = sqrt(modulus / 2);
    Integer r0 = modulus, r1 = residue % modulus;
    if (r1 < 0) r1 += modulus;
    Integer s0 = 0, s1 = 1;
    while (r1 > bound) {
        Integer q = r0 / r1;
        Integer tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
    }
    if (s1 == 0 || abs(s1) > bound) return std::nullopt;
    Integer g = gcd(r1, s1);
    if (g != 1) return std::nullopt;
    Rational out(r1, s1);
    out.canonicalize();
    return out;
}

} // namespace detail

/// Reduces a rational modulo p. Returns nullopt when p divides the denominator.
inline std::optional<std::uint64_t> rational_mod(const Rational& q, std::uint64_t p) {
    std::uint64_t den = detail::to_mod(q.get_den(), p);
    if (den == 0) return std::nullopt;
    std::uint64_t num = detail::to_mod(q.get_num(), p);
    return detail::mulmod(num, detail::powmod(den, p - 2, p), p);
}

/// Dense augmented system [A | b] over Z/pZ, row-major with dim+1 columns per row.
struct ModularSystem {
    std::size_t dim = 0;
    std::vector<std::uint64_t> augmented;
};

/// Solves the system mod p in place. Returns nullopt if singular mod p.
inline std::optional<std::vector<std::uint64_t>> solve_mod(ModularSystem sys, std::uint64_t p) {
    const std::size_t n = sys.dim, w = n + 1;
    auto at = [&](std::size_t r, std::size_t c) -> std::uint64_t& { return sys.augmented[r * w + c]; };
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && at(pivot, col) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col)
            for (std::size_t k = 0; k < w; ++k) std::swap(at(pivot, k), at(col, k));
        const std::uint64_t inv = detail::powmod(at(col, col), p - 2, p);
        for (std::size_t k = col; k < w; ++k) at(col, k) = detail::mulmod(at(col, k), inv, p);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            const std::uint64_t f = at(row, col);
            if (f == 0) continue;
            for (std::size_t k = col; k < w; ++k) {
                const std::uint64_t sub = detail::mulmod(f, at(col, k), p);
                std::uint64_t& dst = at(row, k);
                dst = dst >= sub ? dst - sub : dst + p - sub;
            }
        }
    }
    std::vector<std::uint64_t> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = at(i, n);
    return x;
}

/// Builds the system modulo a given prime; returns nullopt if the prime is unusable
/// (e.g. it divides a denominator).
using ModularBuilder = std::function<std::optional<ModularSystem>(std::uint64_t prime)>;
/// Exact check of a candidate solution against the original rational system.
using ExactVerifier = std::function<bool(const std::vector<Rational>&)>;

/// Multi-modular exact solve. Adds primes until the reconstructed rational vector
/// passes the exact verifier. Throws std::runtime_error after max_primes attempts.
inline std::vector<Rational> solve_multimodular(const ModularBuilder& build, const ExactVerifier& verify,
                                                std::size_t max_primes = 64) {
    std::uint64_t next = std::uint64_t{1} << 62;
    Integer modulus = 1;
    std::vector<Integer> residues;
    std::size_t used = 0;
    for (std::size_t attempt = 0; attempt < 4 * max_primes && used < max_primes; ++attempt) {
        const std::uint64_t p = detail::prime_below(next);
        next = p;
        auto sys = build(p);
        if (!sys) continue;
        auto x = solve_mod(std::move(*sys), p);
        if (!x) continue;
        ++used;

        const Integer pz(static_cast<unsigned long>(p));
        if (residues.empty()) {
            residues.reserve(x->size());
            for (auto v : *x) residues.emplace_back(static_cast<unsigned long>(v));
        } else {
            if (residues.size() != x->size()) throw std::logic_error("solve_multimodular: inconsistent dimension");
            const std::uint64_t inv = detail::powmod(detail::to_mod(modulus, p), p - 2, p);
            for (std::size_t i = 0; i < residues.size(); ++i) {
                std::uint64_t cur = detail::to_mod(residues[i], p);
                std::uint64_t diff = (*x)[i] >= cur ? (*x)[i] - cur : (*x)[i] + p - cur;
                std::uint64_t t = detail::mulmod(diff, inv, p);
                residues[i] += modulus * Integer(static_cast<unsigned long>(t));
            }
        }
        modulus *= pz;

        std::vector<Rational> candidate;
        candidate.reserve(residues.size());
        bool ok = true;
        for (const auto& r : residues) {
            auto q = detail::reconstruct(r, modulus);
            if (!q) {
                ok = false;
                break;
            }
            candidate.push_back(std::move(*q));
        }
        if (ok && verify(candidate)) return candidate;
    }
    throw std::runtime_error("solve_multimodular: no verified solution within prime budget");
}

} // namespace opdyn::linalg
