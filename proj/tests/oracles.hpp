#pragma once

// Reference computations for the tests. None of these call the library's
// SNF, homology, Hom/Ext/Tor or closed-form tables; they reach the same
// answers by different means (minors, field ranks, enumeration).

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "modtopo/abgroup.hpp"

namespace oracle {

using modtopo::FgAbGroup;
using modtopo::IntMatrix;
using modtopo::Integer;

// Determinants and minors ------------------------------------------------------

/// Bareiss fraction-free elimination.
inline Integer determinant(std::vector<std::vector<Integer>> a) {
    const std::size_t n = a.size();
    if (n == 0)
        return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0)
                ++r;
            if (r == n)
                return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    if (k > n)
        return;
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

/// gcd of all k x k minors (the k-th determinantal divisor).
inline Integer minors_gcd(const IntMatrix& m, std::size_t k) {
    std::vector<std::vector<std::size_t>> rows, cols;
    combinations(m.rows(), k, rows);
    combinations(m.cols(), k, cols);
    Integer g = 0;
    for (const auto& r : rows)
        for (const auto& c : cols) {
            std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    sub[i][j] = m(r[i], c[j]);
            g = boost::multiprecision::gcd(g, determinant(std::move(sub)));
            if (g == 1)
                return 1;
        }
    return g;
}

/// Diagonal entries |d_t| of some diagonalization, not yet in divisor order.
inline std::vector<Integer> euclid_pivots(IntMatrix m) {
    // Smallest-entry pivoting with division remainders, which keeps the
    // entries small where unreduced Bezout steps blow up.
    std::vector<Integer> pivots;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            std::size_t pr = rows, pc = cols;
            for (std::size_t r = t; r < rows; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (m(r, c) != 0 && (pr == rows || abs(m(r, c)) < abs(m(pr, pc)))) {
                        pr = r;
                        pc = c;
                    }
            if (pr == rows)
                return pivots;
            for (std::size_t c = 0; c < cols; ++c)
                std::swap(m(t, c), m(pr, c));
            for (std::size_t r = 0; r < rows; ++r)
                std::swap(m(r, t), m(r, pc));
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const Integer q = m(i, t) / m(t, t);
                for (std::size_t c = t; c < cols; ++c)
                    m(i, c) -= q * m(t, c);
                clean = clean && m(i, t) == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const Integer q = m(t, j) / m(t, t);
                for (std::size_t r = t; r < rows; ++r)
                    m(r, j) -= q * m(r, t);
                clean = clean && m(t, j) == 0;
            }
            if (clean)
                break;
        }
        pivots.push_back(abs(m(t, t)));
    }
    return pivots;
}

/// Invariant factor chain (including leading 1s) from arbitrary diagonal
/// entries, through their prime-power factorizations.
inline std::vector<Integer> chain_from_pivots(const std::vector<Integer>& pivots) {
    std::map<Integer, std::vector<unsigned>> exponents;
    for (Integer v : pivots) {
        for (Integer p = 2; p * p <= v; ++p) {
            unsigned e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            if (e > 0)
                exponents[p].push_back(e);
        }
        if (v > 1)
            exponents[v].push_back(1);
    }
    std::vector<Integer> chain(pivots.size(), 1);
    for (auto& [p, es] : exponents) {
        std::sort(es.begin(), es.end());
        const std::size_t offset = chain.size() - es.size();
        for (std::size_t i = 0; i < es.size(); ++i)
            for (unsigned k = 0; k < es[i]; ++k)
                chain[offset + i] *= p;
    }
    return chain;
}

/// Nonzero SNF entries. Small matrices use determinantal divisors
/// d_k = D_k / D_{k-1}; larger ones a Euclidean diagonalization.
inline std::vector<Integer> invariant_factors(const IntMatrix& m) {
    if (std::min(m.rows(), m.cols()) > 5 || std::max(m.rows(), m.cols()) > 7)
        return chain_from_pivots(euclid_pivots(m));
    std::vector<Integer> out;
    Integer prev = 1;
    for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
        const Integer d = minors_gcd(m, k);
        if (d == 0)
            break;
        out.push_back(d / prev);
        prev = d;
    }
    return out;
}

inline IntMatrix transpose(const IntMatrix& m) {
    IntMatrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            t(c, r) = m(r, c);
    return t;
}

// Chain complexes ---------------------------------------------------------------
//
// boundaries[i] is d_{i+1} : C_{i+1} -> C_i, shape dim C_i x dim C_{i+1}.

inline std::vector<std::size_t> cell_counts(const std::vector<IntMatrix>& b) {
    std::vector<std::size_t> n;
    for (const auto& m : b)
        n.push_back(m.rows());
    n.push_back(b.empty() ? 0 : b.back().cols());
    return n;
}

/// H_m = Z^(n_m - r_m - r_{m+1}) + torsion of coker d_{m+1}.
inline std::vector<FgAbGroup> homology(const std::vector<IntMatrix>& b) {
    const auto n = cell_counts(b);
    std::vector<std::vector<Integer>> factors(b.size());
    std::vector<std::size_t> rank(n.size() + 1, 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        factors[i] = invariant_factors(b[i]);
        rank[i + 1] = factors[i].size();
    }
    std::vector<FgAbGroup> out;
    for (std::size_t m = 0; m < n.size(); ++m) {
        std::vector<Integer> torsion;
        if (m < b.size())
            for (const auto& d : factors[m])
                if (d != 1)
                    torsion.push_back(d);
        out.emplace_back(n[m] - rank[m] - rank[m + 1], torsion);
    }
    return out;
}

/// Cohomology of the dual complex, d^m = (d_{m+1})^T, computed from scratch.
inline std::vector<FgAbGroup> cohomology(const std::vector<IntMatrix>& b) {
    const auto n = cell_counts(b);
    std::vector<std::size_t> rank(n.size() + 1, 0);
    std::vector<std::vector<Integer>> factors(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        factors[i] = invariant_factors(transpose(b[i]));
        rank[i + 1] = factors[i].size();
    }
    std::vector<FgAbGroup> out;
    for (std::size_t m = 0; m < n.size(); ++m) {
        // coker of d^{m-1} = (d_m)^T carries the torsion of H^m.
        std::vector<Integer> torsion;
        if (m >= 1)
            for (const auto& d : factors[m - 1])
                if (d != 1)
                    torsion.push_back(d);
        out.emplace_back(n[m] - rank[m] - rank[m + 1], torsion);
    }
    return out;
}

inline std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p) {
    std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            a[r][c] = static_cast<std::int64_t>(((m(r, c) % p) + p) % p);
    auto inv = [p](std::int64_t x) {
        for (std::int64_t y = 1; y < p; ++y)
            if (x * y % p == 1)
                return y;
        return std::int64_t{0};
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t piv = rank;
        while (piv < m.rows() && a[piv][c] == 0)
            ++piv;
        if (piv == m.rows())
            continue;
        std::swap(a[piv], a[rank]);
        const std::int64_t iv = inv(a[rank][c]);
        for (auto& x : a[rank])
            x = x * iv % p;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != rank && a[r][c] != 0) {
                const std::int64_t f = a[r][c];
                for (std::size_t k = 0; k < m.cols(); ++k)
                    a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
            }
        ++rank;
    }
    return rank;
}

/// Homology of the complex reduced mod p, as (Z/p)^dim in each degree.
inline std::vector<FgAbGroup> homology_mod_p(const std::vector<IntMatrix>& b, std::int64_t p) {
    const auto n = cell_counts(b);
    std::vector<std::size_t> rank(n.size() + 1, 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        rank[i + 1] = rank_mod_p(b[i], p);
    std::vector<FgAbGroup> out;
    for (std::size_t m = 0; m < n.size(); ++m)
        out.emplace_back(0, std::vector<Integer>(n[m] - rank[m] - rank[m + 1], Integer(p)));
    return out;
}

/// Cohomology of the mod p dual complex; same ranks as homology over a field.
inline std::vector<FgAbGroup> cohomology_mod_p(const std::vector<IntMatrix>& b, std::int64_t p) {
    const auto n = cell_counts(b);
    std::vector<std::size_t> rank(n.size() + 1, 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        rank[i + 1] = rank_mod_p(transpose(b[i]), p);
    std::vector<FgAbGroup> out;
    for (std::size_t m = 0; m < n.size(); ++m)
        out.emplace_back(0, std::vector<Integer>(n[m] - rank[m] - rank[m + 1], Integer(p)));
    return out;
}

/// Tensor product complex with d(a x b) = da x b + (-1)^|a| a x db.
inline std::vector<IntMatrix> tensor_complex(const std::vector<IntMatrix>& c, const std::vector<IntMatrix>& d) {
    const auto nc = cell_counts(c), nd = cell_counts(d);
    const std::size_t top = (nc.size() - 1) + (nd.size() - 1);
    // Basis of degree k: pairs (p, i, j) with p + q = k, ordered by p.
    std::vector<std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t>> index(top + 1);
    for (std::size_t k = 0; k <= top; ++k)
        for (std::size_t p = 0; p < nc.size(); ++p) {
            if (k < p || k - p >= nd.size())
                continue;
            const std::size_t q = k - p;
            for (std::size_t i = 0; i < nc[p]; ++i)
                for (std::size_t j = 0; j < nd[q]; ++j) {
                    const std::size_t next = index[k].size();
                    index[k][{p, i, j}] = next;
                }
        }
    std::vector<IntMatrix> out;
    for (std::size_t k = 1; k <= top; ++k) {
        IntMatrix m(index[k - 1].size(), index[k].size());
        for (const auto& [key, col] : index[k]) {
            const auto [p, i, j] = key;
            const std::size_t q = k - p;
            if (p >= 1)
                for (std::size_t r = 0; r < nc[p - 1]; ++r)
                    if (c[p - 1](r, i) != 0)
                        m(index[k - 1].at({p - 1, r, j}), col) += c[p - 1](r, i);
            if (q >= 1)
                for (std::size_t r = 0; r < nd[q - 1]; ++r)
                    if (d[q - 1](r, j) != 0)
                        m(index[k - 1].at({p, i, r}), col) += (p % 2 == 0 ? 1 : -1) * d[q - 1](r, j);
        }
        out.push_back(std::move(m));
    }
    return out;
}

/// Random complex C_0 .. C_top with entries in [-bound, bound]: a sum of
/// elementary pieces (Z, or Z -d-> Z) scrambled by entry-bounded changes
/// of basis, so d o d = 0 by construction.
inline std::vector<IntMatrix> random_complex(std::mt19937_64& rng, std::size_t top, std::size_t max_cells,
                                             std::int64_t bound) {
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<std::int64_t> mult(1, std::min<std::int64_t>(bound, 4));
    std::vector<std::size_t> n(top + 1, 0);
    struct Piece {
        std::size_t deg;
        std::int64_t d;
    };
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k <= top; ++k)
        for (std::size_t t = 0; t < max_cells; ++t) {
            if (n[k] >= max_cells)
                break;
            const int kind = coin(rng);
            if (kind == 0)
                continue;
            if (kind == 1 || k == top || n[k + 1] >= max_cells) {
                pieces.push_back({k, 0});
                ++n[k];
            } else {
                pieces.push_back({k, mult(rng)});
                ++n[k];
                ++n[k + 1];
            }
        }
    std::vector<IntMatrix> b;
    for (std::size_t k = 0; k < top; ++k)
        b.emplace_back(n[k], n[k + 1]);
    std::vector<std::size_t> fill(top + 1, 0);
    for (const auto& piece : pieces) {
        const std::size_t row = fill[piece.deg]++;
        if (piece.d != 0) {
            const std::size_t col = fill[piece.deg + 1]++;
            b[piece.deg](row, col) = piece.d;
        }
    }

    auto in_range = [bound](const IntMatrix& m) {
        for (const auto& e : m.entries())
            if (e > bound || e < -bound)
                return false;
        return true;
    };
    std::uniform_int_distribution<int> sgn(0, 1);
    for (int step = 0; step < 40; ++step) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, top)(rng);
        if (n[k] < 2)
            continue;
        std::uniform_int_distribution<std::size_t> pick(0, n[k] - 1);
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        const Integer c = sgn(rng) ? 1 : -1;
        // New basis e_i' = e_i + c e_j on C_k: d_k gets col_i += c col_j,
        // d_{k+1} gets row_j -= c row_i.
        IntMatrix below = k >= 1 ? b[k - 1] : IntMatrix();
        IntMatrix above = k < top ? b[k] : IntMatrix();
        if (k >= 1)
            for (std::size_t r = 0; r < below.rows(); ++r)
                below(r, i) += c * below(r, j);
        if (k < top)
            for (std::size_t col = 0; col < above.cols(); ++col)
                above(j, col) -= c * above(i, col);
        if ((k >= 1 && !in_range(below)) || (k < top && !in_range(above)))
            continue;
        if (k >= 1)
            b[k - 1] = below;
        if (k < top)
            b[k] = above;
    }
    return b;
}

// Finite cyclic groups by enumeration ---------------------------------------------

/// |{x in Z/n : m x = 0}| = |Hom(Z/m, Z/n)| = |Tor(Z/m, Z/n)|.
inline std::int64_t killed_by(std::int64_t m, std::int64_t n) {
    std::int64_t count = 0;
    for (std::int64_t x = 0; x < n; ++x)
        if (m * x % n == 0)
            ++count;
    return count;
}

/// |Z/n / m Z/n| = |Z/m (x) Z/n| = |Ext(Z/m, Z/n)|.
inline std::int64_t cokernel_of_multiplication(std::int64_t m, std::int64_t n) {
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    std::int64_t image = 0;
    for (std::int64_t x = 0; x < n; ++x) {
        const auto y = static_cast<std::size_t>(m * x % n);
        if (!hit[y]) {
            hit[y] = true;
            ++image;
        }
    }
    return n / image;
}

// Binomials and Steenrod reference values ---------------------------------------------

inline std::vector<std::vector<Integer>> pascal(std::size_t rows) {
    std::vector<std::vector<Integer>> t(rows + 1);
    for (std::size_t a = 0; a <= rows; ++a) {
        t[a].assign(a + 1, 1);
        for (std::size_t b = 1; b < a; ++b)
            t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
    }
    return t;
}

inline Integer choose(std::int64_t a, std::int64_t b) {
    static const auto table = pascal(80);
    if (a < 0 || b < 0 || b > a || a > 80)
        return 0;
    return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

} // namespace oracle
