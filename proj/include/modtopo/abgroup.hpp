#pragma once

// Finitely generated abelian groups and exact integer linear algebra.
//
// Every group is kept in invariant-factor form Z^r + Z/d1 + ... + Z/dt with
// d1 | d2 | ... | dt and every di >= 2, so isomorphism is field equality.
// Subquotients of maps between presented groups go through the Smith normal
// form; the closed-form Hom/Ext/Tor/tensor rules work on cyclic summands.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modtopo/error.hpp"
#include "modtopo/integer.hpp"

namespace modtopo {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows x cols");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
            for (long long v : row)
                entries_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<Integer>& entries() const noexcept { return entries_; }

    Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return x == 0; });
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    std::vector<Integer> column(std::size_t c) const {
        std::vector<Integer> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    std::vector<Integer> apply(std::span<const Integer> x) const {
        if (x.size() != cols_)
            throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix columns");
        std::vector<Integer> y(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if ((*this)(r, c) != 0 && x[c] != 0)
                    y[r] += (*this)(r, c) * x[c];
        return y;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw Error(ErrorCode::DimensionMismatch,
                        "cannot multiply " + a.shape() + " by " + b.shape());
        IntMatrix p(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        p(i, j) += aik * b(k, j);
            }
        return p;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> entries_;
};

/// [a | b] side by side; both must have the same row count.
inline IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "hconcat of " + a.shape() + " and " + b.shape());
    IntMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            m(r, c) = a(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c)
            m(r, a.cols() + c) = b(r, c);
    }
    return m;
}

inline IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            m(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
            m(a.rows() + r, a.cols() + c) = b(r, c);
    return m;
}

class FgAbGroup {
public:
    FgAbGroup() = default;

    /// Builds the canonical form of Z^rank + Z/orders[0] + ... . Orders may be
    /// arbitrary: 0 contributes a free summand, +-1 is dropped, signs ignored.
    FgAbGroup(std::size_t rank, std::vector<Integer> orders) : rank_(rank) {
        for (auto& d : orders) {
            d = modtopo::abs(d);
            if (d == 0)
                ++rank_;
            else if (d != 1)
                torsion_.push_back(std::move(d));
        }
        // Pairwise (gcd, lcm) replacement leaves a divisibility chain with
        // the same product.
        for (std::size_t i = 0; i < torsion_.size(); ++i)
            for (std::size_t j = i + 1; j < torsion_.size(); ++j) {
                Integer g = gcd(torsion_[i], torsion_[j]);
                Integer l = torsion_[i] / g * torsion_[j];
                torsion_[i] = std::move(g);
                torsion_[j] = std::move(l);
            }
        std::erase_if(torsion_, [](const Integer& d) { return d == 1; });
    }

    static FgAbGroup trivial() { return {}; }
    static FgAbGroup free(std::size_t rank) { return FgAbGroup(rank, {}); }
    static FgAbGroup cyclic(const Integer& order) { return FgAbGroup(0, {order}); }

    std::size_t rank() const noexcept { return rank_; }
    const std::vector<Integer>& invariant_factors() const noexcept { return torsion_; }
    /// Number of generators in the canonical presentation.
    std::size_t generator_count() const noexcept { return rank_ + torsion_.size(); }

    bool is_trivial() const noexcept { return rank_ == 0 && torsion_.empty(); }
    bool is_free() const noexcept { return torsion_.empty(); }
    bool has_two_torsion() const {
        return std::any_of(torsion_.begin(), torsion_.end(), [](const Integer& d) { return d % 2 == 0; });
    }

    /// Prime-power cyclic orders, ascending. Trial division; meant for display.
    std::vector<Integer> primary_decomposition() const {
        std::vector<Integer> out;
        for (Integer d : torsion_) {
            for (Integer p = 2; p * p <= d; ++p) {
                if (d % p != 0)
                    continue;
                Integer q = 1;
                while (d % p == 0) {
                    d /= p;
                    q *= p;
                }
                out.push_back(q);
            }
            if (d > 1)
                out.push_back(d);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string to_string() const {
        if (is_trivial())
            return "0";
        std::ostringstream os;
        bool first = true;
        if (rank_ > 0) {
            os << "Z";
            if (rank_ > 1)
                os << "^" << rank_;
            first = false;
        }
        for (const auto& d : torsion_) {
            if (!first)
                os << " + ";
            os << "Z/" << d;
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

private:
    std::size_t rank_ = 0;
    std::vector<Integer> torsion_;
};

inline bool is_isomorphic(const FgAbGroup& a, const FgAbGroup& b) { return a == b; }

// Smith normal form ----------------------------------------------------------

struct SnfResult {
    /// min(rows, cols) entries: invariant factors (including 1s) then zeros.
    std::vector<Integer> diagonal;
    /// M = left * D * right with D the rows x cols diagonal matrix.
    IntMatrix left;
    IntMatrix right;
    IntMatrix left_inverse;
    IntMatrix right_inverse;

    std::size_t rank() const {
        return static_cast<std::size_t>(
            std::count_if(diagonal.begin(), diagonal.end(), [](const Integer& d) { return d != 0; }));
    }

    IntMatrix diagonal_matrix() const {
        IntMatrix d(left.cols(), right.rows());
        for (std::size_t i = 0; i < diagonal.size(); ++i)
            d(i, i) = diagonal[i];
        return d;
    }
};

namespace detail {

// Pivoting on the smallest nonzero absolute value, Euclidean row/column
// reduction, then a fix-up pass to force the divisibility chain. When
// tracking, maintains A = P M Q together with left = P^-1, right = Q^-1.
class SnfReducer {
public:
    SnfReducer(const IntMatrix& m, bool track)
        : a_(m), track_(track), rows_(m.rows()), cols_(m.cols()) {
        if (track_) {
            p_ = IntMatrix::identity(rows_);
            left_ = IntMatrix::identity(rows_);
            q_ = IntMatrix::identity(cols_);
            right_ = IntMatrix::identity(cols_);
        }
    }

    void run() {
        const std::size_t n = std::min(rows_, cols_);
        for (std::size_t t = 0; t < n; ++t) {
            if (!move_smallest_to(t, t, t))
                break;
            for (;;) {
                if (!clear_column(t) || !clear_row(t))
                    continue;
                auto offender = find_non_multiple(t);
                if (!offender)
                    break;
                add_row(t, *offender, 1);
            }
            if (a_(t, t) < 0)
                negate_row(t);
        }
    }

    std::vector<Integer> diagonal() const {
        std::vector<Integer> d(std::min(rows_, cols_));
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] = a_(i, i);
        return d;
    }

    SnfResult result() const {
        SnfResult r;
        r.diagonal = diagonal();
        if (track_) {
            r.left = left_;
            r.right = right_;
            r.left_inverse = p_;
            r.right_inverse = q_;
        }
        return r;
    }

private:
    // Smallest |entry| in the block rows >= r0, cols >= c0, moved to (t, t).
    bool move_smallest_to(std::size_t t, std::size_t r0, std::size_t c0) {
        bool found = false;
        std::size_t br = 0, bc = 0;
        Integer best;
        for (std::size_t r = r0; r < rows_; ++r)
            for (std::size_t c = c0; c < cols_; ++c) {
                const Integer& v = a_(r, c);
                if (v == 0)
                    continue;
                Integer av = modtopo::abs(v);
                if (!found || av < best) {
                    found = true;
                    best = std::move(av);
                    br = r;
                    bc = c;
                }
            }
        if (!found)
            return false;
        if (br != t)
            swap_rows(br, t);
        if (bc != t)
            swap_cols(bc, t);
        return true;
    }

    // Returns true when column t below the pivot is already zero.
    bool clear_column(std::size_t t) {
        bool clean = true;
        for (std::size_t r = t + 1; r < rows_; ++r) {
            if (a_(r, t) == 0)
                continue;
            Integer q = a_(r, t) / a_(t, t);
            if (q != 0)
                add_row(r, t, -q);
            if (a_(r, t) != 0)
                clean = false;
        }
        if (!clean) {
            std::size_t best = t;
            for (std::size_t r = t + 1; r < rows_; ++r)
                if (a_(r, t) != 0 && modtopo::abs(a_(r, t)) < modtopo::abs(a_(best, t)))
                    best = r;
            swap_rows(best, t);
        }
        return clean;
    }

    bool clear_row(std::size_t t) {
        bool clean = true;
        for (std::size_t c = t + 1; c < cols_; ++c) {
            if (a_(t, c) == 0)
                continue;
            Integer q = a_(t, c) / a_(t, t);
            if (q != 0)
                add_col(c, t, -q);
            if (a_(t, c) != 0)
                clean = false;
        }
        if (!clean) {
            std::size_t best = t;
            for (std::size_t c = t + 1; c < cols_; ++c)
                if (a_(t, c) != 0 && modtopo::abs(a_(t, c)) < modtopo::abs(a_(t, best)))
                    best = c;
            swap_cols(best, t);
        }
        return clean;
    }

    std::optional<std::size_t> find_non_multiple(std::size_t t) const {
        for (std::size_t r = t + 1; r < rows_; ++r)
            for (std::size_t c = t + 1; c < cols_; ++c)
                if (a_(r, c) % a_(t, t) != 0)
                    return r;
        return std::nullopt;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap(a_(i, c), a_(j, c));
        if (!track_)
            return;
        for (std::size_t c = 0; c < rows_; ++c)
            std::swap(p_(i, c), p_(j, c));
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap(left_(r, i), left_(r, j));
    }

    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap(a_(r, i), a_(r, j));
        if (!track_)
            return;
        for (std::size_t r = 0; r < cols_; ++r)
            std::swap(q_(r, i), q_(r, j));
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap(right_(i, c), right_(j, c));
    }

    // row target += c * row source
    void add_row(std::size_t target, std::size_t source, const Integer& c) {
        for (std::size_t k = 0; k < cols_; ++k)
            if (a_(source, k) != 0)
                a_(target, k) += c * a_(source, k);
        if (!track_)
            return;
        for (std::size_t k = 0; k < rows_; ++k) {
            if (p_(source, k) != 0)
                p_(target, k) += c * p_(source, k);
            if (left_(k, target) != 0)
                left_(k, source) -= c * left_(k, target);
        }
    }

    // col target += c * col source
    void add_col(std::size_t target, std::size_t source, const Integer& c) {
        for (std::size_t k = 0; k < rows_; ++k)
            if (a_(k, source) != 0)
                a_(k, target) += c * a_(k, source);
        if (!track_)
            return;
        for (std::size_t k = 0; k < cols_; ++k) {
            if (q_(k, source) != 0)
                q_(k, target) += c * q_(k, source);
            if (right_(target, k) != 0)
                right_(source, k) -= c * right_(target, k);
        }
    }

    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < cols_; ++c)
            a_(i, c) = -a_(i, c);
        if (!track_)
            return;
        for (std::size_t c = 0; c < rows_; ++c) {
            p_(i, c) = -p_(i, c);
            left_(c, i) = -left_(c, i);
        }
    }

    IntMatrix a_;
    bool track_;
    std::size_t rows_, cols_;
    IntMatrix p_, left_, q_, right_;
};

} // namespace detail

inline SnfResult smith_normal_form(const IntMatrix& m) {
    detail::SnfReducer reducer(m, true);
    reducer.run();
    return reducer.result();
}

/// Diagonal only; skips the transform bookkeeping.
inline std::vector<Integer> smith_diagonal(const IntMatrix& m) {
    detail::SnfReducer reducer(m, false);
    reducer.run();
    return reducer.diagonal();
}

/// Z^rows / (column span of m).
inline FgAbGroup cokernel(const IntMatrix& m) {
    auto diag = smith_diagonal(m);
    std::size_t nonzero = 0;
    std::vector<Integer> orders;
    for (auto& d : diag)
        if (d != 0) {
            ++nonzero;
            orders.push_back(d);
        }
    return FgAbGroup(m.rows() - nonzero, std::move(orders));
}

// Presented groups -----------------------------------------------------------

/// Z^generators modulo the column span of `relations` (generators x k).
struct Presentation {
    std::size_t generators = 0;
    IntMatrix relations;

    FgAbGroup group() const { return cokernel(relations); }
};

/// Canonical presentation: free generators first, then one generator per
/// invariant factor in chain order.
inline Presentation presentation_of(const FgAbGroup& g) {
    Presentation p;
    p.generators = g.generator_count();
    p.relations = IntMatrix(p.generators, g.invariant_factors().size());
    for (std::size_t i = 0; i < g.invariant_factors().size(); ++i)
        p.relations(g.rank() + i, i) = g.invariant_factors()[i];
    return p;
}

/// Summands kept side by side (no re-canonicalization), so maps into or out
/// of the sum can be written blockwise.
inline Presentation direct_sum(const Presentation& a, const Presentation& b) {
    return {a.generators + b.generators, block_diagonal(a.relations, b.relations)};
}

namespace detail {

// Coordinates of v in the lattice spanned by the columns of the matrix whose
// SNF is `snf`, with respect to the basis d_i * left e_i (i < rank). Empty
// optional when v is outside the lattice.
inline std::optional<std::vector<Integer>> lattice_coordinates(const SnfResult& snf,
                                                               std::span<const Integer> v) {
    auto w = snf.left_inverse.apply(v);
    const std::size_t r = snf.rank();
    std::vector<Integer> coords(r);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i < r) {
            if (w[i] % snf.diagonal[i] != 0)
                return std::nullopt;
            coords[i] = w[i] / snf.diagonal[i];
        } else if (w[i] != 0) {
            return std::nullopt;
        }
    }
    return coords;
}

inline bool columns_in_lattice(const IntMatrix& vectors, const IntMatrix& lattice) {
    if (vectors.cols() == 0)
        return true;
    auto snf = smith_normal_form(lattice);
    for (std::size_t c = 0; c < vectors.cols(); ++c)
        if (!lattice_coordinates(snf, vectors.column(c)))
            return false;
    return true;
}

} // namespace detail

/// ker(outgoing) / im(incoming) at `middle`, for maps given on generators:
///   source --incoming--> middle --outgoing--> target.
/// Both maps must be well defined on the presented groups and compose to zero.
inline FgAbGroup subquotient(const Presentation& middle, const IntMatrix& incoming,
                             const IntMatrix& outgoing, const Presentation& target) {
    if (incoming.rows() != middle.generators || outgoing.cols() != middle.generators ||
        outgoing.rows() != target.generators || middle.relations.rows() != middle.generators ||
        target.relations.rows() != target.generators)
        throw Error(ErrorCode::DimensionMismatch, "maps do not match the presented groups");
    if (!detail::columns_in_lattice(outgoing * middle.relations, target.relations))
        throw Error(ErrorCode::NotAHomomorphism, "outgoing map does not respect relations");
    if (!detail::columns_in_lattice(outgoing * incoming, target.relations))
        throw Error(ErrorCode::NotAComplex, "composite of the two maps is nonzero");

    // Preimage of the target relations: kernel of [outgoing | relations],
    // projected onto the middle coordinates.
    auto snf = smith_normal_form(hconcat(outgoing, target.relations));
    const std::size_t r = snf.rank();
    const std::size_t width = outgoing.cols() + target.relations.cols();
    IntMatrix kernel(middle.generators, width - r);
    for (std::size_t j = r; j < width; ++j)
        for (std::size_t i = 0; i < middle.generators; ++i)
            kernel(i, j - r) = snf.right_inverse(i, j);

    auto kernel_snf = smith_normal_form(kernel);
    const std::size_t kernel_rank = kernel_snf.rank();
    IntMatrix denominators = hconcat(incoming, middle.relations);
    IntMatrix coords(kernel_rank, denominators.cols());
    for (std::size_t c = 0; c < denominators.cols(); ++c) {
        auto x = detail::lattice_coordinates(kernel_snf, denominators.column(c));
        if (!x)
            throw Error(ErrorCode::NotAComplex, "image is not contained in the kernel");
        for (std::size_t i = 0; i < kernel_rank; ++i)
            coords(i, c) = (*x)[i];
    }
    return cokernel(coords);
}

// Chain complexes -------------------------------------------------------------

namespace detail {

inline void check_complex(std::span<const IntMatrix> boundaries) {
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        if (boundaries[i].cols() != boundaries[i + 1].rows())
            throw Error(ErrorCode::DimensionMismatch,
                        "boundary " + std::to_string(i + 1) + " (" + boundaries[i].shape() +
                            ") does not compose with boundary " + std::to_string(i + 2) + " (" +
                            boundaries[i + 1].shape() + ")");
        if (!(boundaries[i] * boundaries[i + 1]).is_zero())
            throw Error(ErrorCode::NotAComplex,
                        "boundary " + std::to_string(i + 1) + " composed with boundary " +
                            std::to_string(i + 2) + " is nonzero");
    }
}

struct BoundaryData {
    std::size_t rank = 0;
    std::vector<Integer> factors; // nonzero diagonal entries
};

inline BoundaryData boundary_data(const IntMatrix& m) {
    BoundaryData d;
    for (auto& x : smith_diagonal(m))
        if (x != 0) {
            ++d.rank;
            d.factors.push_back(x);
        }
    return d;
}

} // namespace detail

/// boundaries[i] is the cellular boundary C_{i+1} -> C_i as a
/// dim C_i x dim C_{i+1} matrix. Returns H_0 .. H_N for N boundaries.
inline std::vector<FgAbGroup> homology_of_complex(std::span<const IntMatrix> boundaries) {
    detail::check_complex(boundaries);
    const std::size_t n = boundaries.size();
    if (n == 0)
        return {};
    std::vector<detail::BoundaryData> data;
    data.reserve(n);
    for (const auto& b : boundaries)
        data.push_back(detail::boundary_data(b));

    std::vector<FgAbGroup> out;
    out.reserve(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t cells = m == 0 ? boundaries[0].rows() : boundaries[m - 1].cols();
        const std::size_t out_rank = m == 0 ? 0 : data[m - 1].rank;
        const std::size_t in_rank = m == n ? 0 : data[m].rank;
        std::vector<Integer> torsion = m == n ? std::vector<Integer>{} : data[m].factors;
        out.emplace_back(cells - out_rank - in_rank, std::move(torsion));
    }
    return out;
}

inline std::vector<FgAbGroup> homology_of_complex(std::initializer_list<IntMatrix> boundaries) {
    return homology_of_complex(std::span<const IntMatrix>(boundaries.begin(), boundaries.size()));
}

/// Cohomology H^0 .. H^N of the dual cochain complex Hom(C, Z).
inline std::vector<FgAbGroup> cohomology_of_complex(std::span<const IntMatrix> boundaries) {
    detail::check_complex(boundaries);
    const std::size_t n = boundaries.size();
    if (n == 0)
        return {};
    std::vector<detail::BoundaryData> data;
    for (const auto& b : boundaries)
        data.push_back(detail::boundary_data(b));
    std::vector<FgAbGroup> out;
    for (std::size_t m = 0; m <= n; ++m) {
        const std::size_t cells = m == 0 ? boundaries[0].rows() : boundaries[m - 1].cols();
        const std::size_t incoming = m == 0 ? 0 : data[m - 1].rank;
        const std::size_t outgoing = m == n ? 0 : data[m].rank;
        std::vector<Integer> torsion = m == 0 ? std::vector<Integer>{} : data[m - 1].factors;
        out.emplace_back(cells - incoming - outgoing, std::move(torsion));
    }
    return out;
}

// Group arithmetic ---------------------------------------------------------------

inline FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
    std::vector<Integer> orders = a.invariant_factors();
    orders.insert(orders.end(), b.invariant_factors().begin(), b.invariant_factors().end());
    return FgAbGroup(a.rank() + b.rank(), std::move(orders));
}

/// A + A + ... (copies times).
inline FgAbGroup direct_power(const FgAbGroup& a, std::size_t copies) {
    std::vector<Integer> orders;
    orders.reserve(a.invariant_factors().size() * copies);
    for (std::size_t i = 0; i < copies; ++i)
        orders.insert(orders.end(), a.invariant_factors().begin(), a.invariant_factors().end());
    return FgAbGroup(a.rank() * copies, std::move(orders));
}

inline FgAbGroup tensor(const FgAbGroup& a, const FgAbGroup& b) {
    std::vector<Integer> orders;
    for (std::size_t i = 0; i < b.rank(); ++i)
        orders.insert(orders.end(), a.invariant_factors().begin(), a.invariant_factors().end());
    for (std::size_t i = 0; i < a.rank(); ++i)
        orders.insert(orders.end(), b.invariant_factors().begin(), b.invariant_factors().end());
    for (const auto& d : a.invariant_factors())
        for (const auto& e : b.invariant_factors())
            orders.push_back(gcd(d, e));
    return FgAbGroup(a.rank() * b.rank(), std::move(orders));
}

inline FgAbGroup tor(const FgAbGroup& a, const FgAbGroup& b) {
    std::vector<Integer> orders;
    for (const auto& d : a.invariant_factors())
        for (const auto& e : b.invariant_factors())
            orders.push_back(gcd(d, e));
    return FgAbGroup(0, std::move(orders));
}

inline FgAbGroup hom(const FgAbGroup& a, const FgAbGroup& b) {
    // Hom(Z, B) = B, Hom(Z/d, Z) = 0, Hom(Z/d, Z/e) = Z/gcd(d, e).
    std::vector<Integer> orders;
    for (std::size_t i = 0; i < a.rank(); ++i)
        orders.insert(orders.end(), b.invariant_factors().begin(), b.invariant_factors().end());
    for (const auto& d : a.invariant_factors())
        for (const auto& e : b.invariant_factors())
            orders.push_back(gcd(d, e));
    return FgAbGroup(a.rank() * b.rank(), std::move(orders));
}

inline FgAbGroup ext(const FgAbGroup& a, const FgAbGroup& b) {
    // Ext(Z, B) = 0, Ext(Z/d, Z) = Z/d, Ext(Z/d, Z/e) = Z/gcd(d, e).
    std::vector<Integer> orders;
    for (const auto& d : a.invariant_factors()) {
        for (std::size_t i = 0; i < b.rank(); ++i)
            orders.push_back(d);
        for (const auto& e : b.invariant_factors())
            orders.push_back(gcd(d, e));
    }
    return FgAbGroup(0, std::move(orders));
}

} // namespace modtopo
