#pragma once

#include "capdesc/errors.hpp"
#include "capdesc/matrix.hpp"

#include <optional>
#include <vector>

namespace capdesc {

inline std::size_t pivot_cost(const BigQ& x) {
    return mpz_sizeinbase(x.raw().get_num_mpz_t(), 2) + mpz_sizeinbase(x.raw().get_den_mpz_t(), 2);
}
inline std::size_t pivot_cost(const RationalFunction3& x) { return x.complexity(); }

// Rank by Gaussian elimination over the exact field, choosing the cheapest
// nonzero pivot in each column to limit intermediate growth.
template <class S>
Eigen::Index exact_rank(Mat<S> a) {
    const Eigen::Index rows = a.rows(), cols = a.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        std::optional<Eigen::Index> best;
        for (Eigen::Index i = r; i < rows; ++i)
            if (!a(i, c).is_zero() && (!best || pivot_cost(a(i, c)) < pivot_cost(a(*best, c)))) best = i;
        if (!best) continue;
        if (*best != r) a.row(r).swap(a.row(*best));
        const S inv = S(1) / a(r, c);
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            if (a(i, c).is_zero()) continue;
            const S f = a(i, c) * inv;
            for (Eigen::Index j = c; j < cols; ++j)
                if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

// PA = LU for a square matrix over an exact field.
template <class S>
class ExactLU {
public:
    explicit ExactLU(Mat<S> a) : lu_(std::move(a)) {
        if (lu_.rows() != lu_.cols()) throw SizeMismatch("LU needs a square matrix");
        const Eigen::Index n = lu_.rows();
        perm_.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
        for (Eigen::Index c = 0; c < n; ++c) {
            std::optional<Eigen::Index> best;
            for (Eigen::Index i = c; i < n; ++i)
                if (!lu_(i, c).is_zero() && (!best || pivot_cost(lu_(i, c)) < pivot_cost(lu_(*best, c)))) best = i;
            if (!best) throw RankDeficient("singular matrix: rank " + std::to_string(exact_rank(lu_)) + " < " +
                                           std::to_string(n));
            if (*best != c) {
                lu_.row(c).swap(lu_.row(*best));
                std::swap(perm_[static_cast<std::size_t>(c)], perm_[static_cast<std::size_t>(*best)]);
            }
            const S inv = S(1) / lu_(c, c);
            for (Eigen::Index i = c + 1; i < n; ++i) {
                if (lu_(i, c).is_zero()) continue;
                lu_(i, c) *= inv;
                const S f = lu_(i, c);
                for (Eigen::Index j = c + 1; j < n; ++j)
                    if (!lu_(c, j).is_zero()) lu_(i, j) -= f * lu_(c, j);
            }
        }
    }

    Eigen::Index size() const { return lu_.rows(); }

    Vec<S> solve(const Vec<S>& b) const {
        const Eigen::Index n = lu_.rows();
        if (b.size() != n) throw SizeMismatch("right-hand side length does not match LU size");
        Vec<S> y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            S acc = b(perm_[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < i; ++j)
                if (!lu_(i, j).is_zero() && !y(j).is_zero()) acc -= lu_(i, j) * y(j);
            y(i) = acc;
        }
        Vec<S> x(n);
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            S acc = y(i);
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (!lu_(i, j).is_zero() && !x(j).is_zero()) acc -= lu_(i, j) * x(j);
            x(i) = acc / lu_(i, i);
        }
        return x;
    }

private:
    Mat<S> lu_;
    std::vector<Eigen::Index> perm_;
};

// Some solution of A x = b (free unknowns set to zero), or nothing if the
// system is inconsistent.
template <class S>
std::optional<Vec<S>> solve_any(Mat<S> a, Vec<S> b) {
    const Eigen::Index rows = a.rows(), cols = a.cols();
    if (b.size() != rows) throw SizeMismatch("right-hand side length does not match row count");
    std::vector<Eigen::Index> pivot_cols;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        std::optional<Eigen::Index> best;
        for (Eigen::Index i = r; i < rows; ++i)
            if (!a(i, c).is_zero() && (!best || pivot_cost(a(i, c)) < pivot_cost(a(*best, c)))) best = i;
        if (!best) continue;
        if (*best != r) {
            a.row(r).swap(a.row(*best));
            std::swap(b(r), b(*best));
        }
        const S inv = S(1) / a(r, c);
        for (Eigen::Index j = c; j < cols; ++j) a(r, j) *= inv;
        b(r) *= inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            const S f = a(i, c);
            for (Eigen::Index j = c; j < cols; ++j)
                if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
            if (!b(r).is_zero()) b(i) -= f * b(r);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (Eigen::Index i = r; i < rows; ++i)
        if (!b(i).is_zero()) return std::nullopt;
    Vec<S> x = Vec<S>::Constant(cols, S(0));
    for (Eigen::Index k = 0; k < r; ++k) x(pivot_cols[static_cast<std::size_t>(k)]) = b(k);
    return x;
}

// Maintains an echelon basis of the rows seen so far; `add` reports whether
// a new row enlarges the row space.
template <class S>
class RowSpace {
public:
    explicit RowSpace(Eigen::Index cols) : cols_(cols) {}

    bool add(Vec<S> row) {
        if (row.size() != cols_) throw SizeMismatch("row length mismatch");
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const Eigen::Index c = pivots_[k];
            if (row(c).is_zero()) continue;
            const S f = row(c) / basis_[k](c);
            for (Eigen::Index j = 0; j < cols_; ++j)
                if (!basis_[k](j).is_zero()) row(j) -= f * basis_[k](j);
        }
        for (Eigen::Index c = 0; c < cols_; ++c) {
            if (!row(c).is_zero()) {
                basis_.push_back(std::move(row));
                pivots_.push_back(c);
                return true;
            }
        }
        return false;
    }
    Eigen::Index rank() const { return static_cast<Eigen::Index>(basis_.size()); }

private:
    Eigen::Index cols_;
    std::vector<Vec<S>> basis_;
    std::vector<Eigen::Index> pivots_;
};

}  // namespace capdesc
