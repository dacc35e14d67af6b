#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sphta/point_set.hpp"

namespace sphta {

using Rational = boost::multiprecision::cpp_rational;

namespace exact {

inline constexpr Index kMaxDim = 8;
inline constexpr Index kMaxPoints = 16;

using RMatrix = std::vector<std::vector<Rational>>;
using RVector = std::vector<Rational>;

inline RVector to_rational(const Vector& v) {
    RVector out(static_cast<size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) out[static_cast<size_t>(i)] = Rational(v[i]);
    return out;
}

/// Solves the square rational system in place by Gaussian elimination.
/// Returns false when singular.
inline bool solve_linear(RMatrix a, RVector b, RVector& x) {
    const size_t n = a.size();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, Rational(0));
    for (size_t r = n; r-- > 0;) {
        Rational acc = b[r];
        for (size_t k = r + 1; k < n; ++k) acc -= a[r][k] * x[k];
        x[r] = acc / a[r][r];
    }
    return true;
}

/// Phase-1 simplex with Bland's rule, exact rationals: is there
/// lambda >= 0 with V lambda = p and sum lambda = 1?
inline bool simplex_membership(const PointSet& s, const Vector& p) {
    const Index m = s.dim(), n = s.size();
    const size_t rows = static_cast<size_t>(m) + 1;
    const size_t ncols = static_cast<size_t>(n);
    const size_t total = ncols + rows;  // structural + artificial
    // Tableau rows 0..rows-1, objective row last; rhs in the final column.
    RMatrix tab(rows + 1, RVector(total + 1, Rational(0)));
    for (size_t i = 0; i < rows; ++i) {
        Rational rhs = (i < static_cast<size_t>(m)) ? Rational(p[static_cast<Index>(i)]) : Rational(1);
        for (size_t j = 0; j < ncols; ++j) {
            Rational a = (i < static_cast<size_t>(m))
                             ? Rational(s.points()(static_cast<Index>(i), static_cast<Index>(j)))
                             : Rational(1);
            tab[i][j] = a;
        }
        if (rhs < 0) {
            rhs = -rhs;
            for (size_t j = 0; j < ncols; ++j) tab[i][j] = -tab[i][j];
        }
        tab[i][ncols + i] = 1;
        tab[i][total] = rhs;
    }
    // Reduced costs for the all-artificial basis.
    for (size_t j = 0; j <= total; ++j) {
        Rational sum = 0;
        for (size_t i = 0; i < rows; ++i) sum += tab[i][j];
        const Rational cost = (j >= ncols && j < total) ? Rational(1) : Rational(0);
        tab[rows][j] = cost - sum;
    }
    tab[rows][total] = 0;
    for (size_t i = 0; i < rows; ++i) tab[rows][total] -= tab[i][total];

    std::vector<size_t> basis(rows);
    for (size_t i = 0; i < rows; ++i) basis[i] = ncols + i;
    std::vector<bool> left_basis(total, false);  // artificials may not re-enter

    for (;;) {
        size_t enter = total;
        for (size_t j = 0; j < total; ++j) {
            if (j >= ncols && left_basis[j]) continue;
            if (tab[rows][j] < 0) {
                enter = j;
                break;  // Bland: lowest index
            }
        }
        if (enter == total) break;
        size_t leave = rows;
        Rational best_ratio = 0;
        for (size_t i = 0; i < rows; ++i) {
            if (tab[i][enter] <= 0) continue;
            const Rational ratio = tab[i][total] / tab[i][enter];
            if (leave == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == rows)
            throw std::logic_error("simplex_membership: unbounded phase-1 (should not happen)");
        if (basis[leave] >= ncols) left_basis[basis[leave]] = true;
        basis[leave] = enter;
        const Rational pivot = tab[leave][enter];
        for (size_t k = 0; k <= total; ++k) tab[leave][k] /= pivot;
        for (size_t i = 0; i <= rows; ++i) {
            if (i == leave || tab[i][enter] == 0) continue;
            const Rational f = tab[i][enter];
            for (size_t k = 0; k <= total; ++k) tab[i][k] -= f * tab[leave][k];
        }
    }
    return tab[rows][total] == 0;  // objective -w; feasible iff w == 0
}

/// Exact squared distance from p to conv(S): enumerate support subsets
/// of size at most m+1, solve each equality-constrained projection in
/// rationals, and keep the best candidate with nonnegative weights.
inline Rational squared_distance(const PointSet& s, const Vector& p) {
    const Index m = s.dim(), n = s.size();
    const RVector pr = to_rational(p);
    std::vector<RVector> cols(static_cast<size_t>(n));
    for (Index j = 0; j < n; ++j) cols[static_cast<size_t>(j)] = to_rational(Vector(s.col(j)));

    const auto dot = [&](const RVector& a, const RVector& b) {
        Rational d = 0;
        for (size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
        return d;
    };
    const Rational p2 = dot(pr, pr);

    Rational best = -1;
    const Index max_k = std::min<Index>(n, m + 1);
    std::vector<Index> pick;

    const auto eval_subset = [&]() {
        const size_t k = pick.size();
        // KKT system for min |V lambda - p|^2 with sum lambda = 1.
        RMatrix kkt(k + 1, RVector(k + 1, Rational(0)));
        RVector rhs(k + 1, Rational(0));
        for (size_t a = 0; a < k; ++a) {
            for (size_t b = 0; b < k; ++b)
                kkt[a][b] = 2 * dot(cols[static_cast<size_t>(pick[a])], cols[static_cast<size_t>(pick[b])]);
            kkt[a][k] = 1;
            kkt[k][a] = 1;
            rhs[a] = 2 * dot(cols[static_cast<size_t>(pick[a])], pr);
        }
        rhs[k] = 1;
        RVector sol;
        if (!solve_linear(kkt, rhs, sol)) return;
        for (size_t a = 0; a < k; ++a)
            if (sol[a] < 0) return;
        Rational d2 = p2;
        for (size_t a = 0; a < k; ++a) {
            d2 -= sol[a] * rhs[a];  // rhs[a] = 2 v_a . p
            for (size_t b = 0; b < k; ++b)
                d2 += sol[a] * sol[b] * (kkt[a][b] / 2);
        }
        if (best < 0 || d2 < best) best = d2;
    };

    const auto recurse = [&](auto&& self, Index next) -> void {
        if (!pick.empty()) eval_subset();
        if (static_cast<Index>(pick.size()) == max_k) return;
        for (Index j = next; j < n; ++j) {
            pick.push_back(j);
            self(self, j + 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0);
    if (best < 0) throw std::logic_error("squared_distance: no candidate subset (unreachable)");
    return best;
}

}  // namespace exact

struct OracleResult {
    bool inside = false;
    double distance = 0.0;  // exact distance, 0 when inside
};

/// Ground-truth membership for small instances: exact rational simplex
/// for the verdict, and for outside queries the exact distance to the
/// hull by support enumeration.
inline OracleResult exact_oracle(const PointSet& s, const Vector& p) {
    if (s.dim() > exact::kMaxDim || s.size() > exact::kMaxPoints)
        throw std::invalid_argument("exact_oracle: instance exceeds the size cap (m <= 8, n <= 16)");
    if (exact::simplex_membership(s, p)) return OracleResult{true, 0.0};
    const Rational d2 = exact::squared_distance(s, p);
    return OracleResult{false, std::sqrt(static_cast<double>(d2))};
}

/// Exact one-sided margin certificate: every point satisfies
/// normal.(v_i - p) > 0 and the plane-to-query distance is at least
/// `threshold`, i.e. (normal.(v_i - p))^2 >= threshold^2 |normal|^2.
/// No size cap; the work is one rational dot per point.
inline bool certify_separation_margin(const PointSet& s, const Vector& p, const Vector& normal,
                                      double threshold) {
    const auto pr = exact::to_rational(p);
    const auto nr = exact::to_rational(normal);
    Rational n2 = 0;
    for (size_t i = 0; i < nr.size(); ++i) n2 += nr[i] * nr[i];
    if (n2 == 0) return false;
    const Rational t(threshold);
    const Rational need = t * t * n2;
    for (Index j = 0; j < s.size(); ++j) {
        Rational d = 0;
        for (Index i = 0; i < s.dim(); ++i)
            d += nr[static_cast<size_t>(i)] * (Rational(s.points()(i, j)) - pr[static_cast<size_t>(i)]);
        if (d <= 0) return false;
        if (d * d < need) return false;
    }
    return true;
}

}  // namespace sphta
