#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace sphta {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A fixed set of n points in R^m, stored column-major with cached
/// Euclidean norms. Immutable after construction and safe to share
/// across threads.
class PointSet {
public:
    explicit PointSet(Matrix points) : points_(std::move(points)) {
        if (points_.cols() < 1 || points_.rows() < 1)
            throw std::invalid_argument("PointSet: need at least one point in at least one dimension");
        norms_ = points_.colwise().norm();
    }

    /// Builds from row-major data (one point per row), the CSV layout.
    static PointSet from_rows(const Matrix& rows) { return PointSet(rows.transpose()); }

    /// Adopts norms the caller has already computed (they must match the
    /// recomputed values; the construction path guarantees it).
    static PointSet with_norms(Matrix points, Vector norms) {
        PointSet s;
        s.points_ = std::move(points);
        s.norms_ = std::move(norms);
        if (s.points_.cols() < 1 || s.points_.rows() < 1 || s.norms_.size() != s.points_.cols())
            throw std::invalid_argument("PointSet: inconsistent dimensions");
        return s;
    }

    Index dim() const { return points_.rows(); }
    Index size() const { return points_.cols(); }

    const Matrix& points() const { return points_; }
    Eigen::Ref<const Vector> col(Index i) const { return points_.col(i); }

    /// The combination sum_i w_i v_i.
    Vector combine(const Vector& w) const { return points_ * w; }

    double norm(Index i) const { return norms_[i]; }
    const Vector& norms() const { return norms_; }
    double max_norm() const { return norms_.maxCoeff(); }

    /// Max distance from x to any point of the set (the R of the
    /// approximation bound when x is the query).
    double max_dist(const Vector& x) const {
        return (points_.colwise() - x).colwise().norm().maxCoeff();
    }

    /// Max pairwise distance between points of the set; equals the
    /// diameter of their convex hull.
    double diameter() const {
        double d2 = 0.0;
        for (Index i = 0; i < size(); ++i)
            for (Index j = i + 1; j < size(); ++j)
                d2 = std::max(d2, (points_.col(i) - points_.col(j)).squaredNorm());
        return std::sqrt(d2);
    }

    PointSet subset(const std::vector<Index>& idx) const {
        if (idx.empty()) throw std::invalid_argument("PointSet::subset: empty index set");
        Matrix sub(dim(), static_cast<Index>(idx.size()));
        for (Index k = 0; k < sub.cols(); ++k) sub.col(k) = points_.col(idx[static_cast<size_t>(k)]);
        return PointSet(std::move(sub));
    }

private:
    PointSet() = default;

    Matrix points_;
    Vector norms_;
};

/// Non-owning view over the first `count` columns of a point matrix,
/// with externally maintained norms. Satisfies the same access surface
/// the iteration kernels use, so callers that grow a working set can
/// query prefixes without copying.
class PointView {
public:
    PointView(const Matrix& points, const Vector& norms, Index count)
        : points_(points), norms_(norms), count_(count) {}

    Index dim() const { return points_.rows(); }
    Index size() const { return count_; }
    auto points() const { return points_.leftCols(count_); }
    auto col(Index i) const { return points_.col(i); }
    double norm(Index i) const { return norms_[i]; }

    Vector combine(const Vector& w) const { return points_.leftCols(count_) * w; }

private:
    const Matrix& points_;
    const Vector& norms_;
    Index count_;
};

/// A point of conv(S) represented both by its coordinates and by sparse
/// convex coefficients over the set it was built from.
struct Iterate {
    Vector coords;
    std::vector<std::pair<Index, double>> coeffs;  // (index into S, weight)

    static Iterate from_vertex(const PointSet& s, Index i) {
        return Iterate{s.col(i), {{i, 1.0}}};
    }

    /// Dense recomputation of the represented combination.
    Vector combination(const PointSet& s) const {
        Vector x = Vector::Zero(s.dim());
        for (const auto& [i, w] : coeffs) x += w * s.col(i);
        return x;
    }

    double coeff_sum() const {
        double t = 0.0;
        for (const auto& [i, w] : coeffs) t += w;
        return t;
    }

    /// Checks the simplex and consistency invariants.
    bool valid(const PointSet& s, double tol = 1e-9) const {
        double sum = 0.0;
        for (const auto& [i, w] : coeffs) {
            if (i < 0 || i >= s.size() || w < -tol) return false;
            sum += w;
        }
        if (std::abs(sum - 1.0) > tol) return false;
        return (combination(s) - coords).norm() <= tol * (1.0 + s.max_norm());
    }
};

/// The hyperplane {x : normal.x = offset}.
struct Hyperplane {
    Vector normal;
    double offset = 0.0;

    /// Signed evaluation normal.x - offset; the sign tells the side.
    double side(const Vector& x) const { return normal.dot(x) - offset; }
};

/// A non-membership certificate: a witness point of conv(S) together
/// with the orthogonal bisector of the segment from the query to it.
struct WitnessCertificate {
    Iterate witness;
    Hyperplane plane;
};

}  // namespace sphta
