#pragma once

// Exact exterior algebra over an n-dimensional oriented inner-product space.
//
// Elements of Lambda^q R^n are stored as dense coefficient vectors over the
// basis of strictly increasing q-subsets of {1..n} in lexicographic order.
// Degrees outside [0, n] are represented as a canonical zero space (empty
// coefficient vector), so degree-shifting estimator code needs no branching.
//
// Wedge, interior product and Hodge star are driven by precomputed sign and
// index tables; all arithmetic is exact floating point with no tolerances.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "heatforms/errors.hpp"

namespace heatforms {

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace detail {

constexpr int kMaxExteriorDim = 14;

inline void checkExteriorDim(int n) {
    if (n < 1 || n > kMaxExteriorDim)
        throw DimensionMismatchError("exterior algebra dimension must be in [1, 14], got " +
                                     std::to_string(n));
}

/// Enumerates the strictly increasing q-subsets of {0..n-1} in lexicographic
/// order, as sorted index lists.
inline std::vector<std::vector<int>> enumerateSubsets(int n, int q) {
    std::vector<std::vector<int>> out;
    if (q < 0 || q > n) return out;
    std::vector<int> cur(q);
    for (int i = 0; i < q; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = q - 1;
        while (i >= 0 && cur[i] == n - q + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < q; ++j) cur[j] = cur[j - 1] + 1;
    }
    if (q == 0) out.assign(1, {});
    return out;
}

/// Lexicographic rank of a sorted q-subset of {0..n-1}.
inline Eigen::Index subsetRank(int n, const std::vector<int>& s) {
    const int q = static_cast<int>(s.size());
    Eigen::Index rank = 0;
    int prev = -1;
    for (int i = 0; i < q; ++i) {
        for (int v = prev + 1; v < s[i]; ++v) rank += binomial(n - 1 - v, q - 1 - i);
        prev = s[i];
    }
    return rank;
}

struct IncidenceEntry {
    std::int32_t upper;    // rank of the (q+1)-subset T
    std::int32_t lower;    // rank of T with one element removed
    std::int32_t element;  // the removed element
    std::int8_t sign;      // (-1)^position of the removed element within T
};

struct PairEntry {
    std::int32_t target;  // rank of the union, meaningless when sign == 0
    std::int8_t sign;     // 0 when the subsets overlap
};

struct StarEntry {
    std::int32_t target;  // rank of the complement
    std::int8_t sign;     // parity of the permutation (S, S^c) of (0..n-1)
};

/// Incidence table between degrees q and q+1 of Lambda* R^n. It encodes, for
/// every (q+1)-subset T and every element of T, the rank of T minus that
/// element together with the position sign. Both the interior product
/// (contract against a vector, degree q+1 -> q) and wedge-by-a-vector
/// (degree q -> q+1) walk the same entries, which makes the adjointness
/// <u ^ a, b> = <a, iota_u b> exact by construction.
struct IncidenceTable {
    int n = 0, q = 0;  // q is the lower degree
    std::vector<IncidenceEntry> entries;
};

struct WedgeTable {
    int n = 0, p = 0, q = 0;
    Eigen::Index cols = 0;  // binomial(n, q): entries indexed i * cols + j
    std::vector<PairEntry> entries;
};

struct StarTable {
    int n = 0, q = 0;
    std::vector<StarEntry> entries;
};

inline IncidenceTable buildIncidenceTable(int n, int q) {
    IncidenceTable t;
    t.n = n;
    t.q = q;
    if (q < 0 || q + 1 > n) return t;
    const auto uppers = enumerateSubsets(n, q + 1);
    for (std::size_t ui = 0; ui < uppers.size(); ++ui) {
        const auto& T = uppers[ui];
        for (int a = 0; a < static_cast<int>(T.size()); ++a) {
            std::vector<int> lower;
            lower.reserve(T.size() - 1);
            for (int b = 0; b < static_cast<int>(T.size()); ++b)
                if (b != a) lower.push_back(T[b]);
            IncidenceEntry e;
            e.upper = static_cast<std::int32_t>(ui);
            e.lower = static_cast<std::int32_t>(subsetRank(n, lower));
            e.element = T[a];
            e.sign = static_cast<std::int8_t>((a % 2 == 0) ? 1 : -1);
            t.entries.push_back(e);
        }
    }
    return t;
}

inline WedgeTable buildWedgeTable(int n, int p, int q) {
    WedgeTable t;
    t.n = n;
    t.p = p;
    t.q = q;
    t.cols = binomial(n, q);
    if (p < 0 || q < 0 || p + q > n) return t;
    const auto lhs = enumerateSubsets(n, p);
    const auto rhs = enumerateSubsets(n, q);
    t.entries.resize(lhs.size() * rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            PairEntry e{0, 0};
            bool overlap = false;
            // inversions between (S, T): pairs with s > t
            int inversions = 0;
            for (int s : lhs[i]) {
                for (int tt : rhs[j]) {
                    if (s == tt) {
                        overlap = true;
                        break;
                    }
                    if (s > tt) ++inversions;
                }
                if (overlap) break;
            }
            if (!overlap) {
                std::vector<int> u;
                u.reserve(lhs[i].size() + rhs[j].size());
                u.insert(u.end(), lhs[i].begin(), lhs[i].end());
                u.insert(u.end(), rhs[j].begin(), rhs[j].end());
                std::sort(u.begin(), u.end());
                e.target = static_cast<std::int32_t>(subsetRank(n, u));
                e.sign = static_cast<std::int8_t>((inversions % 2 == 0) ? 1 : -1);
            }
            t.entries[i * t.cols + j] = e;
        }
    }
    return t;
}

inline StarTable buildStarTable(int n, int q) {
    StarTable t;
    t.n = n;
    t.q = q;
    if (q < 0 || q > n) return t;
    const auto subs = enumerateSubsets(n, q);
    t.entries.resize(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        std::vector<int> comp;
        comp.reserve(n - q);
        std::size_t k = 0;
        for (int v = 0; v < n; ++v) {
            if (k < subs[i].size() && subs[i][k] == v) {
                ++k;
            } else {
                comp.push_back(v);
            }
        }
        int inversions = 0;
        for (int s : subs[i])
            for (int c : comp)
                if (s > c) ++inversions;
        t.entries[i].target = static_cast<std::int32_t>(subsetRank(n, comp));
        t.entries[i].sign = static_cast<std::int8_t>((inversions % 2 == 0) ? 1 : -1);
    }
    return t;
}

template <typename Table, typename Key, typename Builder>
const Table& cachedTable(std::map<Key, std::unique_ptr<Table>>& cache, std::mutex& mu,
                         const Key& key, Builder&& build) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Table>(build())).first;
    return *it->second;
}

inline const IncidenceTable& incidenceTable(int n, int q) {
    static std::map<std::pair<int, int>, std::unique_ptr<IncidenceTable>> cache;
    static std::mutex mu;
    checkExteriorDim(n);
    return cachedTable(cache, mu, std::make_pair(n, q), [&] { return buildIncidenceTable(n, q); });
}

inline const WedgeTable& wedgeTable(int n, int p, int q) {
    static std::map<std::tuple<int, int, int>, std::unique_ptr<WedgeTable>> cache;
    static std::mutex mu;
    checkExteriorDim(n);
    return cachedTable(cache, mu, std::make_tuple(n, p, q),
                       [&] { return buildWedgeTable(n, p, q); });
}

inline const StarTable& starTable(int n, int q) {
    static std::map<std::pair<int, int>, std::unique_ptr<StarTable>> cache;
    static std::mutex mu;
    checkExteriorDim(n);
    return cachedTable(cache, mu, std::make_pair(n, q), [&] { return buildStarTable(n, q); });
}

}  // namespace detail

/// Element of Lambda^q of an n-dimensional inner-product space.
template <typename Scalar>
struct MultiVector {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    int dim = 0;
    int degree = 0;
    Vec coeffs;  // length binomial(dim, degree); empty for degenerate degrees

    MultiVector() = default;
    MultiVector(int n, int q, Vec c) : dim(n), degree(q), coeffs(std::move(c)) {
        detail::checkExteriorDim(n);
        if (coeffs.size() != binomial(n, q))
            throw DimensionMismatchError("multivector coefficient length " +
                                         std::to_string(coeffs.size()) + " != C(" +
                                         std::to_string(n) + "," + std::to_string(q) + ")");
    }

    static MultiVector zero(int n, int q) {
        detail::checkExteriorDim(n);
        MultiVector v;
        v.dim = n;
        v.degree = q;
        v.coeffs = Vec::Zero(binomial(n, q));
        return v;
    }

    /// k-th lexicographic basis element e_{i1} ^ ... ^ e_{iq}.
    static MultiVector basis(int n, int q, Eigen::Index k) {
        MultiVector v = zero(n, q);
        if (k < 0 || k >= v.coeffs.size())
            throw DimensionMismatchError("basis index out of range");
        v.coeffs[k] = Scalar(1);
        return v;
    }

    /// Scalar c as an element of Lambda^0.
    static MultiVector scalar(int n, Scalar c) {
        MultiVector v = zero(n, 0);
        v.coeffs[0] = c;
        return v;
    }

    /// A plain vector as an element of Lambda^1.
    static MultiVector fromVector(const Vec& u) {
        return MultiVector(static_cast<int>(u.size()), 1, u);
    }

    /// Positive volume element e_1 ^ ... ^ e_n.
    static MultiVector volume(int n) { return basis(n, n, 0); }

    bool isZeroSpace() const { return degree < 0 || degree > dim; }
    Scalar squaredNorm() const { return coeffs.squaredNorm(); }
    Scalar norm() const { return coeffs.norm(); }

    MultiVector operator+(const MultiVector& o) const {
        requireCompatible(o);
        MultiVector r = *this;
        r.coeffs += o.coeffs;
        return r;
    }
    MultiVector operator-(const MultiVector& o) const {
        requireCompatible(o);
        MultiVector r = *this;
        r.coeffs -= o.coeffs;
        return r;
    }
    MultiVector operator*(Scalar s) const {
        MultiVector r = *this;
        r.coeffs *= s;
        return r;
    }
    MultiVector& operator+=(const MultiVector& o) {
        requireCompatible(o);
        coeffs += o.coeffs;
        return *this;
    }

    void requireCompatible(const MultiVector& o) const {
        if (dim != o.dim) throw DimensionMismatchError("multivector dimension mismatch");
        if (degree != o.degree) throw DegreeMismatchError("multivector degree mismatch");
    }
};

template <typename Scalar>
MultiVector<Scalar> operator*(Scalar s, const MultiVector<Scalar>& v) {
    return v * s;
}

using MultiVectorXd = MultiVector<double>;

/// Dense linear map Lambda^p R^n -> Lambda^q R^n over the lexicographic bases.
template <typename Scalar>
struct DegreeMap {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    int dim = 0;
    int source_degree = 0;
    int target_degree = 0;
    Mat mat;  // binomial(n, target) x binomial(n, source)

    DegreeMap() = default;
    DegreeMap(int n, int src, int dst, Mat m)
        : dim(n), source_degree(src), target_degree(dst), mat(std::move(m)) {
        detail::checkExteriorDim(n);
        if (mat.rows() != binomial(n, dst) || mat.cols() != binomial(n, src))
            throw DimensionMismatchError("degree map shape mismatch");
    }

    static DegreeMap identity(int n, int q) {
        detail::checkExteriorDim(n);
        const auto d = binomial(n, q);
        return DegreeMap(n, q, q, Mat::Identity(d, d));
    }

    static DegreeMap zero(int n, int src, int dst) {
        detail::checkExteriorDim(n);
        return DegreeMap(n, src, dst, Mat::Zero(binomial(n, dst), binomial(n, src)));
    }
};

using DegreeMapXd = DegreeMap<double>;

/// map(V); shapes must match.
template <typename Scalar>
MultiVector<Scalar> apply(const DegreeMap<Scalar>& m, const MultiVector<Scalar>& v) {
    if (m.dim != v.dim) throw DimensionMismatchError("degree map / multivector dim mismatch");
    if (m.source_degree != v.degree)
        throw DegreeMismatchError("degree map expects degree " + std::to_string(m.source_degree) +
                                  ", got " + std::to_string(v.degree));
    MultiVector<Scalar> out;
    out.dim = m.dim;
    out.degree = m.target_degree;
    out.coeffs = m.mat * v.coeffs;
    return out;
}

/// Inverse of a square degree map. Throws SingularMatrixError with a
/// condition estimate when the matrix is not invertible.
template <typename Scalar>
DegreeMap<Scalar> inverse(const DegreeMap<Scalar>& m) {
    if (m.source_degree != m.target_degree || m.mat.rows() != m.mat.cols())
        throw DimensionMismatchError("inverse requires a square degree map");
    if (m.mat.size() == 0) return m;  // identity on the zero space
    Eigen::FullPivLU<typename DegreeMap<Scalar>::Mat> lu(m.mat);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<typename DegreeMap<Scalar>::Mat> svd(m.mat);
        const auto& sv = svd.singularValues();
        std::ostringstream os;
        os << "singular degree map (Lambda^" << m.source_degree << "), condition estimate ";
        if (sv.size() > 0 && sv(sv.size() - 1) > Scalar(0))
            os << sv(0) / sv(sv.size() - 1);
        else
            os << "inf";
        throw SingularMatrixError(os.str());
    }
    DegreeMap<Scalar> out = m;
    out.mat = lu.inverse();
    return out;
}

template <typename Scalar>
DegreeMap<Scalar> compose(const DegreeMap<Scalar>& a, const DegreeMap<Scalar>& b) {
    if (a.dim != b.dim || a.source_degree != b.target_degree)
        throw DimensionMismatchError("degree map composition mismatch");
    return DegreeMap<Scalar>(a.dim, b.source_degree, a.target_degree, a.mat * b.mat);
}

// ---------------------------------------------------------------------------
// Non-allocating kernels. `out` must be pre-sized and is overwritten.
// ---------------------------------------------------------------------------

/// out = iota_u V, with V of degree q+1 and out of degree q (table at (n, q)).
template <typename Scalar>
void interiorInto(const detail::IncidenceTable& t,
                  const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& u,
                  const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& v,
                  Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> out) {
    out.setZero();
    for (const auto& e : t.entries)
        out[e.lower] += Scalar(e.sign) * u[e.element] * v[e.upper];
}

/// out = u ^ V, with V of degree q and out of degree q+1 (table at (n, q)).
template <typename Scalar>
void wedgeVectorInto(const detail::IncidenceTable& t,
                     const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& u,
                     const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& v,
                     Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> out) {
    out.setZero();
    for (const auto& e : t.entries)
        out[e.upper] += Scalar(e.sign) * u[e.element] * v[e.lower];
}

// ---------------------------------------------------------------------------
// Value-returning operations.
// ---------------------------------------------------------------------------

/// Graded-anticommutative product; degrees add. Degenerate target degrees
/// yield the canonical zero element.
template <typename Scalar>
MultiVector<Scalar> wedge(const MultiVector<Scalar>& a, const MultiVector<Scalar>& b) {
    if (a.dim != b.dim) throw DimensionMismatchError("wedge dimension mismatch");
    MultiVector<Scalar> out = MultiVector<Scalar>::zero(a.dim, a.degree + b.degree);
    if (a.isZeroSpace() || b.isZeroSpace() || out.isZeroSpace()) return out;
    const auto& t = detail::wedgeTable(a.dim, a.degree, b.degree);
    for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) {
        const Scalar ai = a.coeffs[i];
        if (ai == Scalar(0)) continue;
        for (Eigen::Index j = 0; j < b.coeffs.size(); ++j) {
            const auto& e = t.entries[i * t.cols + j];
            if (e.sign != 0) out.coeffs[e.target] += Scalar(e.sign) * ai * b.coeffs[j];
        }
    }
    return out;
}

/// Interior product (annihilation operator): degree q -> q-1,
/// iota_u(v1 ^ ... ^ vq) = sum_j (-1)^(j+1) <u, vj> v1 ^ ... vj-hat ... ^ vq.
template <typename Scalar>
MultiVector<Scalar> interior(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u,
                             const MultiVector<Scalar>& v) {
    if (static_cast<int>(u.size()) != v.dim)
        throw DimensionMismatchError("interior product dimension mismatch");
    MultiVector<Scalar> out = MultiVector<Scalar>::zero(v.dim, v.degree - 1);
    if (v.isZeroSpace() || out.isZeroSpace()) return out;
    interiorInto<Scalar>(detail::incidenceTable(v.dim, v.degree - 1), u, v.coeffs, out.coeffs);
    return out;
}

/// u ^ V as a degree-raising operation against a plain vector.
template <typename Scalar>
MultiVector<Scalar> wedgeVector(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u,
                                const MultiVector<Scalar>& v) {
    if (static_cast<int>(u.size()) != v.dim)
        throw DimensionMismatchError("wedge dimension mismatch");
    MultiVector<Scalar> out = MultiVector<Scalar>::zero(v.dim, v.degree + 1);
    if (v.isZeroSpace() || out.isZeroSpace()) return out;
    wedgeVectorInto<Scalar>(detail::incidenceTable(v.dim, v.degree), u, v.coeffs, out.coeffs);
    return out;
}

/// Hodge star Lambda^q -> Lambda^(n-q) for the orientation e_1 ^ ... ^ e_n.
template <typename Scalar>
MultiVector<Scalar> hodgeStar(const MultiVector<Scalar>& v) {
    MultiVector<Scalar> out = MultiVector<Scalar>::zero(v.dim, v.dim - v.degree);
    if (v.isZeroSpace()) return out;
    const auto& t = detail::starTable(v.dim, v.degree);
    for (Eigen::Index i = 0; i < v.coeffs.size(); ++i)
        out.coeffs[t.entries[i].target] = Scalar(t.entries[i].sign) * v.coeffs[i];
    return out;
}

/// Euclidean inner product in which the lexicographic wedge basis is
/// orthonormal.
template <typename Scalar>
Scalar inner(const MultiVector<Scalar>& a, const MultiVector<Scalar>& b) {
    if (a.dim != b.dim) throw DimensionMismatchError("inner product dimension mismatch");
    if (a.degree != b.degree) throw DegreeMismatchError("inner product degree mismatch");
    if (a.isZeroSpace()) return Scalar(0);
    return a.coeffs.dot(b.coeffs);
}

/// Induced map Lambda^q A: (v1 ^ ... ^ vq) -> (A v1 ^ ... ^ A vq).
/// A may be rectangular (m x n); the result maps Lambda^q R^n -> Lambda^q R^m.
/// Entries are the q x q minors det A(T, S).
template <typename Scalar>
DegreeMap<Scalar> inducedPower(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                               int q) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    detail::checkExteriorDim(n);
    detail::checkExteriorDim(m);
    if (q < 0)
        throw DegreeMismatchError("induced power of negative degree");
    using Mat = typename DegreeMap<Scalar>::Mat;
    Mat out = Mat::Zero(binomial(m, q), binomial(n, q));
    if (q == 0) {
        out(0, 0) = Scalar(1);
    } else if (q <= n && q <= m) {
        const auto rows = detail::enumerateSubsets(m, q);
        const auto cols = detail::enumerateSubsets(n, q);
        Mat minor(q, q);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                for (int r = 0; r < q; ++r)
                    for (int c = 0; c < q; ++c) minor(r, c) = a(rows[i][r], cols[j][c]);
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    minor.determinant();
            }
        }
    }
    // the degenerate case q > min(m, n) stays the zero map into/from the zero space
    DegreeMap<Scalar> dm;
    dm.dim = n;  // source-side bookkeeping; callers treat target as Lambda^q R^m
    dm.source_degree = q;
    dm.target_degree = q;
    dm.mat = std::move(out);
    return dm;
}

/// Push a frame-coordinate multivector through an m x n frame matrix,
/// producing its ambient-coordinate representation: Lambda^q(F) V.
template <typename Scalar>
MultiVector<Scalar> pushforward(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& f,
                                const MultiVector<Scalar>& v) {
    if (static_cast<int>(f.cols()) != v.dim)
        throw DimensionMismatchError("pushforward frame/multivector mismatch");
    const int m = static_cast<int>(f.rows());
    MultiVector<Scalar> out = MultiVector<Scalar>::zero(m, v.degree);
    if (v.isZeroSpace() || out.isZeroSpace()) return out;
    if (v.degree == 0) {
        out.coeffs = v.coeffs;
        return out;
    }
    const auto dm = inducedPower<Scalar>(f, v.degree);
    out.coeffs = dm.mat * v.coeffs;
    return out;
}

}  // namespace heatforms
