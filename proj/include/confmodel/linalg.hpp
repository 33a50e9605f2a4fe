#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace confmodel {

// mpq_class keeps values canonical (lowest terms, positive denominator)
// after every arithmetic operation.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline int koszul(long long a) { return (a % 2 == 0) ? 1 : -1; }

// Adds c to the coefficient of k, erasing zeros.
template <class Map, class Key>
inline void add_coef(Map& x, const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

// Sparse vector keyed by an integer index; used for columns and rows.
using SparseVec = std::vector<std::pair<int, Rational>>;

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    // Adds v to entry (i, j); zero results are dropped.
    void add(int i, int j, const Rational& v) {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("matrix index");
        if (v == 0) return;
        auto& c = col_[j];
        auto it = std::lower_bound(c.begin(), c.end(), i,
                                   [](const auto& e, int r) { return e.first < r; });
        if (it != c.end() && it->first == i) {
            it->second += v;
            if (it->second == 0) c.erase(it);
        } else {
            c.insert(it, {i, v});
        }
    }

    Rational at(int i, int j) const {
        const auto& c = col_.at(j);
        auto it = std::lower_bound(c.begin(), c.end(), i,
                                   [](const auto& e, int r) { return e.first < r; });
        if (it != c.end() && it->first == i) return it->second;
        return 0;
    }

    const SparseVec& column(int j) const { return col_.at(j); }

    std::size_t nnz() const {
        std::size_t s = 0;
        for (const auto& c : col_) s += c.size();
        return s;
    }

    bool is_zero() const { return nnz() == 0; }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (int j = 0; j < cols_; ++j)
            for (const auto& [i, v] : col_[j]) t.col_[i].push_back({j, v});
        return t;
    }

    // this * other
    SparseMatrix operator*(const SparseMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        SparseMatrix r(rows_, o.cols_);
        for (int j = 0; j < o.cols_; ++j) {
            std::map<int, Rational> acc;
            for (const auto& [k, v] : o.col_[j])
                for (const auto& [i, w] : col_[k]) acc[i] += w * v;
            for (auto& [i, v] : acc)
                if (v != 0) r.col_[j].push_back({i, v});
        }
        return r;
    }

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<SparseVec> col_;
};

namespace detail {

// row := row - f * piv, both sorted by column index
inline void axpy(SparseVec& row, const Rational& f, const SparseVec& piv) {
    SparseVec out;
    out.reserve(row.size() + piv.size());
    std::size_t a = 0, b = 0;
    while (a < row.size() || b < piv.size()) {
        if (b == piv.size() || (a < row.size() && row[a].first < piv[b].first)) {
            out.push_back(std::move(row[a++]));
        } else if (a == row.size() || piv[b].first < row[a].first) {
            out.push_back({piv[b].first, -f * piv[b].second});
            ++b;
        } else {
            Rational v = row[a].second - f * piv[b].second;
            if (v != 0) out.push_back({row[a].first, std::move(v)});
            ++a;
            ++b;
        }
    }
    row.swap(out);
}

}  // namespace detail

// Exact rank by sparse elimination on leading entries. Rows are processed
// shortest first, which keeps fill-in low on the incidence-like matrices
// produced by the complexes here.
inline int rank(const SparseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    // work with the orientation that has fewer vectors
    const bool use_cols = m.cols() <= m.rows();
    SparseMatrix t = use_cols ? m : m.transpose();
    std::vector<SparseVec> vecs;
    for (int j = 0; j < t.cols(); ++j)
        if (!t.column(j).empty()) vecs.push_back(t.column(j));
    std::stable_sort(vecs.begin(), vecs.end(),
                     [](const SparseVec& a, const SparseVec& b) { return a.size() < b.size(); });
    std::map<int, SparseVec> pivots;  // leading index -> normalized vector
    int r = 0;
    for (auto& v : vecs) {
        while (!v.empty()) {
            auto it = pivots.find(v.front().first);
            if (it == pivots.end()) break;
            Rational f = v.front().second;
            detail::axpy(v, f, it->second);
        }
        if (v.empty()) continue;
        Rational lead = v.front().second;
        for (auto& e : v) e.second /= lead;
        pivots.emplace(v.front().first, std::move(v));
        ++r;
    }
    return r;
}

// Dense inverse by Gauss-Jordan; throws if singular.
inline std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rational piv = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

// Laurent polynomial with integer coefficients: degree -> coefficient.
struct Poly {
    std::map<int, long long> c;

    static Poly one() { return Poly{{{0, 1}}}; }
    static Poly monomial(int deg, long long coef) {
        Poly p;
        if (coef != 0) p.c[deg] = coef;
        return p;
    }
    void add(int deg, long long v) {
        if (v == 0) return;
        if ((c[deg] += v) == 0) c.erase(deg);
    }
    Poly operator*(const Poly& o) const {
        Poly r;
        for (auto [d1, a] : c)
            for (auto [d2, b] : o.c) r.add(d1 + d2, a * b);
        return r;
    }
    Poly operator+(const Poly& o) const {
        Poly r = *this;
        for (auto [d, a] : o.c) r.add(d, a);
        return r;
    }
    bool operator==(const Poly& o) const { return c == o.c; }
    long long at(int d) const {
        auto it = c.find(d);
        return it == c.end() ? 0 : it->second;
    }
    long long euler() const {
        long long s = 0;
        for (auto [d, a] : c) s += (d % 2 == 0 ? a : -a);
        return s;
    }
    long long total() const {
        long long s = 0;
        for (auto [d, a] : c) s += a;
        return s;
    }
    std::string str() const {
        if (c.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto [d, a] : c) {
            long long m = a < 0 ? -a : a;
            if (first) {
                if (a < 0) os << "-";
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            first = false;
            if (d == 0) {
                os << m;
                continue;
            }
            if (m != 1) os << m;
            os << "t";
            if (d != 1) os << "^" << d;
        }
        return os.str();
    }
};

struct DegreeFailure {
    int degree;          // d_{degree+1} * d_degree != 0
    int witness_column;  // basis index in degree `degree`
};

struct ComplexReport {
    bool ok = true;
    std::string structural_error;
    std::vector<DegreeFailure> failures;
};

// Integer-graded cochain complex; d_k maps degree k to degree k+1.
class CochainComplex {
public:
    void set_dim(int k, int dim) {
        if (dim > 0) dims_[k] = dim;
        else dims_.erase(k);
    }
    void set_d(int k, SparseMatrix m) { d_[k] = std::move(m); }

    int dim(int k) const {
        auto it = dims_.find(k);
        return it == dims_.end() ? 0 : it->second;
    }
    const std::map<int, int>& dims() const { return dims_; }
    const std::map<int, SparseMatrix>& differentials() const { return d_; }

    // d_k, or the zero map of the right shape when absent
    SparseMatrix d(int k) const {
        auto it = d_.find(k);
        if (it != d_.end()) return it->second;
        return SparseMatrix(dim(k + 1), dim(k));
    }

    ComplexReport verify() const {
        ComplexReport rep;
        for (const auto& [k, m] : d_) {
            if (m.cols() != dim(k) || m.rows() != dim(k + 1)) {
                rep.ok = false;
                rep.structural_error = "d_" + std::to_string(k) + " has shape " +
                                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                       ", expected " + std::to_string(dim(k + 1)) + "x" +
                                       std::to_string(dim(k));
                return rep;
            }
        }
        for (const auto& [k, m] : d_) {
            auto nx = d_.find(k + 1);
            if (nx == d_.end()) continue;
            SparseMatrix p = nx->second * m;
            for (int j = 0; j < p.cols(); ++j) {
                if (!p.column(j).empty()) {
                    rep.ok = false;
                    rep.failures.push_back({k, j});
                    break;
                }
            }
        }
        return rep;
    }

    // Betti numbers; refuses when d^2 != 0.
    Poly betti() const {
        ComplexReport rep = verify();
        if (!rep.ok) {
            std::string msg = "betti_numbers: not a complex";
            if (!rep.structural_error.empty()) msg += " (" + rep.structural_error + ")";
            for (const auto& f : rep.failures)
                msg += "; d^2 != 0 at degree " + std::to_string(f.degree) + ", column " +
                       std::to_string(f.witness_column);
            throw std::logic_error(msg);
        }
        std::map<int, int> rk;
        for (const auto& [k, m] : d_) rk[k] = rank(m);
        Poly p;
        for (const auto& [k, n] : dims_) {
            long long b = n;
            if (auto it = rk.find(k); it != rk.end()) b -= it->second;
            if (auto it = rk.find(k - 1); it != rk.end()) b -= it->second;
            p.add(k, b);
        }
        return p;
    }

    Poly dimension_poly() const {
        Poly p;
        for (auto [k, n] : dims_) p.add(k, n);
        return p;
    }

private:
    std::map<int, int> dims_;
    std::map<int, SparseMatrix> d_;
};

// Assigns dense indices per degree to a set of keys.
template <class Key>
struct GradedBasis {
    std::map<int, std::vector<Key>> by_degree;
    std::map<Key, std::pair<int, int>> index;  // key -> (degree, position)

    void insert(int deg, const Key& k) {
        if (index.count(k)) return;
        auto& v = by_degree[deg];
        index.emplace(k, std::make_pair(deg, static_cast<int>(v.size())));
        v.push_back(k);
    }
    int dim(int deg) const {
        auto it = by_degree.find(deg);
        return it == by_degree.end() ? 0 : static_cast<int>(it->second.size());
    }
    std::optional<std::pair<int, int>> find(const Key& k) const {
        auto it = index.find(k);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

// Complex from a graded basis and a differential returning a map Key -> Rational.
template <class Key, class Diff>
CochainComplex build_complex(const GradedBasis<Key>& gb, Diff&& d) {
    CochainComplex cx;
    for (const auto& [deg, v] : gb.by_degree) cx.set_dim(deg, static_cast<int>(v.size()));
    for (const auto& [deg, v] : gb.by_degree) {
        const int target = gb.dim(deg + 1);
        SparseMatrix m(target, static_cast<int>(v.size()));
        for (std::size_t j = 0; j < v.size(); ++j)
            for (const auto& [t, c] : d(v[j])) {
                auto p = gb.find(t);
                if (!p || p->first != deg + 1) throw std::logic_error("differential left the basis");
                m.add(p->second, static_cast<int>(j), c);
            }
        if (target > 0) cx.set_d(deg, std::move(m));
    }
    return cx;
}

}  // namespace confmodel
