#pragma once

#include "linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace confmodel {

// Element of a finite-dimensional algebra: basis index -> coefficient.
using AVec = std::map<int, Rational>;

inline void add_to(AVec& x, int i, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(i, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

inline void add_to(AVec& x, const AVec& y, const Rational& c = 1) {
    for (const auto& [i, v] : y) add_to(x, i, c * v);
}

// Element of A ⊗ A.
using TensorElement = std::map<std::pair<int, int>, Rational>;

struct PdReport {
    bool ok = true;
    std::string message;  // first failing identity with witness
};

// Poincaré duality CDGA given by structure constants. Construct through
// PdAlgebra::make (or a builtin), which validates and fills the derived data.
class PdAlgebra {
public:
    struct Data {
        std::string name;
        int n = 0;
        std::vector<std::string> names;
        std::vector<int> degrees;
        int unit = 0;
        std::vector<std::vector<AVec>> mult;  // mult[i][j] = e_i e_j
        std::vector<AVec> diff;               // d e_i (empty = zero)
        std::vector<Rational> eps;            // ε(e_i), nonzero only in degree n
    };

    static PdReport verify(const Data& a);
    static PdAlgebra make(Data d);  // throws std::invalid_argument with the report

    const std::string& name() const { return d_.name; }
    int n() const { return d_.n; }
    int dim() const { return static_cast<int>(d_.names.size()); }
    int degree(int i) const { return d_.degrees[i]; }
    const std::string& basis_name(int i) const { return d_.names[i]; }
    int unit() const { return d_.unit; }
    const Data& data() const { return d_; }

    const AVec& mul(int i, int j) const { return d_.mult[i][j]; }
    AVec mul(const AVec& x, const AVec& y) const {
        AVec r;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) add_to(r, d_.mult[i][j], a * b);
        return r;
    }
    const AVec& d(int i) const { return d_.diff[i]; }
    AVec d(const AVec& x) const {
        AVec r;
        for (const auto& [i, a] : x) add_to(r, d_.diff[i], a);
        return r;
    }
    bool has_differential() const {
        for (const auto& v : d_.diff)
            if (!v.empty()) return true;
        return false;
    }
    Rational eps(int i) const { return d_.eps[i]; }
    Rational eps(const AVec& x) const {
        Rational s = 0;
        for (const auto& [i, a] : x) s += a * d_.eps[i];
        return s;
    }
    AVec basis_vec(int i) const { return AVec{{i, 1}}; }

    // Dual basis under (a, b) -> ε(ab): ε(e_i · dual(i)) = 1, ε(e_i · dual(j)) = 0.
    const AVec& dual(int i) const { return dual_[i]; }
    const AVec& vol() const { return vol_; }
    // Δ_A = Σ (−1)^{|a_i|} a_i ⊗ a_i^∨ expanded in the basis.
    const TensorElement& diagonal() const { return delta_; }
    int euler() const { return chi_; }
    AVec euler_class() const {
        AVec r;
        add_to(r, vol_, Rational(chi_));
        return r;
    }
    std::vector<int> basis_of_degree(int k) const {
        std::vector<int> r;
        for (int i = 0; i < dim(); ++i)
            if (d_.degrees[i] == k) r.push_back(i);
        return r;
    }
    Poly cohomology() const { return cohom_; }

private:
    Data d_;
    std::vector<AVec> dual_;
    AVec vol_;
    TensorElement delta_;
    int chi_ = 0;
    Poly cohom_;
};

namespace detail {

inline std::string avec_str(const PdAlgebra::Data& a, const AVec& v) {
    if (v.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [i, c] : v) {
        if (!first) s += " + ";
        first = false;
        if (c != 1) s += "(" + c.get_str() + ")";
        s += a.names[i];
    }
    return s;
}

}  // namespace detail

inline PdReport PdAlgebra::verify(const Data& a) {
    auto fail = [](std::string m) { return PdReport{false, std::move(m)}; };
    const int N = static_cast<int>(a.names.size());
    if (a.n < 0) return fail("negative formal dimension");
    if (N == 0) return fail("empty basis");
    if (static_cast<int>(a.degrees.size()) != N || static_cast<int>(a.mult.size()) != N ||
        static_cast<int>(a.diff.size()) != N || static_cast<int>(a.eps.size()) != N)
        return fail("inconsistent table sizes");
    for (const auto& row : a.mult)
        if (static_cast<int>(row.size()) != N) return fail("inconsistent product table");
    for (int i = 0; i < N; ++i)
        if (a.degrees[i] < 0 || a.degrees[i] > a.n)
            return fail("basis element " + a.names[i] + " has degree outside [0, n]");
    if (a.unit < 0 || a.unit >= N || a.degrees[a.unit] != 0) return fail("unit must have degree 0");
    int deg0 = 0;
    for (int i = 0; i < N; ++i) deg0 += (a.degrees[i] == 0);
    if (deg0 != 1) return fail("not connected: degree-0 part has dimension " + std::to_string(deg0));

    auto mulv = [&](const AVec& x, const AVec& y) {
        AVec r;
        for (const auto& [i, p] : x)
            for (const auto& [j, q] : y) add_to(r, a.mult[i][j], p * q);
        return r;
    };
    auto dv = [&](const AVec& x) {
        AVec r;
        for (const auto& [i, p] : x) add_to(r, a.diff[i], p);
        return r;
    };
    auto e = [](int i) { return AVec{{i, 1}}; };

    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (const auto& [k, c] : a.mult[i][j]) {
                if (k < 0 || k >= N) return fail("product index out of range");
                if (a.degrees[k] != a.degrees[i] + a.degrees[j])
                    return fail("product " + a.names[i] + "*" + a.names[j] + " is not homogeneous");
            }
    for (int i = 0; i < N; ++i) {
        if (a.mult[a.unit][i] != e(i) || a.mult[i][a.unit] != e(i))
            return fail("unit law fails on " + a.names[i]);
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            AVec lhs = a.mult[i][j];
            AVec rhs;
            add_to(rhs, a.mult[j][i], Rational(koszul(1LL * a.degrees[i] * a.degrees[j])));
            if (lhs != rhs)
                return fail("graded commutativity fails on (" + a.names[i] + ", " + a.names[j] + ")");
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                if (mulv(a.mult[i][j], e(k)) != mulv(e(i), a.mult[j][k]))
                    return fail("associativity fails on (" + a.names[i] + ", " + a.names[j] + ", " +
                                a.names[k] + ")");
    for (int i = 0; i < N; ++i)
        for (const auto& [k, c] : a.diff[i]) {
            if (k < 0 || k >= N) return fail("differential index out of range");
            if (a.degrees[k] != a.degrees[i] + 1)
                return fail("d(" + a.names[i] + ") does not have degree +1");
        }
    for (int i = 0; i < N; ++i)
        if (!dv(a.diff[i]).empty()) return fail("d^2 != 0 on " + a.names[i]);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            AVec lhs = dv(a.mult[i][j]);
            AVec rhs = mulv(a.diff[i], e(j));
            add_to(rhs, mulv(e(i), a.diff[j]), Rational(koszul(a.degrees[i])));
            if (lhs != rhs)
                return fail("Leibniz rule fails on (" + a.names[i] + ", " + a.names[j] + ")");
        }
    for (int i = 0; i < N; ++i)
        if (a.eps[i] != 0 && a.degrees[i] != a.n)
            return fail("pairing value on " + a.names[i] + " which is not of degree n");
    for (int i = 0; i < N; ++i) {
        Rational s = 0;
        for (const auto& [k, c] : a.diff[i]) s += c * a.eps[k];
        if (s != 0) return fail("eps(d " + a.names[i] + ") != 0");
    }
    for (int k = 0; k <= a.n; ++k) {
        std::vector<int> lo, hi;
        for (int i = 0; i < N; ++i) {
            if (a.degrees[i] == k) lo.push_back(i);
            if (a.degrees[i] == a.n - k) hi.push_back(i);
        }
        if (lo.size() != hi.size())
            return fail("pairing A^" + std::to_string(k) + " x A^" + std::to_string(a.n - k) +
                        " is not square");
        if (lo.empty()) continue;
        SparseMatrix m(static_cast<int>(lo.size()), static_cast<int>(hi.size()));
        for (std::size_t r = 0; r < lo.size(); ++r)
            for (std::size_t c = 0; c < hi.size(); ++c) {
                Rational v = 0;
                for (const auto& [t, x] : a.mult[lo[r]][hi[c]]) v += x * a.eps[t];
                m.add(static_cast<int>(r), static_cast<int>(c), v);
            }
        if (rank(m) != static_cast<int>(lo.size()))
            return fail("pairing A^" + std::to_string(k) + " x A^" + std::to_string(a.n - k) +
                        " is degenerate");
    }
    return {};
}

inline PdAlgebra PdAlgebra::make(Data d) {
    PdReport rep = verify(d);
    if (!rep.ok) throw std::invalid_argument("invalid Poincare duality algebra '" + d.name + "': " + rep.message);
    PdAlgebra A;
    A.d_ = std::move(d);
    const auto& a = A.d_;
    const int N = A.dim();
    A.dual_.assign(N, {});
    for (int k = 0; k <= a.n; ++k) {
        std::vector<int> lo = A.basis_of_degree(k), hi = A.basis_of_degree(a.n - k);
        if (lo.empty()) continue;
        std::vector<std::vector<Rational>> P(lo.size(), std::vector<Rational>(hi.size(), 0));
        for (std::size_t r = 0; r < lo.size(); ++r)
            for (std::size_t c = 0; c < hi.size(); ++c) P[r][c] = A.eps(a.mult[lo[r]][hi[c]]);
        auto C = inverse(P);
        // dual(lo[j]) = Σ_l C[l][j] hi[l]
        for (std::size_t j = 0; j < lo.size(); ++j) {
            AVec v;
            for (std::size_t l = 0; l < hi.size(); ++l) add_to(v, hi[l], C[l][j]);
            A.dual_[lo[j]] = v;
        }
    }
    {
        std::vector<int> top = A.basis_of_degree(a.n);
        if (top.size() != 1) throw std::invalid_argument("top degree is not one-dimensional");
        A.vol_ = AVec{{top[0], 1 / A.eps(top[0])}};
    }
    for (int i = 0; i < N; ++i) {
        Rational s = koszul(a.degrees[i]);
        for (const auto& [j, c] : A.dual_[i]) A.delta_[{i, j}] += s * c;
    }
    for (auto it = A.delta_.begin(); it != A.delta_.end();)
        it = (it->second == 0) ? A.delta_.erase(it) : std::next(it);

    CochainComplex cx;
    std::map<int, std::vector<int>> bydeg;
    for (int i = 0; i < N; ++i) bydeg[a.degrees[i]].push_back(i);
    std::map<int, int> pos;
    for (auto& [k, v] : bydeg) {
        cx.set_dim(k, static_cast<int>(v.size()));
        for (std::size_t t = 0; t < v.size(); ++t) pos[v[t]] = static_cast<int>(t);
    }
    for (auto& [k, v] : bydeg) {
        if (!bydeg.count(k + 1)) continue;
        SparseMatrix m(static_cast<int>(bydeg[k + 1].size()), static_cast<int>(v.size()));
        for (int i : v)
            for (const auto& [j, c] : a.diff[i]) m.add(pos[j], pos[i], c);
        cx.set_d(k, m);
    }
    A.cohom_ = cx.betti();
    A.chi_ = static_cast<int>(A.cohom_.euler());

    // μ(Δ) = χ·vol; failure here means the input contradicts the identity.
    AVec mu;
    for (const auto& [ij, c] : A.delta_) add_to(mu, a.mult[ij.first][ij.second], c);
    if (mu != A.euler_class())
        throw std::logic_error("internal consistency: mu(Delta) != chi * vol for " + a.name);
    return A;
}

inline std::string element_string(const PdAlgebra& A, const AVec& v) {
    return detail::avec_str(A.data(), v);
}

inline std::string tensor_string(const PdAlgebra& A, const TensorElement& t) {
    if (t.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [ij, c] : t) {
        if (first) {
            if (c < 0) s += "-";
        } else {
            s += (c < 0) ? " - " : " + ";
        }
        first = false;
        Rational m = abs(c);
        if (m != 1) s += m.get_str() + "*";
        s += A.basis_name(ij.first) + "⊗" + A.basis_name(ij.second);
    }
    return s;
}

struct DiagonalChecks {
    bool cocycle = false;
    bool symmetry = false;    // Δ^{21} = (−1)^n Δ
    bool transfer = false;    // (a⊗1)Δ = (1⊗a)Δ for all basis a
    bool euler = false;       // μ(Δ) = χ·vol
    std::string witness;
    bool ok() const { return cocycle && symmetry && transfer && euler; }
};

// Products in A ⊗ A with the Koszul rule (a⊗b)(a'⊗b') = (−1)^{|b||a'|} aa'⊗bb'.
inline TensorElement tensor_mul(const PdAlgebra& A, const TensorElement& x, const TensorElement& y) {
    TensorElement r;
    for (const auto& [p, c] : x)
        for (const auto& [q, e] : y) {
            Rational s = c * e * koszul(1LL * A.degree(p.second) * A.degree(q.first));
            for (const auto& [i, u] : A.mul(p.first, q.first))
                for (const auto& [j, v] : A.mul(p.second, q.second)) r[{i, j}] += s * u * v;
        }
    for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
    return r;
}

inline TensorElement tensor_d(const PdAlgebra& A, const TensorElement& x) {
    TensorElement r;
    for (const auto& [p, c] : x) {
        for (const auto& [i, u] : A.d(p.first)) r[{i, p.second}] += c * u;
        Rational s = c * koszul(A.degree(p.first));
        for (const auto& [j, v] : A.d(p.second)) r[{p.first, j}] += s * v;
    }
    for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
    return r;
}

inline DiagonalChecks check_diagonal(const PdAlgebra& A) {
    DiagonalChecks c;
    const auto& D = A.diagonal();
    c.cocycle = tensor_d(A, D).empty();
    if (!c.cocycle) c.witness = "d(Delta) != 0";
    TensorElement flip;
    for (const auto& [p, v] : D)
        flip[{p.second, p.first}] += v * koszul(1LL * A.degree(p.first) * A.degree(p.second));
    TensorElement signed_d;
    for (const auto& [p, v] : D) signed_d[p] = v * koszul(A.n());
    c.symmetry = (flip == signed_d);
    if (!c.symmetry && c.witness.empty()) c.witness = "Delta^21 != (-1)^n Delta";
    c.transfer = true;
    for (int a = 0; a < A.dim() && c.transfer; ++a) {
        TensorElement l{{{a, A.unit()}, 1}}, r{{{A.unit(), a}, 1}};
        if (tensor_mul(A, l, D) != tensor_mul(A, r, D)) {
            c.transfer = false;
            if (c.witness.empty()) c.witness = "(a⊗1)Delta != (1⊗a)Delta for a = " + A.basis_name(a);
        }
    }
    AVec mu;
    for (const auto& [p, v] : D) add_to(mu, A.mul(p.first, p.second), v);
    c.euler = (mu == A.euler_class());
    if (!c.euler && c.witness.empty()) c.witness = "mu(Delta) != chi * vol";
    return c;
}

// Künneth product with Koszul signs.
inline PdAlgebra tensor_product(const PdAlgebra& X, const PdAlgebra& Y) {
    PdAlgebra::Data d;
    d.name = X.name() + "x" + Y.name();
    d.n = X.n() + Y.n();
    const int nx = X.dim(), ny = Y.dim();
    auto idx = [ny](int i, int j) { return i * ny + j; };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const std::string& a = X.basis_name(i);
            const std::string& b = Y.basis_name(j);
            std::string nm;
            if (i == X.unit() && j == Y.unit()) nm = "1";
            else if (i == X.unit()) nm = "1*" + b;
            else if (j == Y.unit()) nm = a + "*1";
            else nm = a + "*" + b;
            d.names.push_back(nm);
            d.degrees.push_back(X.degree(i) + Y.degree(j));
        }
    d.unit = idx(X.unit(), Y.unit());
    const int N = nx * ny;
    d.mult.assign(N, std::vector<AVec>(N));
    d.diff.assign(N, {});
    d.eps.assign(N, 0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            for (int k = 0; k < nx; ++k)
                for (int l = 0; l < ny; ++l) {
                    Rational s = koszul(1LL * Y.degree(j) * X.degree(k));
                    AVec& out = d.mult[idx(i, j)][idx(k, l)];
                    for (const auto& [p, u] : X.mul(i, k))
                        for (const auto& [q, v] : Y.mul(j, l)) add_to(out, idx(p, q), s * u * v);
                }
            AVec& dd = d.diff[idx(i, j)];
            for (const auto& [p, u] : X.d(i)) add_to(dd, idx(p, j), u);
            for (const auto& [q, v] : Y.d(j)) add_to(dd, idx(i, q), v * koszul(X.degree(i)));
            d.eps[idx(i, j)] = X.eps(i) * Y.eps(j);
        }
    return PdAlgebra::make(std::move(d));
}

inline PdAlgebra sphere(int n) {
    if (n < 2) throw std::invalid_argument("sphere: dimension must be >= 2 (simply connected)");
    PdAlgebra::Data d;
    d.name = "S" + std::to_string(n);
    d.n = n;
    d.names = {"1", "v"};
    d.degrees = {0, n};
    d.unit = 0;
    d.mult = {{{{0, 1}}, {{1, 1}}}, {{{1, 1}}, {}}};
    d.diff = {{}, {}};
    d.eps = {0, 1};
    return PdAlgebra::make(std::move(d));
}

inline PdAlgebra complex_projective(int m) {
    if (m < 1) throw std::invalid_argument("complex_projective: m must be >= 1");
    PdAlgebra::Data d;
    d.name = "CP" + std::to_string(m);
    d.n = 2 * m;
    for (int i = 0; i <= m; ++i) {
        d.names.push_back(i == 0 ? "1" : (i == 1 ? "c" : "c^" + std::to_string(i)));
        d.degrees.push_back(2 * i);
    }
    d.unit = 0;
    d.mult.assign(m + 1, std::vector<AVec>(m + 1));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            if (i + j <= m) d.mult[i][j] = AVec{{i + j, 1}};
    d.diff.assign(m + 1, {});
    d.eps.assign(m + 1, 0);
    d.eps[m] = 1;
    return PdAlgebra::make(std::move(d));
}

// Ground field viewed as a PD algebra of dimension 0.
inline PdAlgebra point() {
    PdAlgebra::Data d;
    d.name = "pt";
    d.n = 0;
    d.names = {"1"};
    d.degrees = {0};
    d.unit = 0;
    d.mult = {{{{0, 1}}}};
    d.diff = {{}};
    d.eps = {1};
    return PdAlgebra::make(std::move(d));
}

namespace detail {

inline std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string strip_parens(std::string s) {
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
}

inline int parse_int(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (...) {
        throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
    return v;
}

}  // namespace detail

// Builtin name grammar: sphere:N | cp:M | complex_projective:M | point |
// product:X,Y (nest with parentheses, e.g. product:(product:sphere:2,sphere:2),sphere:3).
// The "fat" model fat_sphere3 is a non-minimal model of S^3 with nonzero d.
inline PdAlgebra builtin(const std::string& name_in) {
    std::string name = detail::strip_parens(name_in);
    auto colon = name.find(':');
    std::string head = name.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (head == "sphere") return sphere(detail::parse_int(rest, "sphere"));
    if (head == "cp" || head == "complex_projective") return complex_projective(detail::parse_int(rest, "complex_projective"));
    if (head == "point" && rest.empty()) return point();
    if (head == "product") {
        auto parts = detail::split_top(rest);
        if (parts.size() != 2) throw std::invalid_argument("product needs exactly two factors: '" + name + "'");
        return tensor_product(builtin(parts[0]), builtin(parts[1]));
    }
    if (head == "fat_sphere3" && rest.empty()) {
        // basis 1, x (1), y (2), xy (3); dx = y
        PdAlgebra::Data d;
        d.name = "fatS3";
        d.n = 3;
        d.names = {"1", "x", "y", "xy"};
        d.degrees = {0, 1, 2, 3};
        d.unit = 0;
        d.mult.assign(4, std::vector<AVec>(4));
        for (int i = 0; i < 4; ++i) {
            d.mult[0][i] = AVec{{i, 1}};
            d.mult[i][0] = AVec{{i, 1}};
        }
        d.mult[1][2] = AVec{{3, 1}};
        d.mult[2][1] = AVec{{3, 1}};
        d.diff = {{}, {{2, 1}}, {}, {}};
        d.eps = {0, 0, 0, 1};
        return PdAlgebra::make(std::move(d));
    }
    throw std::invalid_argument("unknown builtin algebra: '" + name_in + "'");
}

}  // namespace confmodel
