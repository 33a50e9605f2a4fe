#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace confmodel {

// Vertices are integer labels; the ambient order is the integer order.
using Edge = std::pair<int, int>;
// Admissible monomial: edges (i, j), i < j, sorted by strictly increasing j.
using Monomial = std::vector<Edge>;
// Linear combination of admissible monomials.
using EnElement = std::map<Monomial, Rational>;

inline void add_term(EnElement& x, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

inline bool is_admissible(const Monomial& m) {
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s].first >= m[s].second) return false;
        if (s > 0 && m[s - 1].second >= m[s].second) return false;
    }
    return true;
}

namespace detail {

// Sorts edges by (right, left); returns the sign (−1)^{(n−1)·inversions}.
inline int sort_edges(std::vector<Edge>& w, int n) {
    int sign = 1;
    const bool odd = ((n - 1) % 2 != 0);
    for (std::size_t i = 1; i < w.size(); ++i) {
        for (std::size_t j = i; j > 0; --j) {
            auto key = [](const Edge& e) { return std::make_pair(e.second, e.first); };
            if (key(w[j - 1]) > key(w[j])) {
                std::swap(w[j - 1], w[j]);
                if (odd) sign = -sign;
            } else {
                break;
            }
        }
    }
    return sign;
}

inline void reduce_rec(std::vector<Edge> w, long coef, int n, std::map<Monomial, long>& out) {
    for (auto& e : w) {
        if (e.first == e.second) throw std::invalid_argument("omega with equal endpoints");
        if (e.first > e.second) {
            std::swap(e.first, e.second);
            if (n % 2 != 0) coef = -coef;
        }
    }
    coef *= sort_edges(w, n);
    for (std::size_t s = 1; s < w.size(); ++s)
        if (w[s] == w[s - 1]) return;  // ω² = 0
    // largest right endpoint occurring twice
    for (std::size_t s = w.size(); s-- > 1;) {
        if (w[s].second != w[s - 1].second) continue;
        // w[s-1] = (i, j), w[s] = (k, j) with i < k, adjacent in the word:
        // ω_ij ω_kj = ω_ik ω_kj + (−1)^n ω_ij ω_ik
        const int i = w[s - 1].first, k = w[s].first, j = w[s].second;
        std::vector<Edge> a = w, b = w;
        a[s - 1] = {i, k};
        a[s] = {k, j};
        b[s - 1] = {i, j};
        b[s] = {i, k};
        reduce_rec(std::move(a), coef, n, out);
        reduce_rec(std::move(b), (n % 2 == 0) ? coef : -coef, n, out);
        return;
    }
    auto& v = out[w];
    v += coef;
    if (v == 0) out.erase(w);
}

}  // namespace detail

// Normal form of an arbitrary product of ω's (any orientation, any order).
inline std::map<Monomial, long> reduce_omega(const std::vector<Edge>& word, int n) {
    std::map<Monomial, long> out;
    detail::reduce_rec(word, 1, n, out);
    return out;
}

// Connected components of a monomial over the vertex set; returns for each
// vertex (by position in verts) the minimum vertex of its block.
inline std::map<int, int> block_min(const std::vector<int>& verts, const Monomial& m) {
    std::map<int, int> parent;
    for (int v : verts) parent[v] = v;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [u, v] : m) {
        int a = find(u), b = find(v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<int, int> r;
    for (int v : verts) r[v] = find(v);
    // union by min keeps the representative minimal
    return r;
}

// All admissible monomials on a sorted vertex set (k! of them), in a fixed order.
inline std::vector<Monomial> admissible_monomials(const std::vector<int>& verts) {
    std::vector<Monomial> out{{}};
    for (std::size_t j = 1; j < verts.size(); ++j) {
        std::vector<Monomial> next;
        for (const auto& m : out) {
            next.push_back(m);
            for (std::size_t i = 0; i < j; ++i) {
                Monomial x = m;
                x.push_back({verts[i], verts[j]});
                next.push_back(std::move(x));
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

inline std::vector<int> range_vertices(int k, int first = 1) {
    std::vector<int> v(k);
    std::iota(v.begin(), v.end(), first);
    return v;
}

struct EnDualBasis {
    std::vector<Monomial> basis;
    Poly poly;
    std::vector<Monomial> connected;  // single-block monomials
};

inline EnDualBasis en_dual_basis(int n, int k) {
    if (k < 0) throw std::invalid_argument("arity must be >= 0");
    EnDualBasis r;
    auto verts = range_vertices(k);
    r.basis = admissible_monomials(verts);
    for (const auto& m : r.basis) {
        r.poly.add(static_cast<int>(m.size()) * (n - 1), 1);
        if (k > 0 && static_cast<int>(m.size()) == k - 1) r.connected.push_back(m);
    }
    if (k <= 1) r.connected = {Monomial{}};
    return r;
}

inline EnElement en_reduce(const std::vector<Edge>& word, int n, const Rational& c = 1) {
    EnElement x;
    for (const auto& [m, v] : reduce_omega(word, n)) add_term(x, m, c * Rational(v));
    return x;
}

inline EnElement en_mul(const EnElement& x, const EnElement& y, int n) {
    EnElement r;
    for (const auto& [a, p] : x)
        for (const auto& [b, q] : y) {
            std::vector<Edge> w = a;
            w.insert(w.end(), b.begin(), b.end());
            for (const auto& [m, v] : reduce_omega(w, n)) add_term(r, m, p * q * Rational(v));
        }
    return r;
}

using EnTensor = std::map<std::pair<Monomial, Monomial>, Rational>;

// Cooperad cocomposition e_n^∨(V) -> e_n^∨(V/W) ⊗ e_n^∨(W), with the
// collapsed vertex named `star` (which must not lie in V \ W).
inline EnTensor en_cocompose(const Monomial& m, const std::set<int>& W, int star, int n) {
    std::vector<Edge> left, right;
    int sign = 1;
    for (const auto& [u, v] : m) {
        bool iu = W.count(u), iv = W.count(v);
        if (iu && iv) {
            right.push_back({u, v});
        } else {
            left.push_back({iu ? star : u, iv ? star : v});
            if ((n - 1) % 2 != 0 && right.size() % 2 != 0) sign = -sign;
        }
    }
    EnTensor out;
    for (const auto& [a, p] : reduce_omega(left, n))
        for (const auto& [b, q] : reduce_omega(right, n)) {
            auto& v = out[{a, b}];
            v += Rational(sign * p * q);
            if (v == 0) out.erase({a, b});
        }
    return out;
}

}  // namespace confmodel
