#pragma once

#include "ls_model.hpp"

#include <memory>

namespace confmodel {

// Framed model fG_A(U) = G_A(U) ⊗ Λ(α_u : u ∈ U) for A = H*(S²), with
// |α_u| = 1 and dα_u = ι_u(e_A) = 2ι_u(υ).

struct FramedKey {
    LsKey key;
    std::vector<int> alphas;  // sorted
    bool operator<(const FramedKey& o) const { return std::tie(key, alphas) < std::tie(o.key, o.alphas); }
    bool operator==(const FramedKey& o) const { return key == o.key && alphas == o.alphas; }
};

using FramedElement = std::map<FramedKey, Rational>;

inline void add_term(FramedElement& x, const FramedKey& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

// One generator of the framed algebra. Labels sort before α's before ω's.
struct FramedGen {
    enum Kind { Label = 0, Alpha = 1, Omega = 2 } kind;
    int u = 0;
    int v = 0;  // A-basis index for labels, second endpoint for ω
};

using FramedWord = std::vector<FramedGen>;

inline void require_framed_algebra(const PdAlgebra& A) {
    bool s2 = A.n() == 2 && A.dim() == 2 && A.cohomology() == Poly{{{0, 1}, {2, 1}}};
    if (!s2)
        throw std::domain_error(
            "framed model is implemented for H*(S^2) only; higher-dimensional framed models are conjectural");
}

class FramedSpace {
public:
    FramedSpace(const PdAlgebra& A, std::vector<int> verts) : G_(A, std::move(verts)) {
        require_framed_algebra(A);
    }
    FramedSpace(const PdAlgebra& A, int k) : FramedSpace(A, range_vertices(k)) {}

    const LsSpace& ls() const { return G_; }
    const PdAlgebra& algebra() const { return G_.algebra(); }
    const std::vector<int>& vertices() const { return G_.vertices(); }

    int gen_degree(const FramedGen& g) const {
        switch (g.kind) {
            case FramedGen::Label: return algebra().degree(g.v);
            case FramedGen::Alpha: return 1;
            default: return G_.n() - 1;
        }
    }

    int degree(const FramedKey& k) const { return G_.degree(k.key) + static_cast<int>(k.alphas.size()); }

    FramedWord word_of(const FramedKey& k) const {
        FramedWord w;
        LsWord lw = G_.word_of(k.key);
        for (const auto& [v, a] : lw.labels) w.push_back({FramedGen::Label, v, a});
        for (int u : k.alphas) w.push_back({FramedGen::Alpha, u, 0});
        for (const auto& [i, j] : lw.edges) w.push_back({FramedGen::Omega, i, j});
        return w;
    }

    void reduce_into(FramedWord w, const Rational& coef, FramedElement& out) const {
        if (coef == 0) return;
        int sign = 1;
        // stable sort by kind, then α's by vertex, with Koszul signs
        auto before = [](const FramedGen& a, const FramedGen& b) {
            if (a.kind != b.kind) return a.kind < b.kind;
            return a.kind == FramedGen::Alpha && a.u < b.u;
        };
        for (std::size_t i = 1; i < w.size(); ++i)
            for (std::size_t j = i; j > 0 && before(w[j], w[j - 1]); --j) {
                if (gen_degree(w[j]) % 2 && gen_degree(w[j - 1]) % 2) sign = -sign;
                std::swap(w[j - 1], w[j]);
            }
        LsWord lw;
        std::vector<int> alphas;
        for (const auto& g : w) {
            if (g.kind == FramedGen::Label) lw.labels.push_back({g.u, g.v});
            else if (g.kind == FramedGen::Omega) lw.edges.push_back({g.u, g.v});
            else {
                if (!G_.contains(g.u)) throw std::invalid_argument("alpha vertex outside U");
                if (!alphas.empty() && alphas.back() == g.u) return;  // α² = 0
                alphas.push_back(g.u);
            }
        }
        for (const auto& [k, c] : G_.reduce(lw)) add_term(out, FramedKey{k, alphas}, coef * sign * c);
    }

    FramedElement reduce(const FramedWord& w, const Rational& coef = 1) const {
        FramedElement out;
        reduce_into(w, coef, out);
        return out;
    }

    // Leibniz rule over the word of a basis element.
    FramedElement d(const FramedKey& k) const {
        FramedElement out;
        FramedWord w = word_of(k);
        const PdAlgebra& A = algebra();
        int before = 0;
        for (std::size_t p = 0; p < w.size(); ++p) {
            const FramedGen g = w[p];
            const int s = koszul(before);
            auto with = [&](std::vector<FramedGen> repl, const Rational& c) {
                FramedWord x(w.begin(), w.begin() + static_cast<long>(p));
                x.insert(x.end(), repl.begin(), repl.end());
                x.insert(x.end(), w.begin() + static_cast<long>(p) + 1, w.end());
                reduce_into(std::move(x), c * s, out);
            };
            if (g.kind == FramedGen::Label) {
                for (const auto& [t, c] : A.d(g.v)) with({{FramedGen::Label, g.u, t}}, c);
            } else if (g.kind == FramedGen::Alpha) {
                for (const auto& [t, c] : A.euler_class()) with({{FramedGen::Label, g.u, t}}, c);
            } else {
                for (const auto& [pq, c] : A.diagonal())
                    with({{FramedGen::Label, g.u, pq.first}, {FramedGen::Label, g.v, pq.second}}, c);
            }
            before += gen_degree(g);
        }
        return out;
    }

    FramedElement d(const FramedElement& x) const {
        FramedElement out;
        for (const auto& [k, c] : x)
            for (const auto& [t, v] : d(k)) add_term(out, t, c * v);
        return out;
    }

    std::vector<FramedKey> basis() const {
        std::vector<FramedKey> out;
        const auto& U = vertices();
        for (const auto& k : G_.basis())
            for (unsigned mask = 0; mask < (1u << U.size()); ++mask) {
                FramedKey f{k, {}};
                for (std::size_t i = 0; i < U.size(); ++i)
                    if (mask & (1u << i)) f.alphas.push_back(U[i]);
                out.push_back(std::move(f));
            }
        return out;
    }

    GradedBasis<FramedKey> graded_basis() const {
        GradedBasis<FramedKey> gb;
        for (const auto& k : basis()) gb.insert(degree(k), k);
        return gb;
    }

    CochainComplex complex() const {
        return build_complex(graded_basis(), [this](const FramedKey& k) { return d(k); });
    }

    std::string key_string(const FramedKey& k) const {
        std::string s;
        std::string ls = G_.key_string(k.key);
        if (ls != "1") s = ls;
        for (int u : k.alphas) s += (s.empty() ? "" : " ") + std::string("a") + std::to_string(u);
        return s.empty() ? "1" : s;
    }

private:
    LsSpace G_;
};

inline CochainComplex framed_complex(int k) {
    PdAlgebra A = sphere(2);
    return FramedSpace(A, k).complex();
}

inline Poly framed_betti(int k) { return framed_complex(k).betti(); }

// fG_A(U) -> fG_A(U/W) ⊗ fe_2^∨(W). The right factor lives in a FramedSpace
// on W whose keys carry only unit labels. The same map with a label-free
// source gives the cocomposition of fe_2^∨ itself.
using FramedTensor = std::map<std::pair<FramedKey, FramedKey>, Rational>;

inline void add_term(FramedTensor& x, const std::pair<FramedKey, FramedKey>& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

inline FramedTensor framed_cocompose(const FramedSpace& F, const std::set<int>& W, int star, const FramedElement& x) {
    for (int w : W)
        if (!std::binary_search(F.vertices().begin(), F.vertices().end(), w))
            throw std::invalid_argument("W is not a subset of U");
    const PdAlgebra& A = F.algebra();
    FramedSpace L(A, quotient_vertices(F.vertices(), W, star));
    FramedSpace R(A, std::vector<int>(W.begin(), W.end()));
    struct Term {
        FramedWord l, r;
        int rdeg;
        Rational c;
    };
    FramedTensor out;
    for (const auto& [k, c] : x) {
        std::vector<Term> acc{{{}, {}, 0, c}};
        for (const auto& g : F.word_of(k)) {
            // image of g as a sum of (left word, right word)
            std::vector<std::pair<FramedWord, FramedWord>> img;
            const bool iu = W.count(g.u) > 0;
            if (g.kind == FramedGen::Label) {
                img.push_back({{{FramedGen::Label, iu ? star : g.u, g.v}}, {}});
            } else if (g.kind == FramedGen::Alpha) {
                if (iu) {
                    img.push_back({{{FramedGen::Alpha, star, 0}}, {}});
                    img.push_back({{}, {g}});
                } else {
                    img.push_back({{g}, {}});
                }
            } else {
                const bool iv = W.count(g.v) > 0;
                if (iu && iv) {
                    img.push_back({{{FramedGen::Alpha, star, 0}}, {}});
                    img.push_back({{}, {g}});
                } else {
                    img.push_back({{{FramedGen::Omega, iu ? star : g.u, iv ? star : g.v}}, {}});
                }
            }
            std::vector<Term> next;
            for (const auto& t : acc)
                for (const auto& [l, r] : img) {
                    int ldeg = 0, rdeg = 0;
                    for (const auto& h : l) ldeg += F.gen_degree(h);
                    for (const auto& h : r) rdeg += F.gen_degree(h);
                    Term u = t;
                    u.l.insert(u.l.end(), l.begin(), l.end());
                    u.r.insert(u.r.end(), r.begin(), r.end());
                    u.c *= koszul(static_cast<long long>(t.rdeg) * ldeg);
                    u.rdeg += rdeg;
                    next.push_back(std::move(u));
                }
            acc = std::move(next);
        }
        for (const auto& t : acc) {
            FramedElement le = L.reduce(t.l), re = R.reduce(t.r);
            for (const auto& [lk, lc] : le)
                for (const auto& [rk, rc] : re) add_term(out, {lk, rk}, t.c * lc * rc);
        }
    }
    return out;
}

struct FramedComoduleReport {
    bool chain_map = true;
    bool coassociative = true;
    bool counit = true;
    long long checked = 0;
    std::string witness;
    bool ok() const { return chain_map && coassociative && counit; }
};

// Chain map (cooperad side has zero differential), counit and coassociativity.
inline FramedComoduleReport check_framed_comodule(int k, bool coassociativity = true) {
    FramedComoduleReport rep;
    PdAlgebra A = sphere(2);
    FramedSpace F(A, k);
    auto basis = F.basis();
    const int star = 0, s1 = 100, s2 = 200;
    auto fail = [&](bool& flag, const std::string& w) {
        if (flag && rep.witness.empty()) rep.witness = w;
        flag = false;
    };
    for (const auto& W : all_subsets(F.vertices())) {
        FramedSpace Q(A, quotient_vertices(F.vertices(), W, star));
        for (const auto& b : basis) {
            FramedElement x{{b, 1}};
            FramedTensor lhs = framed_cocompose(F, W, star, F.d(x)), rhs;
            for (const auto& [lr, c] : framed_cocompose(F, W, star, x))
                for (const auto& [t, v] : Q.d(lr.first)) add_term(rhs, {t, lr.second}, c * v);
            ++rep.checked;
            if (lhs != rhs) fail(rep.chain_map, "chain map W=" + set_string(W) + " x=" + F.key_string(b));
        }
        if (W.size() == 1) {
            int w = *W.begin();
            for (const auto& b : basis) {
                FramedTensor got;
                for (const auto& [lr, c] : framed_cocompose(F, W, w, FramedElement{{b, 1}}))
                    if (lr.second.alphas.empty() && lr.second.key.mono.empty()) add_term(got, lr, c);
                FramedTensor expect;
                add_term(expect, {b, FramedKey{LsKey{{}, {A.unit()}}, {}}}, 1);
                if (got != expect) fail(rep.counit, "counit W=" + set_string(W) + " x=" + F.key_string(b));
            }
        }
        if (!coassociativity) continue;
        std::vector<int> Wv(W.begin(), W.end());
        FramedSpace RW(A, Wv);
        for (const auto& Wp : all_subsets(Wv)) {
            std::set<int> WmodWp;
            for (int w : W)
                if (!Wp.count(w)) WmodWp.insert(w);
            WmodWp.insert(s2);
            FramedSpace QWp(A, quotient_vertices(F.vertices(), Wp, s2));
            using Triple = std::map<std::tuple<FramedKey, FramedKey, FramedKey>, Rational>;
            auto add3 = [](Triple& t, const std::tuple<FramedKey, FramedKey, FramedKey>& key, const Rational& c) {
                if (c == 0) return;
                auto& v = t[key];
                v += c;
                if (v == 0) t.erase(key);
            };
            for (const auto& b : basis) {
                FramedElement x{{b, 1}};
                Triple p, q;
                for (const auto& [lr, c] : framed_cocompose(F, W, s1, x))
                    for (const auto& [rr, e] : framed_cocompose(RW, Wp, s2, FramedElement{{lr.second, 1}}))
                        add3(p, {lr.first, rr.first, rr.second}, c * e);
                for (const auto& [lr, c] : framed_cocompose(F, Wp, s2, x))
                    for (const auto& [mm, e] : framed_cocompose(QWp, WmodWp, s1, FramedElement{{lr.first, 1}}))
                        add3(q, {mm.first, mm.second, lr.second}, c * e);
                if (p != q)
                    fail(rep.coassociative,
                         "coassociativity W=" + set_string(W) + " W'=" + set_string(Wp) + " x=" + F.key_string(b));
            }
        }
    }
    return rep;
}

struct FramedSubcomplexReport {
    bool inclusion_chain_map = true;  // G_A(k) ⊂ fG_A(k) is closed under d
    bool alpha_quotient_chain_map = true;  // setting α = 0 commutes with d
    std::string witness;
};

// The α-free part is the sub-CDGA G_A(k). Killing α is not a chain map,
// because dα_u = 2ι_u(υ) does not lie in the ideal (α).
inline FramedSubcomplexReport check_framed_subcomplex(int k) {
    FramedSubcomplexReport rep;
    PdAlgebra A = sphere(2);
    FramedSpace F(A, k);
    const LsSpace& G = F.ls();
    auto project = [](const FramedElement& x) {
        LsElement r;
        for (const auto& [fk, c] : x)
            if (fk.alphas.empty()) add_term(r, fk.key, c);
        return r;
    };
    for (const auto& b : F.basis()) {
        FramedElement dx = F.d(b);
        if (b.alphas.empty()) {
            bool closed = true;
            for (const auto& [t, c] : dx)
                if (!t.alphas.empty()) closed = false;
            if (!closed || project(dx) != G.d(b.key)) {
                if (rep.inclusion_chain_map) rep.witness = F.key_string(b);
                rep.inclusion_chain_map = false;
            }
        } else if (!project(dx).empty() && rep.alpha_quotient_chain_map) {
            rep.alpha_quotient_chain_map = false;
            if (rep.witness.empty()) rep.witness = "d(" + F.key_string(b) + ") has an alpha-free term";
        }
    }
    return rep;
}

}  // namespace confmodel
