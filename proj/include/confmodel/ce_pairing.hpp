#pragma once

#include "ls_model.hpp"

#include <memory>

namespace confmodel {

// ---------------------------------------------------------------------------
// Multilinear free Lie words. Letters z_u have degree 1 - n.

// Left-normed basis word [[..[z_{l0}, z_{l1}], ..], z_{lk}] with l0 = min.
using LieWord = std::vector<int>;
using LieElement = std::map<LieWord, Rational>;
// Element of the tensor algebra on the letters.
using TensorWord = std::vector<int>;
using TensorPoly = std::map<TensorWord, Rational>;

// Bracket expression tree; a leaf when kids is empty.
struct LieTree {
    int leaf = -1;
    std::vector<LieTree> kids;
    static LieTree letter(int u) { return LieTree{u, {}}; }
    static LieTree bracket(LieTree a, LieTree b) { return LieTree{-1, {std::move(a), std::move(b)}}; }
    void letters(std::vector<int>& out) const {
        if (kids.empty()) out.push_back(leaf);
        else {
            kids[0].letters(out);
            kids[1].letters(out);
        }
    }
    std::vector<int> letters() const {
        std::vector<int> v;
        letters(v);
        return v;
    }
};

inline LieTree left_normed(const LieWord& w) {
    if (w.empty()) throw std::invalid_argument("empty Lie word");
    LieTree t = LieTree::letter(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) t = LieTree::bracket(std::move(t), LieTree::letter(w[i]));
    return t;
}

inline int letter_parity(int n) { return (1 - n) % 2 != 0 ? 1 : 0; }

inline TensorPoly tensor_bracket(const TensorPoly& p, int kp, const TensorPoly& q, int kq, int n) {
    TensorPoly r;
    const int sign = koszul(static_cast<long long>(letter_parity(n)) * kp * kq);
    for (const auto& [a, x] : p)
        for (const auto& [b, y] : q) {
            TensorWord ab = a, ba = b;
            ab.insert(ab.end(), b.begin(), b.end());
            ba.insert(ba.end(), a.begin(), a.end());
            add_coef(r, ab, x * y);
            add_coef(r, ba, -sign * x * y);
        }
    return r;
}

inline TensorPoly tensor_expand(const LieTree& t, int n) {
    if (t.kids.empty()) return TensorPoly{{{t.leaf}, 1}};
    auto a = t.kids[0].letters(), b = t.kids[1].letters();
    return tensor_bracket(tensor_expand(t.kids[0], n), static_cast<int>(a.size()), tensor_expand(t.kids[1], n),
                          static_cast<int>(b.size()), n);
}

// Coefficients on the left-normed basis: the basis word starting with the
// minimum letter is the only word of its expansion that starts with it.
inline LieElement lie_from_tensor(const TensorPoly& p) {
    LieElement out;
    if (p.empty()) return out;
    const int m = *std::min_element(p.begin()->first.begin(), p.begin()->first.end());
    for (const auto& [w, c] : p)
        if (w.front() == m) add_coef(out, w, c);
    return out;
}

inline LieElement lie_normal_form(const LieTree& t, int n) {
    auto ls = t.letters();
    auto s = ls;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("repeated letter in Lie word");
    return lie_from_tensor(tensor_expand(t, n));
}

inline TensorPoly tensor_expand(const LieElement& x, int n) {
    TensorPoly out;
    for (const auto& [w, c] : x)
        for (const auto& [t, v] : tensor_expand(left_normed(w), n)) add_coef(out, t, c * v);
    return out;
}

inline LieElement lie_bracket(const LieElement& x, int kx, const LieElement& y, int ky, int n) {
    return lie_from_tensor(tensor_bracket(tensor_expand(x, n), kx, tensor_expand(y, n), ky, n));
}

// Basis of the multilinear part on the sorted letters U: (#U - 1)! words.
inline std::vector<LieWord> lie_basis(const std::vector<int>& U) {
    if (U.empty()) return {};
    std::vector<int> rest(U.begin() + 1, U.end());
    std::vector<LieWord> out;
    do {
        LieWord w{U[0]};
        w.insert(w.end(), rest.begin(), rest.end());
        out.push_back(std::move(w));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Duality between connected monomials of e_n^∨ and Lie words.
//
// For T = [T1, T2] with letter sets V1, V2, exactly one edge of Ω must cross.
// It is moved to the front, oriented from V1 to V2, the remaining edges are
// sorted stably into Ω1 Ω2, and the value is (-1)^{(n-1)|V1|} <Ω1,T1><Ω2,T2>.

inline Rational lie_pair(std::vector<Edge> omega, const LieTree& t, int n) {
    if (t.kids.empty()) return omega.empty() ? 1 : 0;
    auto v1 = t.kids[0].letters(), v2 = t.kids[1].letters();
    std::set<int> s1(v1.begin(), v1.end()), s2(v2.begin(), v2.end());
    int sign = 1;
    const bool odd = (n - 1) % 2 != 0;
    std::optional<std::size_t> cross;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const auto [u, v] = omega[i];
        const bool a1 = s1.count(u), b1 = s1.count(v), a2 = s2.count(u), b2 = s2.count(v);
        if (!(a1 || a2) || !(b1 || b2)) return 0;  // edge leaves the letter set
        if (a1 != b1) {
            if (cross) return 0;
            cross = i;
        }
    }
    if (!cross) return 0;
    Edge e = omega[*cross];
    if (odd && *cross % 2) sign = -sign;
    omega.erase(omega.begin() + static_cast<long>(*cross));
    if (!s1.count(e.first) && n % 2) sign = -sign;
    std::vector<Edge> o1, o2;
    int inv = 0;
    for (const auto& x : omega) {
        if (s1.count(x.first)) {
            o1.push_back(x);
            inv += static_cast<int>(o2.size());
        } else {
            o2.push_back(x);
        }
    }
    if (odd && inv % 2) sign = -sign;
    if (odd && v1.size() % 2) sign = -sign;
    Rational a = lie_pair(o1, t.kids[0], n);
    if (a == 0) return 0;
    return sign * a * lie_pair(o2, t.kids[1], n);
}

inline Rational lie_pair(const Monomial& omega, const LieElement& x, int n) {
    Rational r = 0;
    for (const auto& [w, c] : x) r += c * lie_pair(omega, left_normed(w), n);
    return r;
}

// ---------------------------------------------------------------------------
// Arity-wise Chevalley-Eilenberg complex of h = A ⊗ FreeLie(z_u).
//
// Degree table (one global reflection relative to the homological CE grading):
//   letter z_u                        1 - n
//   Lie word on k letters             k(1 - n)
//   generator ↓(a ⊗ T), T on k letters |a| + k(1 - n) - 1
//   G_A block ι(a)·Ω, Ω connected      |a| + (k - 1)(n - 1)
// so the pairing is nonzero only between total degrees p and -p.

struct CeBlock {
    LieWord word;  // basis word, word[0] = min of the block
    int label;     // A-basis index
    bool operator<(const CeBlock& o) const { return std::tie(word, label) < std::tie(o.word, o.label); }
    bool operator==(const CeBlock& o) const { return word == o.word && label == o.label; }
};

using CeKey = std::vector<CeBlock>;  // sorted by minimum letter
using CeElement = std::map<CeKey, Rational>;

// Block pairing: <ι(a)Ω, ↓(a'⊗T)> = (-1)^{|a| + (n+1)k(k-1)/2} ε(a a') <Ω, T>,
// with the Koszul sign (-1)^{Σ_{i>j}|X_i||X_j|} across blocks.
class CeSpace {
public:
    CeSpace(const PdAlgebra& A, std::vector<int> U) : A_(&A), U_(std::move(U)) {
        std::sort(U_.begin(), U_.end());
        if (std::adjacent_find(U_.begin(), U_.end()) != U_.end()) throw std::invalid_argument("repeated vertex");
    }
    CeSpace(const PdAlgebra& A, int k) : CeSpace(A, range_vertices(k)) {}

    const PdAlgebra& algebra() const { return *A_; }
    const std::vector<int>& vertices() const { return U_; }
    int n() const { return A_->n(); }

    int block_degree(const CeBlock& b) const {
        return A_->degree(b.label) + static_cast<int>(b.word.size()) * (1 - n()) - 1;
    }
    int degree(const CeKey& k) const {
        int d = 0;
        for (const auto& b : k) d += block_degree(b);
        return d;
    }

    // Sorts generators by minimum letter with Koszul signs.
    void canonical_into(std::vector<CeBlock> bs, const Rational& c, CeElement& out) const {
        if (c == 0) return;
        int sign = 1;
        for (std::size_t i = 1; i < bs.size(); ++i)
            for (std::size_t j = i; j > 0 && bs[j].word[0] < bs[j - 1].word[0]; --j) {
                if (block_degree(bs[j]) % 2 && block_degree(bs[j - 1]) % 2) sign = -sign;
                std::swap(bs[j - 1], bs[j]);
            }
        add_coef(out, bs, c * sign);
    }

    // [a⊗T, b⊗T'] = (-1)^{|T||b|} ab ⊗ [T, T'], as a combination of generators.
    std::vector<std::pair<CeBlock, Rational>> bracket(const CeBlock& x, const CeBlock& y) const {
        std::vector<std::pair<CeBlock, Rational>> out;
        const int kx = static_cast<int>(x.word.size()), ky = static_cast<int>(y.word.size());
        const int sign = koszul(static_cast<long long>(kx) * (1 - n()) * A_->degree(y.label));
        AVec ab = A_->mul(x.label, y.label);
        if (ab.empty()) return out;
        LieElement t = lie_bracket(LieElement{{x.word, 1}}, kx, LieElement{{y.word, 1}}, ky, n());
        for (const auto& [a, ca] : ab)
            for (const auto& [w, cw] : t) out.push_back({CeBlock{w, a}, sign * ca * cw});
        return out;
    }

    // Q1(↓x) = ↓(dx), Q2(↓x·↓y) = (-1)^{|x|} ↓[x, y], extended as a coderivation.
    CeElement d(const CeKey& k) const {
        CeElement out;
        int before = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            for (const auto& [t, c] : A_->d(k[i].label)) {
                CeKey x = k;
                x[i].label = t;
                canonical_into(x, c * koszul(before), out);
            }
            before += block_degree(k[i]);
        }
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j) {
                // move i and j to the front
                long long e = 0;
                int pre_i = 0, pre_j = 0;
                for (std::size_t l = 0; l < i; ++l) pre_i += block_degree(k[l]);
                for (std::size_t l = 0; l < j; ++l)
                    if (l != i) pre_j += block_degree(k[l]);
                e = static_cast<long long>(block_degree(k[i])) * pre_i + static_cast<long long>(block_degree(k[j])) * pre_j;
                const int xdeg = block_degree(k[i]) + 1;
                const Rational s = koszul(e) * koszul(xdeg);
                std::vector<CeBlock> rest;
                for (std::size_t l = 0; l < k.size(); ++l)
                    if (l != i && l != j) rest.push_back(k[l]);
                for (const auto& [b, c] : bracket(k[i], k[j])) {
                    std::vector<CeBlock> x{b};
                    x.insert(x.end(), rest.begin(), rest.end());
                    canonical_into(std::move(x), s * c, out);
                }
            }
        return out;
    }

    CeElement d(const CeElement& x) const {
        CeElement out;
        for (const auto& [k, c] : x)
            for (const auto& [t, v] : d(k)) add_coef(out, t, c * v);
        return out;
    }

    std::vector<CeKey> basis() const {
        std::vector<CeKey> out;
        std::vector<std::vector<int>> blocks;
        std::function<void(std::size_t)> part = [&](std::size_t i) {
            if (i == U_.size()) {
                CeKey k;
                fill(blocks, 0, k, out);
                return;
            }
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                blocks[b].push_back(U_[i]);
                part(i + 1);
                blocks[b].pop_back();
            }
            blocks.push_back({U_[i]});
            part(i + 1);
            blocks.pop_back();
        };
        part(0);
        return out;
    }

    GradedBasis<CeKey> graded_basis() const {
        GradedBasis<CeKey> gb;
        for (const auto& k : basis()) gb.insert(degree(k), k);
        return gb;
    }

    CochainComplex complex() const {
        return build_complex(graded_basis(), [this](const CeKey& k) { return d(k); });
    }

    // Pairing of a G_A(U) basis element with a CE basis element.
    Rational pair(const LsSpace& G, const LsKey& x, const CeKey& y) const {
        if (G.vertices() != U_) throw std::invalid_argument("pairing: mismatched vertex sets");
        if (G.algebra().dim() != A_->dim() || G.algebra().n() != A_->n())
            throw std::invalid_argument("pairing: mismatched algebras");
        auto [bm, mins] = G.blocks(x.mono);
        if (mins.size() != y.size()) return 0;
        // same partition?
        for (std::size_t b = 0; b < y.size(); ++b) {
            if (y[b].word[0] != mins[b]) return 0;
            for (int u : y[b].word)
                if (bm[u] != mins[b]) return 0;
        }
        std::map<int, int> bidx;
        for (std::size_t b = 0; b < mins.size(); ++b) bidx[mins[b]] = static_cast<int>(b);
        // X = L Ω  ->  X_1 ⋯ X_r with X_b = ι(a_b) Ω_b
        const int n = this->n();
        const bool odd = (n - 1) % 2 != 0;
        int sign = 1;
        std::vector<int> ldeg(mins.size()), xdeg(mins.size());
        for (std::size_t b = 0; b < mins.size(); ++b) ldeg[b] = A_->degree(x.labels[b]);
        // labels of later blocks pass edges of earlier blocks; edges are sorted by block
        std::vector<std::vector<Edge>> om(mins.size());
        std::vector<int> eb;
        for (const auto& e : x.mono) eb.push_back(bidx[bm[e.first]]);
        if (odd) {
            int inv = 0;
            for (std::size_t i = 0; i < eb.size(); ++i)
                for (std::size_t j = i + 1; j < eb.size(); ++j)
                    if (eb[i] > eb[j]) ++inv;
            if (inv % 2) sign = -sign;
        }
        for (std::size_t i = 0; i < eb.size(); ++i) om[eb[i]].push_back(x.mono[i]);
        // L Ω_1 ⋯ Ω_r -> ι(a_1)Ω_1 ι(a_2)Ω_2 ⋯: ι(a_b) passes Ω_1..Ω_{b-1}
        long long passed = 0;
        for (std::size_t b = 0; b < mins.size(); ++b) {
            long long edges_before = 0;
            for (std::size_t c = 0; c < b; ++c) edges_before += static_cast<long long>(om[c].size());
            passed += static_cast<long long>(ldeg[b]) * edges_before * (n - 1);
            xdeg[b] = ldeg[b] + static_cast<int>(om[b].size()) * (n - 1);
        }
        for (std::size_t i = 0; i < mins.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) passed += static_cast<long long>(xdeg[i]) * xdeg[j];
        if (passed % 2) sign = -sign;
        Rational r = sign;
        for (std::size_t b = 0; b < mins.size(); ++b) {
            const int a = ldeg[b], k = static_cast<int>(y[b].word.size());
            Rational e = A_->eps(A_->mul(x.labels[b], y[b].label));
            if (e == 0) return 0;
            Rational l = lie_pair(om[b], left_normed(y[b].word), n);
            if (l == 0) return 0;
            const long long t = a + static_cast<long long>(n + 1) * k * (k - 1) / 2;
            r *= e * l * koszul(t);
        }
        return r;
    }

    Rational pair(const LsSpace& G, const LsElement& x, const CeElement& y) const {
        Rational r = 0;
        for (const auto& [a, c] : x)
            for (const auto& [b, v] : y) r += c * v * pair(G, a, b);
        return r;
    }

    std::string key_string(const CeKey& k) const {
        std::string s;
        for (const auto& b : k) {
            if (!s.empty()) s += " ";
            s += "v(" + A_->basis_name(b.label) + "|";
            for (std::size_t i = 0; i < b.word.size(); ++i) s += (i ? "," : "") + std::to_string(b.word[i]);
            s += ")";
        }
        return s.empty() ? "1" : s;
    }

private:
    void fill(const std::vector<std::vector<int>>& blocks, std::size_t b, CeKey& k, std::vector<CeKey>& out) const {
        if (b == blocks.size()) {
            out.push_back(k);
            return;
        }
        for (const auto& w : lie_basis(blocks[b]))
            for (int a = 0; a < A_->dim(); ++a) {
                k.push_back({w, a});
                fill(blocks, b + 1, k, out);
                k.pop_back();
            }
    }

    const PdAlgebra* A_;
    std::vector<int> U_;
};

struct PairingReport {
    bool square = true;
    bool full_rank = true;
    bool chain_compatible = true;
    bool partition_mismatch_zero = true;
    bool ce_d2 = true;
    long long pairs_checked = 0;
    std::map<int, std::pair<int, int>> ranks;  // LS degree -> (size, rank)
    std::string witness;
    bool ok() const { return square && full_rank && chain_compatible && partition_mismatch_zero && ce_d2; }
};

// Nondegeneracy per degree, <dx, y> = (-1)^{|x|} <x, dy>, and vanishing on
// mismatched partitions, over all basis pairs.
inline PairingReport pairing_checks(const PdAlgebra& A, int k) {
    PairingReport rep;
    LsSpace G(A, k);
    CeSpace C(A, G.vertices());
    auto gb = G.graded_basis();
    auto cb = C.graded_basis();
    auto note = [&](bool& flag, const std::string& w) {
        if (flag && rep.witness.empty()) rep.witness = w;
        flag = false;
    };
    rep.ce_d2 = C.complex().verify().ok;
    std::set<int> degs;
    for (const auto& [d, v] : gb.by_degree) degs.insert(d);
    for (const auto& [d, v] : cb.by_degree) degs.insert(-d);
    for (int p : degs) {
        const int rows = gb.dim(p), cols = cb.dim(-p);
        if (rows != cols) note(rep.square, "degree " + std::to_string(p) + ": " + std::to_string(rows) + " vs " +
                                               std::to_string(cols));
        SparseMatrix M(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                Rational v = C.pair(G, gb.by_degree.at(p)[i], cb.by_degree.at(-p)[j]);
                if (v != 0) M.add(i, j, v);
            }
        int r = rank(M);
        rep.ranks[p] = {rows, r};
        if (r != rows || r != cols) note(rep.full_rank, "rank deficit in degree " + std::to_string(p));
    }
    for (const auto& x : G.basis()) {
        LsElement dx = G.d(x);
        const int s = koszul(G.degree(x));
        auto [bm, mins] = G.blocks(x.mono);
        for (const auto& y : C.basis()) {
            ++rep.pairs_checked;
            Rational lhs = C.pair(G, dx, CeElement{{y, 1}});
            Rational rhs = s * C.pair(G, LsElement{{x, 1}}, C.d(y));
            if (lhs != rhs) note(rep.chain_compatible, "x=" + G.key_string(x) + " y=" + C.key_string(y));
            bool same = mins.size() == y.size();
            for (std::size_t b = 0; same && b < y.size(); ++b)
                for (int u : y[b].word)
                    if (bm[u] != mins[b] || y[b].word[0] != mins[b]) same = false;
            if (!same && C.pair(G, x, y) != 0) note(rep.partition_mismatch_zero, "x=" + G.key_string(x) + " y=" + C.key_string(y));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// CE complex of A ⊗ g for a finite-dimensional graded Lie algebra g.

struct FiniteLieAlgebra {
    std::string name;
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::map<std::pair<int, int>, AVec> bracket;  // absent pairs are zero

    int dim() const { return static_cast<int>(names.size()); }
    AVec br(int i, int j) const {
        auto it = bracket.find({i, j});
        return it == bracket.end() ? AVec{} : it->second;
    }
    AVec br(const AVec& x, const AVec& y) const {
        AVec r;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) add_to(r, br(i, j), a * b);
        return r;
    }

    // Degree, antisymmetry and Jacobi on all basis pairs and triples.
    PdReport validate() const {
        const int N = dim();
        if (static_cast<int>(degrees.size()) != N) return {false, "degree list size mismatch"};
        for (const auto& [ij, v] : bracket) {
            auto [i, j] = ij;
            if (i < 0 || j < 0 || i >= N || j >= N) return {false, "bracket index out of range"};
            for (const auto& [t, c] : v) {
                if (t < 0 || t >= N) return {false, "bracket value index out of range"};
                if (degrees[t] != degrees[i] + degrees[j])
                    return {false, "bracket [" + names[i] + "," + names[j] + "] is not homogeneous"};
            }
        }
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                AVec s = br(i, j);
                add_to(s, br(j, i), koszul(static_cast<long long>(degrees[i]) * degrees[j]));
                if (!s.empty()) return {false, "antisymmetry fails on (" + names[i] + "," + names[j] + ")"};
            }
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
                    AVec e = {{i, 1}}, f = {{j, 1}}, g = {{k, 1}};
                    AVec lhs = br(e, br(f, g));
                    AVec rhs = br(br(e, f), g);
                    add_to(rhs, br(f, br(e, g)), koszul(static_cast<long long>(degrees[i]) * degrees[j]));
                    add_to(lhs, rhs, -1);
                    if (!lhs.empty())
                        return {false, "Jacobi fails on (" + names[i] + "," + names[j] + "," + names[k] + ")"};
                }
        return {true, ""};
    }
};

inline FiniteLieAlgebra abelian_lie(int dim, int degree = 0) {
    if (dim < 1) throw std::invalid_argument("abelian Lie algebra needs dimension >= 1");
    FiniteLieAlgebra g;
    g.name = "abelian:" + std::to_string(dim);
    for (int i = 0; i < dim; ++i) {
        g.names.push_back("x" + std::to_string(i + 1));
        g.degrees.push_back(degree);
    }
    return g;
}

// [e, f] = f
inline FiniteLieAlgebra affine_lie() {
    FiniteLieAlgebra g;
    g.name = "affine";
    g.names = {"e", "f"};
    g.degrees = {0, 0};
    g.bracket[{0, 1}] = AVec{{1, 1}};
    g.bracket[{1, 0}] = AVec{{1, -1}};
    return g;
}

// [h, e] = 2e, [h, f] = -2f, [e, f] = h
inline FiniteLieAlgebra sl2_lie() {
    FiniteLieAlgebra g;
    g.name = "sl2";
    g.names = {"h", "e", "f"};
    g.degrees = {0, 0, 0};
    g.bracket[{0, 1}] = AVec{{1, 2}};
    g.bracket[{1, 0}] = AVec{{1, -2}};
    g.bracket[{0, 2}] = AVec{{2, -2}};
    g.bracket[{2, 0}] = AVec{{2, 2}};
    g.bracket[{1, 2}] = AVec{{0, 1}};
    g.bracket[{2, 1}] = AVec{{0, -1}};
    return g;
}

inline FiniteLieAlgebra builtin_lie(const std::string& name) {
    auto pos = name.find(':');
    std::string head = name.substr(0, pos);
    if (head == "abelian") {
        if (pos == std::string::npos) throw std::invalid_argument("abelian needs a dimension, e.g. abelian:2");
        return abelian_lie(detail::parse_int(name.substr(pos + 1), "abelian dimension"));
    }
    if (pos != std::string::npos) throw std::invalid_argument("unexpected parameter in " + name);
    if (head == "affine") return affine_lie();
    if (head == "sl2") return sl2_lie();
    throw std::invalid_argument("unknown Lie algebra: " + name);
}

// Generator ↓(a ⊗ x_i) of degree |a| + |x_i| - 1; a basis element of the
// symmetric coalgebra is a sorted multiset of generator indices.
struct CeHomologyResult {
    int cap = 0;
    Poly dims;
    Poly homology;
};

class LieCe {
public:
    LieCe(PdAlgebra A, FiniteLieAlgebra g) : A_(std::move(A)), g_(std::move(g)) {
        for (int a = 0; a < A_.dim(); ++a)
            for (int i = 0; i < g_.dim(); ++i) gens_.push_back({a, i});
    }

    int ngens() const { return static_cast<int>(gens_.size()); }
    int gen_degree(int t) const { return A_.degree(gens_[t].first) + g_.degrees[gens_[t].second] - 1; }
    int index(int a, int i) const { return a * g_.dim() + i; }
    int degree(const std::vector<int>& k) const {
        int d = 0;
        for (int t : k) d += gen_degree(t);
        return d;
    }

    void canonical_into(std::vector<int> w, const Rational& c, std::map<std::vector<int>, Rational>& out) const {
        if (c == 0) return;
        int sign = 1;
        for (std::size_t i = 1; i < w.size(); ++i)
            for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
                if (gen_degree(w[j]) % 2 && gen_degree(w[j - 1]) % 2) sign = -sign;
                std::swap(w[j - 1], w[j]);
            }
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] == w[i - 1] && gen_degree(w[i]) % 2) return;
        add_coef(out, w, c * sign);
    }

    std::map<std::vector<int>, Rational> d(const std::vector<int>& k) const {
        std::map<std::vector<int>, Rational> out;
        int before = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            auto [a, x] = gens_[k[i]];
            for (const auto& [t, c] : A_.d(a)) {
                auto w = k;
                w[i] = index(t, x);
                canonical_into(w, -c * koszul(before), out);
            }
            before += gen_degree(k[i]);
        }
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j) {
                int pre_i = 0, pre_j = 0;
                for (std::size_t l = 0; l < i; ++l) pre_i += gen_degree(k[l]);
                for (std::size_t l = 0; l < j; ++l)
                    if (l != i) pre_j += gen_degree(k[l]);
                long long e = static_cast<long long>(gen_degree(k[i])) * pre_i +
                              static_cast<long long>(gen_degree(k[j])) * pre_j + gen_degree(k[i]) + 1;
                auto [a, x] = gens_[k[i]];
                auto [b, y] = gens_[k[j]];
                const int s = koszul(e) * koszul(static_cast<long long>(g_.degrees[x]) * A_.degree(b));
                AVec ab = A_.mul(a, b);
                AVec xy = g_.br(x, y);
                std::vector<int> rest;
                for (std::size_t l = 0; l < k.size(); ++l)
                    if (l != i && l != j) rest.push_back(k[l]);
                for (const auto& [p, cp] : ab)
                    for (const auto& [q, cq] : xy) {
                        std::vector<int> w{index(p, q)};
                        w.insert(w.end(), rest.begin(), rest.end());
                        canonical_into(std::move(w), s * cp * cq, out);
                    }
            }
        return out;
    }

    GradedBasis<std::vector<int>> graded_basis(int cap) const {
        GradedBasis<std::vector<int>> gb;
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int from) {
            gb.insert(degree(cur), cur);
            if (static_cast<int>(cur.size()) == cap) return;
            for (int t = from; t < ngens(); ++t) {
                if (!cur.empty() && cur.back() == t && gen_degree(t) % 2) continue;
                cur.push_back(t);
                rec(t);
                cur.pop_back();
            }
        };
        rec(0);
        return gb;
    }

    CochainComplex complex(int cap) const {
        return build_complex(graded_basis(cap), [this](const std::vector<int>& k) { return d(k); });
    }

private:
    PdAlgebra A_;
    FiniteLieAlgebra g_;
    std::vector<std::pair<int, int>> gens_;
};

// Homology of the CE complex truncated to symmetric word length <= cap.
inline CeHomologyResult ce_homology(const PdAlgebra& A, const FiniteLieAlgebra& g, int cap) {
    if (cap < 1) throw std::invalid_argument("word-length cap must be >= 1");
    auto rep = g.validate();
    if (!rep.ok) throw std::invalid_argument("Lie algebra: " + rep.message);
    LieCe ce(A, g);
    auto cx = ce.complex(cap);
    return {cap, cx.dimension_poly(), cx.betti()};
}

}  // namespace confmodel
