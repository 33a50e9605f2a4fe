#include "confmodel/ce_pairing.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace confmodel;

namespace {

// Independent expansion of a bracket tree in the tensor algebra:
// [P, Q] = PQ - (-1)^{|P||Q|} QP with letters of degree 1 - n.
struct Expansion {
    std::map<std::vector<int>, long> terms;
    int letters = 0;
};

Expansion expand(const LieTree& t, int n) {
    if (t.kids.empty()) return {{{{t.leaf}, 1}}, 1};
    Expansion a = expand(t.kids[0], n), b = expand(t.kids[1], n);
    const long s = ((1 - n) * (1 - n) * a.letters * b.letters) % 2 ? -1 : 1;
    Expansion r;
    r.letters = a.letters + b.letters;
    for (const auto& [u, x] : a.terms)
        for (const auto& [v, y] : b.terms) {
            std::vector<int> uv = u, vu = v;
            uv.insert(uv.end(), v.begin(), v.end());
            vu.insert(vu.end(), u.begin(), u.end());
            r.terms[uv] += x * y;
            r.terms[vu] -= s * x * y;
        }
    std::erase_if(r.terms, [](const auto& p) { return p.second == 0; });
    return r;
}

Expansion expand(const LieElement& x, int n) {
    Expansion r;
    for (const auto& [w, c] : x) {
        auto e = expand(left_normed(w), n);
        r.letters = e.letters;
        for (const auto& [m, v] : e.terms) r.terms[m] += v * c.get_num().get_si();
    }
    std::erase_if(r.terms, [](const auto& p) { return p.second == 0; });
    return r;
}

// All bracketings of a letter sequence.
std::vector<LieTree> bracketings(const std::vector<int>& w) {
    if (w.size() == 1) return {LieTree::letter(w[0])};
    std::vector<LieTree> out;
    for (std::size_t s = 1; s < w.size(); ++s) {
        auto L = bracketings(std::vector<int>(w.begin(), w.begin() + static_cast<long>(s)));
        auto R = bracketings(std::vector<int>(w.begin() + static_cast<long>(s), w.end()));
        for (const auto& l : L)
            for (const auto& r : R) out.push_back(LieTree::bracket(l, r));
    }
    return out;
}

std::vector<LieTree> all_trees(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 1);
    std::vector<LieTree> out;
    do {
        for (auto& t : bracketings(p)) out.push_back(std::move(t));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// [x,y] = x, [y,z] = y, [x,z] = x: Jacobi fails on (x, y, z)
FiniteLieAlgebra not_jacobi() {
    FiniteLieAlgebra g;
    g.name = "not_jacobi";
    g.names = {"x", "y", "z"};
    g.degrees = {0, 0, 0};
    for (auto [i, j, t] : {std::tuple{0, 1, 0}, std::tuple{1, 2, 1}, std::tuple{0, 2, 0}}) {
        g.bracket[{i, j}] = AVec{{t, 1}};
        g.bracket[{j, i}] = AVec{{t, -1}};
    }
    return g;
}

FiniteLieAlgebra heisenberg() {
    FiniteLieAlgebra g;
    g.name = "heisenberg";
    g.names = {"x", "y", "z"};
    g.degrees = {0, 0, 0};
    g.bracket[{0, 1}] = AVec{{2, 1}};
    g.bracket[{1, 0}] = AVec{{2, -1}};
    return g;
}

}  // namespace

TEST(Lie, SwappedBracketCoefficient) {
    for (int n : {2, 3, 4, 5}) {
        auto x = lie_normal_form(LieTree::bracket(LieTree::letter(2), LieTree::letter(1)), n);
        EXPECT_EQ(x, (LieElement{{{1, 2}, n % 2 ? -1 : 1}})) << "n=" << n;
    }
}

TEST(Lie, NormalFormPreservesExpansion) {
    for (int n : {2, 3})
        for (int k = 1; k <= 4; ++k)
            for (const auto& t : all_trees(k)) {
                auto nf = lie_normal_form(t, n);
                auto e = expand(t, n);
                EXPECT_EQ(expand(nf, n).terms, e.terms);
                for (const auto& [w, c] : nf) EXPECT_EQ(w.front(), 1);
            }
}

TEST(Lie, SpanOfAllBracketingsHasFactorialDimension) {
    for (int n : {2, 3})
        for (int k = 1; k <= 4; ++k) {
            std::map<std::vector<int>, int> row;
            std::vector<std::map<int, Rational>> cols;
            for (const auto& t : all_trees(k)) {
                std::map<int, Rational> col;
                for (const auto& [w, c] : expand(t, n).terms) {
                    auto it = row.emplace(w, static_cast<int>(row.size())).first;
                    col[it->second] = c;
                }
                cols.push_back(col);
            }
            SparseMatrix M(static_cast<int>(row.size()) + 1, static_cast<int>(cols.size()));
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (const auto& [i, v] : cols[j]) M.add(i, static_cast<int>(j), v);
            long fact = 1;
            for (int i = 2; i < k; ++i) fact *= i;
            EXPECT_EQ(rank(M), fact) << "n=" << n << " k=" << k;
            EXPECT_EQ(static_cast<long>(lie_basis(range_vertices(k)).size()), fact);
        }
}

TEST(Lie, GradedJacobi) {
    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]] with |z| = 1 - n
    auto L = [](int u) { return LieTree::letter(u); };
    auto B = [](LieTree a, LieTree b) { return LieTree::bracket(std::move(a), std::move(b)); };
    for (int n : {2, 3}) {
        auto lhs = lie_normal_form(B(L(1), B(L(2), L(3))), n);
        auto rhs = lie_normal_form(B(B(L(1), L(2)), L(3)), n);
        const int s = (1 - n) % 2 ? -1 : 1;
        for (const auto& [w, c] : lie_normal_form(B(L(2), B(L(1), L(3))), n)) add_coef(rhs, w, s * c);
        EXPECT_EQ(lhs, rhs) << "n=" << n;
    }
    EXPECT_THROW(lie_normal_form(B(L(1), L(1)), 2), std::invalid_argument);
}

TEST(LiePairing, TreeAndNormalFormAgree) {
    for (int n : {2, 3, 4})
        for (int k = 2; k <= 4; ++k) {
            auto monos = en_dual_basis(n, k).connected;
            for (const auto& t : all_trees(k)) {
                auto nf = lie_normal_form(t, n);
                for (const auto& m : monos) EXPECT_EQ(lie_pair(m, t, n), lie_pair(m, nf, n));
            }
        }
}

TEST(LiePairing, VanishesOnArnoldRelations) {
    // ω_ab ω_bc + ω_bc ω_ca + ω_ca ω_ab pairs to zero with every tree on {a,b,c}
    for (int n : {2, 3, 4})
        for (const auto& t : all_trees(3)) {
            Rational s = 0;
            for (const auto& w : std::vector<std::vector<Edge>>{{{1, 2}, {2, 3}}, {{2, 3}, {3, 1}}, {{3, 1}, {1, 2}}})
                s += lie_pair(w, t, n);
            EXPECT_EQ(s, 0) << "n=" << n;
            // orientation and order of edges follow the e_n^∨ signs
            Rational a = lie_pair({{1, 2}, {2, 3}}, t, n);
            EXPECT_EQ(lie_pair({{2, 1}, {2, 3}}, t, n), (n % 2 ? -1 : 1) * a);
            EXPECT_EQ(lie_pair({{2, 3}, {1, 2}}, t, n), ((n - 1) % 2 ? -1 : 1) * a);
        }
}

TEST(LiePairing, PerfectOnConnectedPart) {
    for (int n : {2, 3, 4})
        for (int k = 1; k <= 5; ++k) {
            auto monos = en_dual_basis(n, k).connected;
            auto words = lie_basis(range_vertices(k));
            ASSERT_EQ(monos.size(), words.size());
            SparseMatrix M(static_cast<int>(monos.size()), static_cast<int>(words.size()));
            for (std::size_t i = 0; i < monos.size(); ++i)
                for (std::size_t j = 0; j < words.size(); ++j)
                    M.add(static_cast<int>(i), static_cast<int>(j), lie_pair(monos[i], left_normed(words[j]), n));
            EXPECT_EQ(rank(M), static_cast<int>(monos.size())) << "n=" << n << " k=" << k;
        }
}

TEST(CePairing, SingletonPairing) {
    for (const auto& A : {sphere(2), sphere(3), complex_projective(2)}) {
        LsSpace G(A, 1);
        CeSpace C(A, 1);
        for (int a = 0; a < A.dim(); ++a)
            for (int b = 0; b < A.dim(); ++b) {
                Rational expect = koszul(A.degree(a)) * A.eps(A.mul(a, b));
                EXPECT_EQ(C.pair(G, LsKey{{}, {a}}, CeKey{CeBlock{{1}, b}}), expect);
            }
    }
}

TEST(CePairing, DegreesAreReflected) {
    for (const auto& A : {sphere(2), sphere(3), complex_projective(2)})
        for (int k = 1; k <= 3; ++k) {
            auto gd = LsSpace(A, k).complex().dimension_poly();
            auto cd = CeSpace(A, k).complex().dimension_poly();
            for (const auto& [deg, c] : gd.c) EXPECT_EQ(cd.at(-deg), c) << A.name() << " k=" << k;
            EXPECT_EQ(gd.total(), cd.total());
        }
}

TEST(CePairing, FullChecks) {
    for (const auto& A : {sphere(2), sphere(3), complex_projective(2), builtin("fat_sphere3"), point()})
        for (int k = 1; k <= 3; ++k) {
            auto r = pairing_checks(A, k);
            EXPECT_TRUE(r.ok()) << A.name() << " k=" << k << " " << r.witness;
            EXPECT_GT(r.pairs_checked, 0);
        }
    EXPECT_EQ(pairing_checks(sphere(2), 2).pairs_checked, 36);
    EXPECT_EQ(pairing_checks(sphere(3), 3).pairs_checked, 576);
}

TEST(CePairing, MismatchedSpacesRejected) {
    auto A = sphere(2), B = sphere(3);
    LsSpace G(A, 2);
    CeSpace C(B, 2), D(A, 3);
    CeKey y{CeBlock{{1}, 0}, CeBlock{{2}, 0}};
    EXPECT_THROW(C.pair(G, LsKey{{}, {0, 0}}, y), std::invalid_argument);
    EXPECT_THROW(D.pair(G, LsKey{{}, {0, 0}}, y), std::invalid_argument);
}

TEST(LieAlgebras, Validation) {
    for (auto s : {"abelian:2", "affine", "sl2"}) EXPECT_TRUE(builtin_lie(s).validate().ok) << s;
    EXPECT_TRUE(heisenberg().validate().ok);
    auto bad = not_jacobi().validate();
    EXPECT_FALSE(bad.ok);
    EXPECT_NE(bad.message.find("Jacobi"), std::string::npos) << bad.message;
    FiniteLieAlgebra skew = affine_lie();
    skew.bracket.erase({1, 0});
    auto r = skew.validate();
    EXPECT_FALSE(r.ok);
    EXPECT_NE(r.message.find("antisymmetry"), std::string::npos);
    EXPECT_THROW(builtin_lie("abelian"), std::invalid_argument);
    EXPECT_THROW(builtin_lie("so3"), std::invalid_argument);
    EXPECT_THROW(builtin_lie("sl2:3"), std::invalid_argument);
}

TEST(CeHomology, LieAlgebraCohomologyOfAPoint) {
    // classical values, reflected: H(aff) = 1 + t, H(sl2) = 1 + t^3,
    // H(abelian:2) = (1 + t)^2, H(heisenberg) = 1 + 2t + 2t^2 + t^3
    const auto pt = point();
    EXPECT_EQ(ce_homology(pt, affine_lie(), 2).homology, (Poly{{{-1, 1}, {0, 1}}}));
    EXPECT_EQ(ce_homology(pt, sl2_lie(), 3).homology, (Poly{{{-3, 1}, {0, 1}}}));
    EXPECT_EQ(ce_homology(pt, abelian_lie(2), 2).homology, (Poly{{{-2, 1}, {-1, 2}, {0, 1}}}));
    EXPECT_EQ(ce_homology(pt, heisenberg(), 3).homology, (Poly{{{-3, 1}, {-2, 2}, {-1, 2}, {0, 1}}}));
    // larger caps change nothing once the exterior algebra is exhausted
    EXPECT_EQ(ce_homology(pt, sl2_lie(), 5).homology, ce_homology(pt, sl2_lie(), 3).homology);
}

TEST(CeHomology, AbelianOverFormalAlgebraHasZeroDifferential) {
    auto r = ce_homology(sphere(2), abelian_lie(1), 2);
    EXPECT_EQ(r.homology, r.dims);
    EXPECT_EQ(r.homology, (Poly{{{-1, 1}, {0, 2}, {1, 1}}}));
}

TEST(CeHomology, FatSphereLowDegrees) {
    // ↓(1⊗x) odd in degree -1, ↓(x⊗x) even in degree 0 with d = ↓(y⊗x) in degree 1,
    // ↓(xy⊗x) even in degree 2: the untruncated homology is (1 + t^-1)(1 + t^2 + t^4 + ...).
    auto r = ce_homology(builtin("fat_sphere3"), abelian_lie(1), 3);
    EXPECT_EQ(r.homology.at(-1), 1);
    EXPECT_EQ(r.homology.at(0), 1);
    EXPECT_EQ(r.homology, (Poly{{{-1, 1}, {0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {6, 1}}}));
}

TEST(CeHomology, RegressionValues) {
    EXPECT_EQ(ce_homology(sphere(2), affine_lie(), 3).homology, (Poly{{{-1, 1}, {0, 2}, {1, 2}}}));
    for (const auto& A : {sphere(2), builtin("fat_sphere3")})
        EXPECT_TRUE(LieCe(A, sl2_lie()).complex(3).verify().ok) << A.name();
}

TEST(CeHomology, Errors) {
    EXPECT_THROW(ce_homology(point(), affine_lie(), 0), std::invalid_argument);
    EXPECT_THROW(ce_homology(point(), not_jacobi(), 2), std::invalid_argument);
}
