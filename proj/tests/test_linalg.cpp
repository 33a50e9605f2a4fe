#include "confmodel/ls_model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace confmodel;

namespace {

SparseMatrix dense(const std::vector<std::vector<long>>& rows) {
    const int r = static_cast<int>(rows.size()), c = r ? static_cast<int>(rows[0].size()) : 0;
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.add(i, j, Rational(rows[i][j]));
    return m;
}

// Oracle: dense fraction-free (Bareiss) elimination over the integers.
int bareiss_rank(std::vector<std::vector<mpz_class>> a) {
    const int R = static_cast<int>(a.size());
    if (R == 0) return 0;
    const int C = static_cast<int>(a[0].size());
    mpz_class prev = 1;
    int rank = 0;
    for (int col = 0; col < C && rank < R; ++col) {
        int piv = -1;
        for (int i = rank; i < R; ++i)
            if (a[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        for (int i = rank + 1; i < R; ++i) {
            for (int j = col + 1; j < C; ++j) a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

CochainComplex single_map(const Rational& v) {
    CochainComplex c;
    c.set_dim(0, 1);
    c.set_dim(1, 1);
    SparseMatrix m(1, 1);
    m.add(0, 0, v);
    c.set_d(0, m);
    return c;
}

}  // namespace

TEST(Rational, LowestTermsAndParsing) {
    Rational q = parse_rational("-6/4");
    EXPECT_EQ(q.get_num(), -3);
    EXPECT_EQ(q.get_den(), 2);
    EXPECT_EQ(parse_rational("7"), 7);
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(SparseMatrix, NoStoredZeros) {
    SparseMatrix m(2, 2);
    m.add(0, 1, 3);
    m.add(0, 1, -3);
    EXPECT_EQ(m.nnz(), 0u);
    EXPECT_TRUE(m.is_zero());
    EXPECT_THROW(m.add(2, 0, 1), std::out_of_range);
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(SparseMatrix(3, 3)), 0);
    EXPECT_EQ(rank(dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})), 3);
    EXPECT_EQ(rank(dense({{1, 2, 3}, {2, 4, 6}})), 1);
    EXPECT_EQ(rank(SparseMatrix(0, 4)), 0);
}

TEST(Rank, MatchesBareissAndTranspose) {
    std::mt19937 rng(20240601);
    std::uniform_int_distribution<int> size(1, 7), val(-3, 3), sparse(0, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const int r = size(rng), c = size(rng);
        std::vector<std::vector<mpz_class>> a(r, std::vector<mpz_class>(c));
        SparseMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                int v = sparse(rng) ? 0 : val(rng);
                a[i][j] = v;
                m.add(i, j, v);
            }
        // duplicate a row now and then to force rank drops
        if (r > 1 && trial % 3 == 0)
            for (int j = 0; j < c; ++j) {
                m.add(r - 1, j, m.at(0, j) * 2 - m.at(r - 1, j));
                a[r - 1][j] = a[0][j] * 2;
            }
        const int expect = bareiss_rank(a);
        EXPECT_EQ(rank(m), expect);
        EXPECT_EQ(rank(m.transpose()), expect);
    }
}

TEST(Complex, TrivialExamples) {
    CochainComplex zero;
    zero.set_dim(0, 2);
    zero.set_dim(3, 1);
    EXPECT_TRUE(zero.verify().ok);
    EXPECT_EQ(zero.betti(), (Poly{{{0, 2}, {3, 1}}}));

    auto id = single_map(1);
    EXPECT_TRUE(id.verify().ok);
    EXPECT_TRUE(id.betti().c.empty());

    auto z = single_map(0);
    EXPECT_EQ(z.betti(), (Poly{{{0, 1}, {1, 1}}}));
}

TEST(Complex, NegativeDegrees) {
    CochainComplex c;
    c.set_dim(-2, 1);
    c.set_dim(-1, 1);
    EXPECT_EQ(c.betti(), (Poly{{{-2, 1}, {-1, 1}}}));
}

TEST(Complex, StructuralError) {
    CochainComplex c;
    c.set_dim(0, 2);
    c.set_dim(1, 1);
    c.set_d(0, SparseMatrix(1, 3));
    auto rep = c.verify();
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.structural_error.empty());
    EXPECT_THROW(c.betti(), std::logic_error);
}

TEST(Complex, CorruptedLsComplexIsDetected) {
    auto cx = ls_complex(sphere(2), 3);
    ASSERT_TRUE(cx.verify().ok);
    // perturb d_k at a row i where d_{k+1} has a nonzero column i
    for (const auto& [k, m] : cx.differentials()) {
        auto nx = cx.differentials().find(k + 1);
        if (nx == cx.differentials().end()) continue;
        for (int i = 0; i < nx->second.cols(); ++i) {
            if (nx->second.column(i).empty()) continue;
            SparseMatrix bad = m;
            bad.add(i, 0, 1);
            CochainComplex c2 = cx;
            c2.set_d(k, bad);
            auto rep = c2.verify();
            EXPECT_FALSE(rep.ok);
            ASSERT_FALSE(rep.failures.empty());
            EXPECT_EQ(rep.failures[0].degree, k);
            EXPECT_EQ(rep.failures[0].witness_column, 0);
            EXPECT_THROW(c2.betti(), std::logic_error);
            return;
        }
    }
    FAIL() << "no perturbable degree found";
}

TEST(Complex, LsSphere2ArityTwo) {
    // 6-dimensional complex {0:1, 1:1, 2:2, 3:1, 4:1}; by hand only ω12 -> v1 + v2
    // and v·ω12 -> v1v2 are nonzero, leaving 1 + t^2.
    auto cx = ls_complex(sphere(2), 2);
    EXPECT_EQ(cx.dimension_poly(), (Poly{{{0, 1}, {1, 1}, {2, 2}, {3, 1}, {4, 1}}}));
    EXPECT_EQ(cx.betti(), (Poly{{{0, 1}, {2, 1}}}));
}

TEST(Complex, BettiInvariantUnderBasisPermutation) {
    auto cx = ls_complex(sphere(3), 3);
    std::mt19937 rng(7);
    CochainComplex p;
    std::map<int, std::vector<int>> perm;
    for (const auto& [k, n] : cx.dims()) {
        std::vector<int> v(n);
        std::iota(v.begin(), v.end(), 0);
        std::shuffle(v.begin(), v.end(), rng);
        perm[k] = v;
        p.set_dim(k, n);
    }
    for (const auto& [k, m] : cx.differentials()) {
        SparseMatrix q(m.rows(), m.cols());
        for (int j = 0; j < m.cols(); ++j)
            for (const auto& [i, v] : m.column(j)) q.add(perm[k + 1][i], perm[k][j], v);
        p.set_d(k, q);
    }
    EXPECT_EQ(p.betti(), cx.betti());
}

TEST(Complex, EulerCharacteristicMatches) {
    for (const auto& A : {sphere(2), sphere(3), complex_projective(2), builtin("fat_sphere3")})
        for (int k = 0; k <= 4; ++k) {
            auto cx = ls_complex(A, k);
            EXPECT_EQ(cx.betti().euler(), cx.dimension_poly().euler()) << A.name() << " k=" << k;
        }
}

TEST(Inverse, SmallMatrix) {
    std::vector<std::vector<Rational>> a{{2, 1}, {1, 1}};
    auto inv = inverse(a);
    EXPECT_EQ(inv[0][0], 1);
    EXPECT_EQ(inv[0][1], -1);
    EXPECT_EQ(inv[1][0], -1);
    EXPECT_EQ(inv[1][1], 2);
    EXPECT_THROW(inverse({{1, 2}, {2, 4}}), std::domain_error);
}
