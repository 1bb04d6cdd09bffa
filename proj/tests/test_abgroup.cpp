#include <gtest/gtest.h>

#include <random>

#include "modtopo/abgroup.hpp"
#include "oracles.hpp"

using namespace modtopo;

namespace {

FgAbGroup Zt(std::vector<long long> torsion, std::size_t rank = 0) {
    std::vector<Integer> t(torsion.begin(), torsion.end());
    return FgAbGroup(rank, t);
}

std::vector<std::vector<Integer>> rows_of(const IntMatrix& m) {
    std::vector<std::vector<Integer>> a(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            a[r][c] = m(r, c);
    return a;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound) {
    std::uniform_int_distribution<int> e(-bound, bound);
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = e(rng);
    return m;
}

FgAbGroup random_group(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> rank(0, 2), count(0, 3), order(0, 12);
    std::vector<Integer> t;
    for (int i = count(rng); i > 0; --i)
        t.push_back(order(rng));
    return FgAbGroup(static_cast<std::size_t>(rank(rng)), t);
}

} // namespace

TEST(Canonical, DropsUnitsAndFoldsZeros) {
    EXPECT_EQ(Zt({1, 0, -4, 6}), Zt({2, 12}, 1));
    EXPECT_EQ(Zt({2, 3}), Zt({6}));
    EXPECT_EQ(Zt({4, 6}).invariant_factors(), (std::vector<Integer>{2, 12}));
    EXPECT_EQ(FgAbGroup::trivial().to_string(), "0");
    EXPECT_EQ(Zt({2, 4}, 3).to_string(), "Z^3 + Z/2 + Z/4");
    EXPECT_EQ(Zt({12}).primary_decomposition(), (std::vector<Integer>{3, 4}));
}

TEST(SmithNormalForm, Examples) {
    EXPECT_EQ(smith_normal_form(IntMatrix{{0}}).diagonal, (std::vector<Integer>{0}));
    EXPECT_EQ(smith_normal_form(IntMatrix::identity(2)).diagonal, (std::vector<Integer>{1, 1}));
    EXPECT_EQ(smith_normal_form(IntMatrix{{2, 4}, {6, 8}}).diagonal, (std::vector<Integer>{2, 4}));
    EXPECT_TRUE(smith_normal_form(IntMatrix(0, 3)).diagonal.empty());
}

TEST(SmithNormalForm, ReconstructsWithUnimodularTransforms) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = rng() % 6, cols = rng() % 6;
        const IntMatrix m = random_matrix(rng, rows, cols, 9);
        const auto snf = smith_normal_form(m);
        ASSERT_EQ(snf.left * snf.diagonal_matrix() * snf.right, m);
        ASSERT_EQ(snf.left * snf.left_inverse, IntMatrix::identity(rows));
        ASSERT_EQ(snf.right * snf.right_inverse, IntMatrix::identity(cols));
        const Integer dl = oracle::determinant(rows_of(snf.left));
        const Integer dr = oracle::determinant(rows_of(snf.right));
        ASSERT_TRUE(dl == 1 || dl == -1);
        ASSERT_TRUE(dr == 1 || dr == -1);
        for (std::size_t i = 1; i < snf.diagonal.size(); ++i)
            if (snf.diagonal[i] != 0) {
                ASSERT_EQ(snf.diagonal[i] % snf.diagonal[i - 1], 0);
            }
    }
}

TEST(SmithNormalForm, MatchesDeterminantalDivisors) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const IntMatrix m = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 9);
        const auto diag = smith_diagonal(m);
        Integer product = 1;
        for (std::size_t k = 1; k <= diag.size(); ++k) {
            product *= diag[k - 1];
            ASSERT_EQ(product, oracle::minors_gcd(m, k)) << "k = " << k;
        }
    }
}

TEST(SmithNormalForm, LargeEntriesStayExact) {
    IntMatrix m{{1000000007, 998244353}, {998244353, 1000000009}};
    for (int i = 0; i < 4; ++i)
        m = m * m;
    const auto snf = smith_normal_form(m);
    EXPECT_EQ(snf.left * snf.diagonal_matrix() * snf.right, m);
    EXPECT_EQ(snf.diagonal[0] * snf.diagonal[1], boost::multiprecision::abs(oracle::determinant(rows_of(m))));
}

TEST(Homology, Examples) {
    EXPECT_EQ(homology_of_complex({IntMatrix{{0}}}), (std::vector<FgAbGroup>{FgAbGroup::free(1), FgAbGroup::free(1)}));
    EXPECT_EQ(homology_of_complex({IntMatrix{{0}}, IntMatrix{{2}}}),
              (std::vector<FgAbGroup>{FgAbGroup::free(1), FgAbGroup::cyclic(2), FgAbGroup()}));
    EXPECT_EQ(homology_of_complex({IntMatrix(1, 2), IntMatrix(2, 1)}),
              (std::vector<FgAbGroup>{FgAbGroup::free(1), FgAbGroup::free(2), FgAbGroup::free(1)}));
}

TEST(Homology, Errors) {
    try {
        homology_of_complex({IntMatrix(1, 2), IntMatrix(3, 1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    try {
        homology_of_complex({IntMatrix{{1}}, IntMatrix{{1}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAComplex);
    }
}

TEST(Homology, RandomComplexesMatchMinorOracle) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 80; ++trial) {
        const auto c = oracle::random_complex(rng, 1 + rng() % 3, 4, 4);
        ASSERT_EQ(homology_of_complex(c), oracle::homology(c));
        ASSERT_EQ(cohomology_of_complex(c), oracle::cohomology(c));
    }
}

TEST(Homology, InvariantUnderCellReordering) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        auto c = oracle::random_complex(rng, 3, 5, 4);
        const auto before = homology_of_complex(c);
        // Reverse the cell order in every degree.
        for (auto& m : c) {
            IntMatrix p(m.rows(), m.cols());
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t col = 0; col < m.cols(); ++col)
                    p(m.rows() - 1 - r, m.cols() - 1 - col) = m(r, col);
            m = p;
        }
        ASSERT_EQ(homology_of_complex(c), before);
    }
}

TEST(GroupOps, DirectSum) {
    EXPECT_EQ(direct_sum(FgAbGroup::free(1), FgAbGroup()), FgAbGroup::free(1));
    EXPECT_EQ(direct_sum(Zt({2}), Zt({3})), Zt({6}));
    EXPECT_EQ(direct_sum(Zt({2}), Zt({4})).invariant_factors(), (std::vector<Integer>{2, 4}));
    EXPECT_EQ(direct_power(Zt({2}, 1), 3), Zt({2, 2, 2}, 3));
}

TEST(GroupOps, TensorTorHomExtExamples) {
    const FgAbGroup a = Zt({2, 4}, 2);
    EXPECT_EQ(tensor(FgAbGroup::free(1), a), a);
    EXPECT_EQ(tensor(Zt({4}), Zt({6})), Zt({2}));
    EXPECT_EQ(tensor(Zt({2}, 1), Zt({2})), Zt({2, 2}));
    EXPECT_EQ(tor(FgAbGroup::free(1), a), FgAbGroup());
    EXPECT_EQ(tor(Zt({4}), Zt({6})), Zt({2}));
    EXPECT_EQ(tor(Zt({2}, 1), Zt({2})), Zt({2}));
    EXPECT_EQ(hom(FgAbGroup::free(1), a), a);
    EXPECT_EQ(hom(Zt({2}), FgAbGroup::free(1)), FgAbGroup());
    EXPECT_EQ(hom(Zt({4}), Zt({6})), Zt({2}));
    EXPECT_EQ(ext(FgAbGroup::free(1), a), FgAbGroup());
    EXPECT_EQ(ext(Zt({4}), Zt({6})), Zt({2}));
    for (long long m = 2; m <= 9; ++m)
        EXPECT_EQ(ext(Zt({m}), FgAbGroup::free(1)), Zt({m}));
}

TEST(GroupOps, IsIsomorphic) {
    EXPECT_TRUE(is_isomorphic(FgAbGroup::free(2), FgAbGroup::free(2)));
    EXPECT_TRUE(is_isomorphic(direct_sum(Zt({2}), Zt({3})), Zt({6})));
    EXPECT_FALSE(is_isomorphic(Zt({4}), Zt({2, 2})));
}

TEST(GroupOps, CyclicPairsMatchEnumeration) {
    for (std::int64_t m = 2; m <= 12; ++m)
        for (std::int64_t n = 2; n <= 12; ++n) {
            const auto zm = FgAbGroup::cyclic(m), zn = FgAbGroup::cyclic(n);
            // Subgroups and quotients of cyclic groups are cyclic, so the
            // order determines the group.
            const auto by_order = [](std::int64_t k) { return FgAbGroup::cyclic(k); };
            ASSERT_EQ(hom(zm, zn), by_order(oracle::killed_by(m, n)));
            ASSERT_EQ(tor(zm, zn), by_order(oracle::killed_by(m, n)));
            ASSERT_EQ(ext(zm, zn), by_order(oracle::cokernel_of_multiplication(m, n)));
            ASSERT_EQ(tensor(zm, zn), by_order(oracle::cokernel_of_multiplication(m, n)));
        }
}

TEST(GroupOps, AlgebraicLaws) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_group(rng), b = random_group(rng), c = random_group(rng);
        ASSERT_EQ(direct_sum(a, b), direct_sum(b, a));
        ASSERT_EQ(direct_sum(direct_sum(a, b), c), direct_sum(a, direct_sum(b, c)));
        ASSERT_EQ(tensor(a, b), tensor(b, a));
        ASSERT_EQ(tensor(tensor(a, b), c), tensor(a, tensor(b, c)));
        ASSERT_EQ(tensor(a, direct_sum(b, c)), direct_sum(tensor(a, b), tensor(a, c)));
        ASSERT_EQ(tor(a, b), tor(b, a));
        if (a.is_free()) {
            ASSERT_TRUE(tor(a, b).is_trivial());
        }
    }
}

TEST(GroupOps, ClosedFormsMatchPresentationCokernels) {
    // tensor of cyclic groups is presented by diag(m) + diag(n) stacked.
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const long long m = 1 + rng() % 30, n = 1 + rng() % 30;
        EXPECT_EQ(tensor(Zt({m}), Zt({n})), cokernel(IntMatrix{{m, n}}));
        EXPECT_EQ(direct_sum(Zt({m}), Zt({n})), cokernel(IntMatrix{{m, 0}, {0, n}}));
    }
}

TEST(Subquotient, RejectsNonHomomorphism) {
    const Presentation z2 = presentation_of(FgAbGroup::cyclic(2));
    const Presentation z = presentation_of(FgAbGroup::free(1));
    try {
        EXPECT_EQ(subquotient(z, IntMatrix(1, 0), IntMatrix{{1}}, z2), FgAbGroup::free(1));
        subquotient(z2, IntMatrix(1, 0), IntMatrix{{1}}, z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAHomomorphism);
    }
}

TEST(Subquotient, KernelModImage) {
    // Z --2--> Z --0--> Z/4: ker = Z, im = 2Z, so Z/2.
    const Presentation z = presentation_of(FgAbGroup::free(1));
    const Presentation z4 = presentation_of(FgAbGroup::cyclic(4));
    EXPECT_EQ(subquotient(z, IntMatrix{{2}}, IntMatrix{{0}}, z4), FgAbGroup::cyclic(2));
    // Z --2--> Z/4 --2--> Z/4: ker = im = {0, 2}.
    EXPECT_EQ(subquotient(z4, IntMatrix{{2}}, IntMatrix{{2}}, z4), FgAbGroup());
    EXPECT_EQ(subquotient(z4, IntMatrix{{0}}, IntMatrix{{2}}, z4), FgAbGroup::cyclic(2));
}
