#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "vidlog/errors.hpp"
#include "vidlog/similarity.hpp"

using namespace vidlog;

namespace {

FrameEmbeddingSequence sequence_of(std::vector<std::vector<float>> rows) {
    FrameEmbeddingSequence s;
    s.video_id = "t";
    s.frames = rows.size();
    s.dim = rows.front().size();
    for (const auto& r : rows) s.data.insert(s.data.end(), r.begin(), r.end());
    return s;
}

Matrix random_embeddings(std::mt19937_64& gen, std::size_t n, std::size_t d) {
    std::normal_distribution<double> normal;
    Matrix m(n, d);
    for (auto& v : m.data()) v = normal(gen);
    return m;
}

}  // namespace

TEST_CASE("cosine distances of identical, orthogonal and antipodal vectors") {
    const auto same = cosine_distance_matrix(sequence_of({{1, 0}, {1, 0}}));
    CHECK(same.values(0, 1) == doctest::Approx(0.0));
    CHECK(same.values(1, 0) == doctest::Approx(0.0));

    const auto ortho = cosine_distance_matrix(sequence_of({{1, 0}, {0, 1}}));
    CHECK(ortho.values(0, 1) == doctest::Approx(1.0));
    CHECK(ortho.values(0, 0) == 0.0);

    const auto anti = cosine_distance_matrix(sequence_of({{1, 0}, {-1, 0}}));
    CHECK(anti.values(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("zero-norm frames are reported by index") {
    try {
        cosine_distance_matrix(sequence_of({{1, 0}, {0, 0}, {0, 1}}));
        FAIL("expected ZeroNormFrame");
    } catch (const ZeroNormFrame& e) {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("all-zero 2x2 distances contextualize to the hand-computed values") {
    DistanceMatrix d{Matrix(2, 2, 0.0)};
    const auto c = contextualize(d);
    REQUIRE(c.rows.rows() == 3);
    REQUIRE(c.rows.cols() == 2);
    // index row (1, 2) -> (0.5, 1) -> softmax
    const double e0 = std::exp(0.5), e1 = std::exp(1.0);
    CHECK(c.rows(2, 0) == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-12));
    CHECK(c.rows(2, 1) == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));
    CHECK(c.rows(2, 0) == doctest::Approx(0.3775).epsilon(1e-4));
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(c.rows(r, 0) == doctest::Approx(0.5));
        CHECK(c.rows(r, 1) == doctest::Approx(0.5));
    }
}

TEST_CASE("row-sum normalization divides by the absolute row sum") {
    DistanceMatrix d{Matrix(2, 2, 0.0)};
    const auto c = contextualize(d, RowNormalization::Sum);
    const double e0 = std::exp(1.0 / 3.0), e1 = std::exp(2.0 / 3.0);
    CHECK(c.rows(2, 1) == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));
}

TEST_CASE("contextualized rows are stochastic, symmetric input, scale invariant") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + gen() % 30;
        const Matrix z = random_embeddings(gen, n, 1 + gen() % 16);
        const auto d = cosine_distance_matrix(z);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(d.values(i, i)) <= 1e-7);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(std::abs(d.values(i, j) - d.values(j, i)) <= 1e-9);
                CHECK(d.values(i, j) >= 0.0);
                CHECK(d.values(i, j) <= 2.0);
            }
        }

        Matrix scaled = z;
        const double factor = 0.01 + 100.0 * std::uniform_real_distribution<double>()(gen);
        for (auto& v : scaled.data()) v *= factor;
        const auto ds = cosine_distance_matrix(scaled);
        for (std::size_t i = 0; i < d.values.data().size(); ++i)
            CHECK(std::abs(ds.values.data()[i] - d.values.data()[i]) <= 1e-9);

        const auto c = contextualize(d);
        REQUIRE(c.features() == n + 1);
        REQUIRE(c.frames() == n);
        for (std::size_t r = 0; r <= n; ++r) {
            double s = 0.0;
            for (double v : c.rows.row(r)) {
                CHECK(v > 0.0);
                CHECK(v < 1.0);
                s += v;
            }
            CHECK(std::abs(s - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("swapping two frames swaps their distance columns") {
    std::mt19937_64 gen(5);
    const std::size_t n = 9;
    const Matrix z = random_embeddings(gen, n, 4);
    Matrix swapped = z;
    const std::size_t a = 2, b = 6;
    for (std::size_t k = 0; k < 4; ++k) std::swap(swapped(a, k), swapped(b, k));

    const auto c = contextualize(cosine_distance_matrix(z));
    const auto cs = contextualize(cosine_distance_matrix(swapped));
    // distance row i of the swapped video is row perm(i) of the original with columns a, b exchanged
    const auto perm = [&](std::size_t i) { return i == a ? b : (i == b ? a : i); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(cs.rows(i, j) == doctest::Approx(c.rows(perm(i), perm(j))));
}

TEST_CASE("softmax is shift invariant") {
    const std::vector<double> x = {0.3, -1.2, 4.0};
    std::vector<double> y = x;
    for (auto& v : y) v += 123.456;
    const auto p = softmax(x), q = softmax(y);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(p[i] - q[i]) <= 1e-12);
}
