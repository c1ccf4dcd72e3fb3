#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "critspace/polyarith.hpp"
#include "oracles.hpp"

using namespace critspace;
using oracle::ed_oracle;

namespace {

SparsePoly var(std::size_t k, std::size_t i) { return SparsePoly::variable(k, i); }

}  // namespace

TEST_CASE("add examples")
{
    const auto h1 = var(2, 0), h2 = var(2, 1);
    CHECK(add(h1, -h1).is_zero());
    auto s = add(add(h1, h2), h2);
    CHECK(s.coefficient({1, 0}) == 1);
    CHECK(s.coefficient({0, 1}) == 2);
    CHECK(s.term_count() == 2);
    CHECK(add(s, SparsePoly(2)) == s);
    CHECK_THROWS(add(h1, var(3, 0)));
}

TEST_CASE("mul_truncated examples")
{
    const auto h1 = var(2, 0), h2 = var(2, 1);
    auto sq = mul_truncated(add(h1, h2), add(h1, h2), {1, 1});
    CHECK(sq.term_count() == 1);
    CHECK(sq.coefficient({1, 1}) == 2);

    auto p = add(mul_truncated(h1, h1, {5, 5}), h2);
    CHECK(mul_truncated(p, SparsePoly::constant(2, 1), {5, 5}) == p);
    auto trunc = mul_truncated(p, SparsePoly::constant(2, 1), {1, 1});
    CHECK(trunc == h2);

    SparsePoly t3 = add(add(var(3, 0), var(3, 1)), var(3, 2));
    auto t3sq = mul_truncated(t3, t3, {1, 1, 1});
    CHECK(t3sq.term_count() == 3);
    CHECK(t3sq.coefficient({1, 1, 0}) == 2);
    CHECK(t3sq.coefficient({1, 0, 1}) == 2);
    CHECK(t3sq.coefficient({0, 1, 1}) == 2);
    CHECK_THROWS(mul_truncated(h1, var(3, 0), {1, 1}));
}

TEST_CASE("polynomial printing")
{
    auto p = add(mul_truncated(var(2, 0), var(2, 0), {4, 4}), SparsePoly::constant(2, -3));
    CHECK(p.to_string().find("h1^2") != std::string::npos);
    CHECK(SparsePoly(2).to_string() == "0");
}

TEST_CASE("fo_factor examples")
{
    CHECK(fo_factor(0, {1, 1}) == add(var(2, 0), var(2, 1)));
    CHECK(fo_factor(1, {1, 1, 1}) == add(add(var(3, 0), var(3, 1)), var(3, 2)));
    auto f = fo_factor(0, {2, 2});
    CHECK(f.term_count() == 3);
    CHECK(f.coefficient({2, 0}) == 1);
    CHECK(f.coefficient({1, 1}) == 1);
    CHECK(f.coefficient({0, 2}) == 1);
}

TEST_CASE("fo_factor structure")
{
    std::mt19937 gen(3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 2 + gen() % 3;
        std::vector<int> n(k);
        for (auto& v : n)
            v = 1 + static_cast<int>(gen() % 4);
        const std::size_t i = gen() % k;
        auto f = fo_factor(i, n);
        std::set<int> own;
        for (const auto& [e, c] : f.terms()) {
            CHECK(std::accumulate(e.begin(), e.end(), 0) == n[i]);
            CHECK(c > 0);
            own.insert(e[i]);
        }
        CHECK(own.size() == static_cast<std::size_t>(n[i] + 1));
    }
}

TEST_CASE("ed_degree examples")
{
    CHECK(ed_degree({1, 1}) == 2);
    CHECK(ed_degree({1, 1, 1}) == 6);
    CHECK(ed_degree({2, 2}) == 3);
    CHECK(ed_degree({1, 1, 3}) == 8);
}

TEST_CASE("ed_degree of matrices is the smaller dimension")
{
    for (int a = 1; a <= 12; ++a)
        for (int b = 1; b <= 12; ++b)
            CHECK(ed_degree({a, b}) == std::min(a, b) + 1);
}

TEST_CASE("ed_degree matches the split-counting oracle")
{
    for (std::size_t k = 2; k <= 4; ++k) {
        std::vector<int> n(k, 1);
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
            if (pos == k) {
                CHECK_MESSAGE(ed_degree(n) == ed_oracle(n), "n size " << k);
                return;
            }
            for (int v = 1; v <= (k == 4 ? 2 : 3); ++v) {
                n[pos] = v;
                rec(pos + 1);
            }
        };
        rec(0);
    }
}

TEST_CASE("ed_degree is permutation invariant")
{
    std::vector<int> n{1, 2, 3};
    const BigInt base = ed_degree(n);
    CHECK(base == ed_oracle(n));
    while (std::next_permutation(n.begin(), n.end()))
        CHECK(ed_degree(n) == base);
}
