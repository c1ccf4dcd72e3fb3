#include <doctest.h>

#include "critspace/errors.hpp"
#include "critspace/tensor_io.hpp"

using namespace critspace;

TEST_CASE("tensor file parsing")
{
    auto f = parse_tensor_json(R"({"dims":[2,2],"entries":[1,2,3,-4]})");
    CHECK(f.integral);
    CHECK(f.real);
    CHECK(f.to_int().entries() == std::vector<std::int64_t>{1, 2, 3, -4});
    CHECK(f.to_real().entries() == std::vector<double>{1, 2, 3, -4});

    auto g = parse_tensor_json(R"({"dims":[2,2],"entries":[1.5,[2,0],3,4]})");
    CHECK_FALSE(g.integral);
    CHECK(g.real);
    CHECK_THROWS_AS(g.to_int(), InputError);
    CHECK(g.to_real()[0] == 1.5);

    auto h = parse_tensor_json(R"({"dims":[2,2],"entries":[1,[2,1],3,4]})");
    CHECK_FALSE(h.real);
    CHECK(h.to_complex()[1] == std::complex<double>(2, 1));
    CHECK_THROWS_AS(h.to_real(), InputError);

    // beyond double precision but within int64
    auto big = parse_tensor_json(R"({"dims":[2,2],"entries":[9007199254740993,0,0,1]})");
    CHECK(big.to_int()[0] == 9007199254740993LL);
}

TEST_CASE("tensor file errors")
{
    CHECK_THROWS_AS(parse_tensor_json("not json"), InputError);
    CHECK_THROWS_AS(parse_tensor_json(R"({"dims":[2,2]})"), InputError);
    CHECK_THROWS_AS(parse_tensor_json(R"({"dims":[2,2],"entries":[1,2,3]})"), InputError);
    CHECK_THROWS_AS(parse_tensor_json(R"({"dims":[1,2],"entries":[1,2]})"), InputError);
    CHECK_THROWS_AS(parse_tensor_json(R"({"dims":[2,2],"entries":[1,2,3,"x"]})"), InputError);
    CHECK_THROWS_AS(parse_tensor_json(R"({"dims":[2,2],"entries":[1,2,3,[1,2,3]]})"), InputError);
    CHECK_THROWS_AS(read_tensor_file("/nonexistent/tensor.json"), InputError);
}

TEST_CASE("tensor file round trip")
{
    IntTensor t(Format({2, 3}), {1, -2, 3, 4, 5, -6});
    auto back = parse_tensor_json(tensor_to_json(t));
    CHECK(back.to_int().entries() == t.entries());
    CHECK(back.format.dims() == t.format().dims());

    ComplexTensor c(Format({2, 2}), {{1, 0}, {0.5, -2}, {3, 0}, {0, 1}});
    auto cb = parse_tensor_json(tensor_to_json(c));
    CHECK(cb.to_complex().entries() == c.entries());
}
