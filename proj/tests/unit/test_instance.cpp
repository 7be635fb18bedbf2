#include <doctest.h>

#include <obmrr/instance.hpp>
#include <obmrr/rng.hpp>

using namespace obmrr;

TEST_CASE("load_instance parses the minimal document") {
    const Instance ins = load_instance(R"({"num_offline":1,"duration":1,"arrivals":[[0]]})");
    CHECK(ins.num_offline == 1);
    CHECK(ins.duration == 1);
    CHECK(ins.num_online() == 1);
    CHECK(ins.arrivals[0] == std::vector<int>{0});
}

TEST_CASE("load_instance parses the gap example document") {
    const Instance ins = load_instance(
        R"({"num_offline":3,"duration":3,"arrivals":[[0,2],[0,1],[2],[1,2]]})");
    CHECK(ins.num_offline == 3);
    CHECK(ins.num_online() == 4);
    CHECK(ins.num_edges() == 7);
    CHECK(ins == gen_integrality_gap());
}

TEST_CASE("load_instance rejects bad documents") {
    CHECK_THROWS_AS(load_instance("not json"), ParseError);
    CHECK_THROWS_AS(load_instance(R"({"duration":1,"arrivals":[]})"), ParseError);
    // duplicate neighbor in the second arrival
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"num_offline":1,"duration":1,"arrivals":[[0],[0,0]]})"),
        doctest::Contains("arrivals[1]"), ValidationError);
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"num_offline":2,"duration":1,"arrivals":[[2]]})"),
        doctest::Contains("out of range"), ValidationError);
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"num_offline":1,"duration":0,"arrivals":[[0]]})"),
        doctest::Contains("duration"), ValidationError);
}

TEST_CASE("instance serialization round-trips") {
    Rng rng(7);
    for (int k = 0; k < 25; ++k) {
        const Instance ins = gen_random(1 + k % 5, k % 9, 0.4, 1 + k % 4, 1000 + k);
        CHECK(load_instance(serialize_instance(ins)) == ins);
    }
}

TEST_CASE("gen_integrality_gap matches the published example") {
    const Instance ins = gen_integrality_gap();
    CHECK(ins.num_offline == 3);
    CHECK(ins.duration == 3);
    CHECK(ins.num_online() == 4);
    CHECK(ins.num_edges() == 7);
    CHECK_NOTHROW(ins.validate());
}

TEST_CASE("gen_random edge probability extremes and determinism") {
    const Instance full = gen_random(3, 5, 1.0, 2, 11);
    CHECK(full.num_edges() == 15);
    const Instance empty = gen_random(3, 5, 0.0, 2, 11);
    CHECK(empty.num_edges() == 0);
    for (const auto& n : empty.arrivals) CHECK(n.empty());

    CHECK(gen_random(4, 10, 0.5, 3, 42) == gen_random(4, 10, 0.5, 3, 42));
    CHECK(gen_random(4, 10, 0.5, 3, 42) != gen_random(4, 10, 0.5, 3, 43));

    CHECK_THROWS_AS(gen_random(3, 5, 1.5, 2, 1), ValidationError);
    CHECK_THROWS_AS(gen_random(3, 5, 0.5, 0, 1), ValidationError);
}

TEST_CASE("gen_upper_triangular shapes") {
    const Instance two = gen_upper_triangular(2, 2);
    CHECK(two.arrivals == std::vector<std::vector<int>>{{0, 1}, {1}});
    const Instance one = gen_upper_triangular(1, 1);
    CHECK(one.num_edges() == 1);
    CHECK_THROWS_AS(gen_upper_triangular(0, 1), ValidationError);
}

TEST_CASE("generators always validate") {
    for (int k = 0; k < 10; ++k) {
        CHECK_NOTHROW(gen_random(2 + k, 3 + k, 0.3, 1 + k % 5, k).validate());
        CHECK_NOTHROW(gen_upper_triangular(1 + k, 1 + k % 3).validate());
    }
}
