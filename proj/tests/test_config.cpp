#include "macrofield/config.hpp"
#include "macrofield/errors.hpp"

#include <doctest.h>

using namespace macrofield;

TEST_SUITE("config") {

TEST_CASE("model document with every rate form") {
    const auto p = parse_model_params(R"({
        "p_v0": 0.06,
        "p_rel": {"exponential_prel": {"p_rel0": 0.9, "T_h": 70}},
        "p_s": {"table": {"1951": 0.2, "1950": 0.1}},
        "p_B": 0.01,
        "Y0": 10, "K0": 4, "t0": 1950
    })");
    CHECK(p.p_v0 == 0.06);
    CHECK(p.p_s(0.0, 1950) == 0.1);
    CHECK(p.p_s(1.0, 1950) == 0.2);
    CHECK(p.p_B(3.0, 1950) == 0.01);
    CHECK(std::get<ExponentialPrel>(p.p_rel.variant()).T_h == 70.0);
    CHECK(p.Y0 == 10.0);
    CHECK_FALSE(p.p_n.has_value());
}

TEST_CASE("defaults and round trip") {
    const auto p = parse_model_params("{}");
    CHECK(p.Y0 == 52.582);
    const auto q = parse_model_params(model_params_to_json(p));
    CHECK(q.K0 == p.K0);
    CHECK(q.t0 == p.t0);
    CHECK(net_business_rate(q, 12.5) == net_business_rate(p, 12.5));
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_model_params(R"({"p_q": 1})"), ValidationError);
    CHECK_THROWS_AS(parse_model_params(R"({"p_s": "x"})"), ValidationError);
    CHECK_THROWS_AS(parse_model_params(R"({"p_s": {"table": {"1950": 0.1, "1952": 0.1}}})"), ValidationError);
    CHECK_THROWS_AS(parse_model_params(R"({"Y0": -1})"), ValidationError);
    CHECK_THROWS_AS(parse_model_params("{"), ValidationError);
    CHECK_THROWS_AS(parse_model_params(R"({"t0": 1950.5})"), ValidationError);
}

TEST_CASE("simulation document") {
    const auto c = parse_simulation_config(R"({"horizon": 20, "step": 0.5, "method": "euler", "p_s": 0.2})");
    CHECK(c.options.horizon == 20);
    CHECK(c.options.step == 0.5);
    CHECK(c.options.method == Method::euler);
    CHECK(c.params.p_s(0, 0) == 0.2);
    CHECK_THROWS_AS(parse_simulation_config(R"({"method": "heun"})"), ValidationError);
}

TEST_CASE("world document") {
    const auto c = parse_world_config(R"({
        "economies": [{"name": "strong"}, {"name": "weak", "Y0": 26.291, "K0": 9.983, "t0": 1975}],
        "transfers": [{"from": "strong", "to": 1, "kind": "capital", "rate": 0.1, "gdp_share": true}],
        "exogenous": [{"economy": "weak", "kind": "gdp", "rate": 1.0}],
        "retarded": true,
        "horizon": 100
    })");
    CHECK(c.names == std::vector<std::string>{"strong", "weak"});
    CHECK(c.world.economies[1].t0 == 1975);
    CHECK(c.world.transfers[0].from == 0);
    CHECK(c.world.transfers[0].to == 1);
    CHECK(c.world.transfers[0].gdp_share);
    CHECK(c.world.exogenous[0].kind == TransferKind::gdp);
    CHECK(c.world.retarded);
    CHECK(c.horizon == 100);
    CHECK_THROWS_AS(parse_world_config(R"({"economies": []})"), ValidationError);
    CHECK_THROWS_AS(parse_world_config(R"({"economies": [{}], "transfers": [{"from": 0, "to": 5, "kind": "capital", "rate": 1}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_world_config(R"({"economies": [{}, {}], "transfers": [{"from": 0, "to": 1, "kind": "money", "rate": 1}]})"),
                    ValidationError);
}

}
