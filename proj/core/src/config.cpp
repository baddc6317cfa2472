#include "macrofield/config.hpp"

#include "macrofield/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace macrofield {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
    if (!obj.is_object()) throw ValidationError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
    }
}

double number(const json& v, std::string_view key) {
    if (!v.is_number()) throw ValidationError("'" + std::string(key) + "' must be a number");
    return v.get<double>();
}

int integer(const json& v, std::string_view key) {
    if (!v.is_number_integer()) throw ValidationError("'" + std::string(key) + "' must be an integer");
    return v.get<int>();
}

RateFn parse_rate(const json& v, std::string_view key) {
    if (v.is_number()) return RateFn(v.get<double>());
    if (!v.is_object() || v.size() != 1) {
        throw ValidationError("'" + std::string(key) + "' must be a number, a table or exponential_prel");
    }
    if (v.contains("table")) {
        const auto& tab = v.at("table");
        if (!tab.is_object() || tab.empty()) throw ValidationError("'" + std::string(key) + "': empty table");
        std::vector<std::pair<int, double>> entries;
        for (const auto& [year, value] : tab.items()) {
            try {
                entries.emplace_back(std::stoi(year), number(value, key));
            } catch (const std::invalid_argument&) {
                throw ValidationError("'" + std::string(key) + "': table key '" + year + "' is not a year");
            }
        }
        std::sort(entries.begin(), entries.end());
        TableRate t{entries.front().first, {}};
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].first != t.first_year + static_cast<int>(i)) {
                throw ValidationError("'" + std::string(key) + "': table years must be contiguous");
            }
            t.values.push_back(entries[i].second);
        }
        return RateFn(std::move(t));
    }
    if (v.contains("exponential_prel")) {
        const auto& e = v.at("exponential_prel");
        reject_unknown(e, {"p_rel0", "T_h"}, key);
        ExponentialPrel p;
        if (e.contains("p_rel0")) p.p_rel0 = number(e.at("p_rel0"), "p_rel0");
        if (e.contains("T_h")) p.T_h = number(e.at("T_h"), "T_h");
        return RateFn(p);
    }
    throw ValidationError("'" + std::string(key) + "': unknown rate form");
}

json rate_to_json(const RateFn& r) {
    const auto& v = r.variant();
    if (const auto* c = std::get_if<ConstantRate>(&v)) return c->value;
    if (const auto* t = std::get_if<TableRate>(&v)) {
        json tab = json::object();
        for (std::size_t i = 0; i < t->values.size(); ++i) {
            tab[std::to_string(t->first_year + static_cast<int>(i))] = t->values[i];
        }
        return json{{"table", tab}};
    }
    const auto& e = std::get<ExponentialPrel>(v);
    return json{{"exponential_prel", {{"p_rel0", e.p_rel0}, {"T_h", e.T_h}}}};
}

const std::set<std::string> kModelKeys = {"p_v0", "p_rel", "p_s", "p_B", "p_P", "a0",
                                          "b0",   "p_n",   "Y0",  "K0",  "t0"};

ModelParams model_from(const json& j) {
    ModelParams p;
    if (j.contains("p_v0")) p.p_v0 = number(j.at("p_v0"), "p_v0");
    if (j.contains("p_rel")) p.p_rel = parse_rate(j.at("p_rel"), "p_rel");
    if (j.contains("p_s")) p.p_s = parse_rate(j.at("p_s"), "p_s");
    if (j.contains("p_B")) p.p_B = parse_rate(j.at("p_B"), "p_B");
    if (j.contains("p_P")) p.p_P = parse_rate(j.at("p_P"), "p_P");
    if (j.contains("a0")) p.a0 = parse_rate(j.at("a0"), "a0");
    if (j.contains("b0")) p.b0 = parse_rate(j.at("b0"), "b0");
    if (j.contains("p_n")) p.p_n = parse_rate(j.at("p_n"), "p_n");
    if (j.contains("Y0")) p.Y0 = number(j.at("Y0"), "Y0");
    if (j.contains("K0")) p.K0 = number(j.at("K0"), "K0");
    if (j.contains("t0")) p.t0 = integer(j.at("t0"), "t0");
    validate(p);
    return p;
}

TransferKind parse_kind(const json& v) {
    if (v == "capital") return TransferKind::capital;
    if (v == "gdp") return TransferKind::gdp;
    throw ValidationError("transfer kind must be 'capital' or 'gdp'");
}

} // namespace

static ModelParams parse_model_params_impl(std::string_view text) {
    const json j = parse(text);
    reject_unknown(j, kModelKeys, "model config");
    return model_from(j);
}

std::string model_params_to_json(const ModelParams& p) {
    json j;
    j["p_v0"] = p.p_v0;
    j["p_rel"] = rate_to_json(p.p_rel);
    j["p_s"] = rate_to_json(p.p_s);
    j["p_B"] = rate_to_json(p.p_B);
    j["p_P"] = rate_to_json(p.p_P);
    j["a0"] = rate_to_json(p.a0);
    j["b0"] = rate_to_json(p.b0);
    if (p.p_n) j["p_n"] = rate_to_json(*p.p_n);
    j["Y0"] = p.Y0;
    j["K0"] = p.K0;
    j["t0"] = p.t0;
    return j.dump(2);
}

static SimulationConfig parse_simulation_config_impl(std::string_view text) {
    const json j = parse(text);
    auto allowed = kModelKeys;
    allowed.insert({"horizon", "step", "method", "allow_negative"});
    reject_unknown(j, allowed, "simulation config");
    json model = json::object();
    for (const auto& key : kModelKeys) {
        if (j.contains(key)) model[key] = j.at(key);
    }
    SimulationConfig c;
    c.params = model_from(model);
    if (j.contains("horizon")) c.options.horizon = integer(j.at("horizon"), "horizon");
    if (j.contains("step")) c.options.step = number(j.at("step"), "step");
    if (j.contains("method")) {
        if (!j.at("method").is_string()) throw ValidationError("'method' must be a string");
        c.options.method = parse_method(j.at("method").get<std::string>());
    }
    if (j.contains("allow_negative")) {
        if (!j.at("allow_negative").is_boolean()) throw ValidationError("'allow_negative' must be a boolean");
        c.options.allow_negative = j.at("allow_negative").get<bool>();
    }
    return c;
}

static WorldConfig parse_world_config_impl(std::string_view text) {
    const json j = parse(text);
    reject_unknown(j, {"economies", "transfers", "exogenous", "retarded", "horizon", "step", "method"},
                   "world config");
    if (!j.contains("economies") || !j.at("economies").is_array() || j.at("economies").empty()) {
        throw ValidationError("world config needs a non-empty 'economies' list");
    }
    WorldConfig c;
    for (const auto& e : j.at("economies")) {
        auto allowed = kModelKeys;
        allowed.insert("name");
        reject_unknown(e, allowed, "economy");
        json model = e;
        std::string name = "economy" + std::to_string(c.names.size() + 1);
        if (e.contains("name")) {
            if (!e.at("name").is_string()) throw ValidationError("economy 'name' must be a string");
            name = e.at("name").get<std::string>();
            model.erase("name");
        }
        c.names.push_back(name);
        c.world.economies.push_back(model_from(model));
    }
    auto index_of = [&](const json& ref) -> std::size_t {
        if (ref.is_number_unsigned() || ref.is_number_integer()) {
            const auto i = ref.get<long>();
            if (i < 0 || static_cast<std::size_t>(i) >= c.names.size()) {
                throw ValidationError("economy index " + std::to_string(i) + " out of range");
            }
            return static_cast<std::size_t>(i);
        }
        if (ref.is_string()) {
            const auto it = std::find(c.names.begin(), c.names.end(), ref.get<std::string>());
            if (it == c.names.end()) throw ValidationError("unknown economy '" + ref.get<std::string>() + "'");
            return static_cast<std::size_t>(it - c.names.begin());
        }
        throw ValidationError("economy reference must be an index or a name");
    };
    if (j.contains("transfers")) {
        for (const auto& t : j.at("transfers")) {
            reject_unknown(t, {"from", "to", "kind", "rate", "gdp_share"}, "transfer");
            for (const char* key : {"from", "to", "kind", "rate"}) {
                if (!t.contains(key)) throw ValidationError(std::string("transfer is missing '") + key + "'");
            }
            Transfer tr;
            tr.from = index_of(t.at("from"));
            tr.to = index_of(t.at("to"));
            tr.kind = parse_kind(t.at("kind"));
            tr.rate = parse_rate(t.at("rate"), "rate");
            if (t.contains("gdp_share")) tr.gdp_share = t.at("gdp_share").get<bool>();
            c.world.transfers.push_back(std::move(tr));
        }
    }
    if (j.contains("exogenous")) {
        for (const auto& x : j.at("exogenous")) {
            reject_unknown(x, {"economy", "kind", "rate"}, "exogenous flow");
            for (const char* key : {"economy", "kind", "rate"}) {
                if (!x.contains(key)) throw ValidationError(std::string("exogenous flow is missing '") + key + "'");
            }
            c.world.exogenous.push_back({index_of(x.at("economy")), parse_kind(x.at("kind")),
                                         parse_rate(x.at("rate"), "rate")});
        }
    }
    if (j.contains("retarded")) c.world.retarded = j.at("retarded").get<bool>();
    if (j.contains("horizon")) c.horizon = integer(j.at("horizon"), "horizon");
    if (j.contains("step")) c.step = number(j.at("step"), "step");
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    try {
        validate(c.world);
    } catch (const ParameterError& e) {
        throw ValidationError(e.what());
    }
    return c;
}

ModelParams parse_model_params(std::string_view text) {
    try {
        return parse_model_params_impl(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
}

SimulationConfig parse_simulation_config(std::string_view text) {
    try {
        return parse_simulation_config_impl(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
}

WorldConfig parse_world_config(std::string_view text) {
    try {
        return parse_world_config_impl(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
}

} // namespace macrofield
