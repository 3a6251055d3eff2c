#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "seqlearn/policy.hpp"
#include "seqlearn/signal_model.hpp"

namespace seqlearn {

struct DistributionConfig {
    std::string family = "power";
    double alpha = 1.0;
};

enum class EngineKind { Mc, Exact };

struct EngineConfig {
    EngineKind kind = EngineKind::Exact;
    std::size_t horizon = 1000;       // T
    std::size_t replications = 1000;  // R (mc only)
    std::size_t grid_bins = 4096;     // B (exact only)
    double llr_clamp = 40.0;          // L
};

struct ExperimentConfig {
    DistributionConfig distribution;
    DisclosurePolicy disclosure = FullDisclosure{};
    TransferScheme transfers = ZeroTransfers{};
    std::optional<DictatedCutoffSchedule> dictated_cutoffs;
    EngineConfig engine;
    std::uint64_t seed = 1;
    std::string output = "results";
};

inline void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("config." + key + ": " + why);
    };
    if (cfg.distribution.family != "power") {
        fail("distribution.family", "unknown family '" +
                                        cfg.distribution.family + "'");
    }
    if (!(cfg.distribution.alpha > 0.0)) {
        fail("distribution.alpha", "must be positive");
    }
    if (cfg.engine.horizon < 1) fail("engine.horizon", "must be >= 1");
    if (cfg.engine.kind == EngineKind::Mc && cfg.engine.replications < 1) {
        fail("engine.replications", "must be >= 1 for the mc engine");
    }
    const std::size_t b = cfg.engine.grid_bins;
    if (b < 256 || (b & (b - 1)) != 0) {
        fail("engine.grid_bins", "must be a power of two >= 256");
    }
    if (!(cfg.engine.llr_clamp >= 10.0 && cfg.engine.llr_clamp <= 80.0)) {
        fail("engine.llr_clamp", "must lie in [10, 80]");
    }
    validate(cfg.disclosure);
    validate(cfg.transfers);
    if (cfg.dictated_cutoffs) {
        for (std::size_t t = 1; t <= cfg.dictated_cutoffs->prefix.size() + 1;
             ++t) {
            cfg.dictated_cutoffs->at(t);  // throws on non-interior cutoffs
        }
    }
}

// --------------------------- JSON serialization ----------------------------

namespace detail {
using nlohmann::json;

inline json to_json(const DisclosurePolicy& policy) {
    json j;
    if (std::holds_alternative<FullDisclosure>(policy)) {
        j["kind"] = "full";
    } else if (std::holds_alternative<NoDisclosure>(policy)) {
        j["kind"] = "no_disclosure";
    } else if (const auto* lk = std::get_if<LastKDisclosure>(&policy)) {
        j["kind"] = "last_k";
        j["k"] = lk->k;
    } else if (const auto* st = std::get_if<StochasticDisclosure>(&policy)) {
        j["kind"] = "stochastic";
        j["epsilon"] = st->schedule;
        if (!st->pi_bands.empty()) {
            json bands = json::array();
            for (const auto& b : st->pi_bands) {
                bands.push_back({{"lo", b.lo}, {"hi", b.hi}, {"eps", b.eps}});
            }
            j["pi_bands"] = bands;
        }
    } else if (const auto* bs = std::get_if<BinarySplitDisclosure>(&policy)) {
        j["kind"] = "binary_split";
        j["lo"] = bs->lo;
        j["hi"] = bs->hi;
    }
    return j;
}

inline DisclosurePolicy disclosure_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "full") return FullDisclosure{};
    if (kind == "no_disclosure") return NoDisclosure{};
    if (kind == "last_k") {
        return LastKDisclosure{j.at("k").get<int>()};
    }
    if (kind == "stochastic") {
        StochasticDisclosure st;
        st.schedule = j.at("epsilon").get<std::vector<double>>();
        if (j.contains("pi_bands")) {
            for (const auto& b : j.at("pi_bands")) {
                st.pi_bands.push_back({b.at("lo").get<double>(),
                                       b.at("hi").get<double>(),
                                       b.at("eps").get<double>()});
            }
        }
        return st;
    }
    if (kind == "binary_split") {
        return BinarySplitDisclosure{j.at("lo").get<double>(),
                                     j.at("hi").get<double>()};
    }
    throw std::invalid_argument("config.disclosure.kind: unknown kind '" +
                                kind + "'");
}

inline json to_json(const TransferScheme& scheme) {
    json j;
    auto bands_json = [](const TransferTable& table) {
        json bands = json::array();
        for (const auto& b : table.bands) {
            bands.push_back({{"lo", b.lo}, {"hi", b.hi}, {"tau", b.tau}});
        }
        return bands;
    };
    if (std::holds_alternative<ZeroTransfers>(scheme)) {
        j["kind"] = "zero";
    } else if (const auto* cc = std::get_if<ConstantContrarian>(&scheme)) {
        j["kind"] = "constant_contrarian";
        j["tau"] = cc->tau;
    } else if (const auto* tb = std::get_if<TransferTable>(&scheme)) {
        j["kind"] = "table";
        j["bands"] = bands_json(*tb);
    } else if (const auto* sc = std::get_if<TransferSchedule>(&scheme)) {
        j["kind"] = "schedule";
        json per = json::array();
        for (const auto& table : sc->per_period) per.push_back(bands_json(table));
        j["per_period"] = per;
    }
    return j;
}

inline TransferScheme transfers_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto parse_bands = [](const json& arr) {
        TransferTable table;
        for (const auto& b : arr) {
            table.bands.push_back({b.at("lo").get<double>(),
                                   b.at("hi").get<double>(),
                                   b.at("tau").get<double>()});
        }
        return table;
    };
    if (kind == "zero") return ZeroTransfers{};
    if (kind == "constant_contrarian") {
        return ConstantContrarian{j.at("tau").get<double>()};
    }
    if (kind == "table") return parse_bands(j.at("bands"));
    if (kind == "schedule") {
        TransferSchedule sc;
        for (const auto& table : j.at("per_period")) {
            sc.per_period.push_back(parse_bands(table));
        }
        return sc;
    }
    throw std::invalid_argument("config.transfers.kind: unknown kind '" +
                                kind + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["distribution"] = {{"family", cfg.distribution.family},
                         {"alpha", cfg.distribution.alpha}};
    j["disclosure"] = detail::to_json(cfg.disclosure);
    j["transfers"] = detail::to_json(cfg.transfers);
    if (cfg.dictated_cutoffs) {
        j["dictated_cutoffs"] = {{"prefix", cfg.dictated_cutoffs->prefix},
                                 {"tail", cfg.dictated_cutoffs->tail}};
    }
    j["engine"] = {
        {"kind", cfg.engine.kind == EngineKind::Mc ? "mc" : "exact"},
        {"horizon", cfg.engine.horizon},
        {"replications", cfg.engine.replications},
        {"grid_bins", cfg.engine.grid_bins},
        {"llr_clamp", cfg.engine.llr_clamp}};
    j["seed"] = cfg.seed;
    j["output"] = cfg.output;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& dist = j.at("distribution");
    cfg.distribution.family = dist.at("family").get<std::string>();
    cfg.distribution.alpha = dist.at("alpha").get<double>();
    cfg.disclosure = detail::disclosure_from_json(j.at("disclosure"));
    cfg.transfers = detail::transfers_from_json(j.at("transfers"));
    if (j.contains("dictated_cutoffs") && !j.at("dictated_cutoffs").is_null()) {
        DictatedCutoffSchedule sched;
        sched.prefix =
            j.at("dictated_cutoffs").at("prefix").get<std::vector<double>>();
        sched.tail = j.at("dictated_cutoffs").at("tail").get<double>();
        cfg.dictated_cutoffs = sched;
    }
    const auto& eng = j.at("engine");
    const std::string kind = eng.at("kind").get<std::string>();
    if (kind == "mc") {
        cfg.engine.kind = EngineKind::Mc;
    } else if (kind == "exact") {
        cfg.engine.kind = EngineKind::Exact;
    } else {
        throw std::invalid_argument("config.engine.kind: unknown kind '" +
                                    kind + "'");
    }
    cfg.engine.horizon = eng.at("horizon").get<std::size_t>();
    if (eng.contains("replications")) {
        cfg.engine.replications = eng.at("replications").get<std::size_t>();
    }
    if (eng.contains("grid_bins")) {
        cfg.engine.grid_bins = eng.at("grid_bins").get<std::size_t>();
    }
    if (eng.contains("llr_clamp")) {
        cfg.engine.llr_clamp = eng.at("llr_clamp").get<double>();
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    validate(cfg);
    return cfg;
}

}  // namespace seqlearn
