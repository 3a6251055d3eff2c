#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "seqlearn/policy.hpp"
#include "seqlearn/rng.hpp"

using namespace seqlearn;

TEST_CASE("disclose examples") {
    CHECK(disclose(FullDisclosure{}, 0.73, 1, std::nullopt, 0.5) == 0.73);
    CHECK(disclose(NoDisclosure{}, 0.73, 1, std::nullopt, 0.5) == 0.5);

    StochasticDisclosure st;
    st.schedule = {0.3};
    CHECK(disclose(st, 0.73, 1, std::nullopt, 0.9) == 0.5);
    CHECK(disclose(st, 0.73, 1, std::nullopt, 0.1) == 0.73);

    const BinarySplitDisclosure bs{0.4, 0.9};
    CHECK(disclose(bs, 0.65, 1, std::nullopt, 0.4) == 0.9);
    CHECK(disclose(bs, 0.65, 1, std::nullopt, 0.6) == 0.4);
    CHECK(disclose(bs, 0.2, 1, std::nullopt, 0.5) == 0.2);  // outside band

    CHECK_THROWS_AS(disclose(LastKDisclosure{1}, 0.5, 1, std::nullopt, 0.5),
                    std::logic_error);
    CHECK(disclose(LastKDisclosure{1}, 0.5, 1, 0.75, 0.5) == 0.75);
}

TEST_CASE("disclosure branch enumeration is mean preserving") {
    StochasticDisclosure st;
    st.schedule = {0.3};
    const BinarySplitDisclosure bs{0.4, 0.9};
    const std::vector<DisclosurePolicy> policies = {FullDisclosure{},
                                                    NoDisclosure{}, st, bs};
    for (const auto& policy : policies) {
        for (double pi : {0.2, 0.5, 0.65, 0.73, 0.9}) {
            const auto branches = disclosure_branches(policy, pi, 1);
            double total = 0.0;
            double mean = 0.0;
            for (const auto& b : branches) {
                CHECK(b.weight > 0.0);
                total += b.weight;
                mean += b.weight * b.nu;
            }
            CHECK(total == Catch::Approx(1.0).margin(1e-12));
            const bool contracting =
                std::holds_alternative<FullDisclosure>(policy) ||
                std::holds_alternative<BinarySplitDisclosure>(policy);
            // Only garblings that keep E[nu] = pi by construction; the lamb
            // and no-disclosure branches are contractions toward 1/2 instead.
            if (contracting) {
                CHECK(mean == Catch::Approx(pi).margin(1e-12));
            }
            // LLR-coordinate enumeration agrees with the probability one.
            const double pi_llr = std::log(pi / (1.0 - pi));
            const auto branches_llr =
                disclosure_branches_llr(policy, pi, pi_llr, 1);
            REQUIRE(branches_llr.size() == branches.size());
            for (std::size_t i = 0; i < branches.size(); ++i) {
                CHECK(branches_llr[i].weight ==
                      Catch::Approx(branches[i].weight).margin(1e-15));
                const double nu = 1.0 / (1.0 + std::exp(-branches_llr[i].nu_llr));
                CHECK(nu == Catch::Approx(branches[i].nu).margin(1e-12));
            }
        }
    }
}

TEST_CASE("sampled disclosure mean preservation") {
    StochasticDisclosure st;
    st.schedule = {0.3};
    const BinarySplitDisclosure bs{0.4, 0.9};
    struct Case {
        DisclosurePolicy policy;
        double pi;
        double target;
    };
    // The stochastic lamb branch contracts toward 1/2; at pi the expectation
    // is eps*pi + (1-eps)*0.5.
    const std::vector<Case> cases = {
        {bs, 0.65, 0.65},
        {bs, 0.5, 0.5},
        {st, 0.73, 0.3 * 0.73 + 0.7 * 0.5},
    };
    for (const auto& c : cases) {
        SplitStream stream(23, 0);
        const std::size_t n = 100000;
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double nu = disclose(c.policy, c.pi, 1, std::nullopt,
                                       stream.next_uniform());
            sum += nu;
            sumsq += nu * nu;
        }
        const double mean = sum / static_cast<double>(n);
        const double var =
            (sumsq / static_cast<double>(n) - mean * mean) /
            static_cast<double>(n);
        const double se = std::sqrt(std::max(var, 1e-30));
        CHECK(std::abs(mean - c.target) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("stochastic disclosure schedules and pi bands") {
    StochasticDisclosure st;
    st.schedule = {1.0, 0.0};
    CHECK(disclose(st, 0.7, 1, std::nullopt, 0.99) == 0.7);  // eps = 1
    CHECK(disclose(st, 0.7, 2, std::nullopt, 0.01) == 0.5);  // eps = 0
    CHECK(disclose(st, 0.7, 9, std::nullopt, 0.01) == 0.5);  // last repeats

    StochasticDisclosure banded;
    banded.schedule = {0.5};
    banded.pi_bands = {{0.0, 0.5, 0.0}, {0.5, 1.0, 1.0}};
    CHECK(disclose(banded, 0.3, 1, std::nullopt, 0.01) == 0.5);
    CHECK(disclose(banded, 0.8, 1, std::nullopt, 0.99) == 0.8);
}

TEST_CASE("transfer schemes") {
    CHECK(transfer(ZeroTransfers{}, 0.8, 1) == 0.0);
    const ConstantContrarian cc{0.3};
    CHECK(transfer(cc, 0.8, 1) == -0.3);
    CHECK(transfer(cc, 0.2, 1) == 0.3);
    CHECK(transfer(cc, 0.5, 1) == 0.0);

    TransferTable table;
    table.bands = {{0.0, 0.5, 0.2}, {0.5, 1.0, -0.2}};
    CHECK(transfer(table, 0.25, 1) == 0.2);
    CHECK(transfer(table, 0.75, 1) == -0.2);

    TransferTable narrow;
    narrow.bands = {{0.4, 0.6, 0.1}};
    CHECK_THROWS_AS(transfer(narrow, 0.9, 1), std::invalid_argument);

    TransferSchedule sched;
    sched.per_period = {table, narrow};
    CHECK(transfer(sched, 0.25, 1) == 0.2);
    CHECK(transfer(sched, 0.5, 2) == 0.1);
    CHECK(transfer(sched, 0.5, 7) == 0.1);  // last table repeats
}

TEST_CASE("policy validation") {
    CHECK_THROWS_AS(validate(DisclosurePolicy{LastKDisclosure{0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(DisclosurePolicy{LastKDisclosure{13}}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(DisclosurePolicy{LastKDisclosure{12}}));
    CHECK_THROWS_AS(validate(DisclosurePolicy{StochasticDisclosure{}}),
                    std::invalid_argument);
    StochasticDisclosure bad_eps;
    bad_eps.schedule = {1.5};
    CHECK_THROWS_AS(validate(DisclosurePolicy{bad_eps}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        validate(DisclosurePolicy{BinarySplitDisclosure{0.7, 0.3}}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        validate(DisclosurePolicy{BinarySplitDisclosure{0.0, 0.5}}),
        std::invalid_argument);

    CHECK_THROWS_AS(validate(TransferScheme{ConstantContrarian{1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(TransferScheme{ConstantContrarian{-0.1}}),
                    std::invalid_argument);
    TransferTable bad_table;
    bad_table.bands = {{0.0, 1.0, 1.2}};
    CHECK_THROWS_AS(validate(TransferScheme{bad_table}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(TransferScheme{TransferSchedule{}}),
                    std::invalid_argument);
}

TEST_CASE("dictated cutoff schedule") {
    DictatedCutoffSchedule sched;
    sched.prefix = {0.3, 0.7};
    sched.tail = 0.5;
    CHECK(sched.at(1) == 0.3);
    CHECK(sched.at(2) == 0.7);
    CHECK(sched.at(3) == 0.5);
    CHECK(sched.at(100) == 0.5);

    DictatedCutoffSchedule bad;
    bad.prefix = {1.0};
    CHECK_THROWS_AS(bad.at(1), std::invalid_argument);
}
