#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "sfcmfg/workload.hpp"
#include "test_helpers.hpp"

using namespace sfcmfg;

namespace {

WorkloadConfig desk_config() {
    WorkloadConfig config;
    config.packet_min = 1.0e5;
    config.packet_max = 2.0e6;
    config.arrival_rate = 2.0;
    config.horizon = 10000;
    config.chain_ids = {"SFC-1", "SFC-2", "SFC-3"};
    config.chain_weights = {0.5, 0.3, 0.2};
    config.chain_timeouts_ms = {1000.0, 1000.0, 1000.0};
    config.seed = 1234;
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("generate_requests: zero rate gives an empty list") {
    auto config = desk_config();
    config.arrival_rate = 0.0;
    CHECK(generate_requests(config).empty());
}

TEST_CASE("generate_requests: deterministic under the seed") {
    const auto config = desk_config();
    const auto a = generate_requests(config);
    const auto b = generate_requests(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].user_id == b[i].user_id);
        CHECK(a[i].chain_id == b[i].chain_id);
        CHECK(a[i].packet_size == b[i].packet_size);
        CHECK(a[i].arrival_slot == b[i].arrival_slot);
    }
}

TEST_CASE("generate_requests: empirical rate within 3 sigma of lambda") {
    const auto config = desk_config();
    const auto requests = generate_requests(config);
    const double mean = static_cast<double>(requests.size()) / config.horizon;
    // Mean of horizon Poisson(2) draws: sigma = sqrt(2 / 10^4).
    const double sigma = std::sqrt(config.arrival_rate / config.horizon);
    CHECK(std::abs(mean - config.arrival_rate) < 3.0 * sigma);
}

TEST_CASE("generate_requests: packet sizes stay inside the configured range") {
    const auto config = desk_config();
    for (const auto& r : generate_requests(config)) {
        CHECK(r.packet_size >= config.packet_min);
        CHECK(r.packet_size < config.packet_max);
        CHECK(r.timeout_ms == 1000.0);
    }
}

TEST_CASE("generate_requests: chain frequencies match the weights (chi-squared)") {
    const auto config = desk_config();
    const auto requests = generate_requests(config);
    std::map<std::string, double> counts;
    for (const auto& r : requests) counts[r.chain_id] += 1.0;
    double chi2 = 0.0;
    const double n = static_cast<double>(requests.size());
    for (std::size_t k = 0; k < config.chain_ids.size(); ++k) {
        const double expected = n * config.chain_weights[k];
        const double diff = counts[config.chain_ids[k]] - expected;
        chi2 += diff * diff / expected;
    }
    // 2 degrees of freedom; 0.999 quantile is 13.8.
    CHECK(chi2 < 13.8);
}

TEST_CASE("generate_requests: invalid configs are rejected") {
    auto config = desk_config();
    config.chain_weights = {0.5, 0.3, 0.1};  // sums to 0.9
    CHECK_THROWS_AS(generate_requests(config), ScenarioError);
    config = desk_config();
    config.packet_min = 3.0e6;  // min > max
    CHECK_THROWS_AS(generate_requests(config), ScenarioError);
    config = desk_config();
    config.arrival_rate = -1.0;
    CHECK_THROWS_AS(generate_requests(config), ScenarioError);
}

TEST_CASE("write_requests_csv: byte-identical for the same seed") {
    auto config = desk_config();
    config.horizon = 100;
    const auto dir = std::filesystem::temp_directory_path() / "sfcmfg_wl_test";
    std::filesystem::create_directories(dir);
    const auto path_a = (dir / "a.csv").string();
    const auto path_b = (dir / "b.csv").string();
    write_requests_csv(path_a, generate_requests(config));
    write_requests_csv(path_b, generate_requests(config));
    const std::string a = slurp(path_a);
    CHECK(a == slurp(path_b));
    CHECK(a.rfind("slot,user,chain,bytes,timeout_ms\n", 0) == 0);
}
