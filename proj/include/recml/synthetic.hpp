#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "recml/csv.hpp"
#include "recml/rng.hpp"
#include "recml/schema.hpp"

namespace recml {

/// Configuration for the synthetic survey generator. The real survey data
/// behind the reference results is not distributable, so tests and demos run
/// on seeded synthetic tables with the same 11-column shape.
struct SynthConfig {
    std::size_t n_rows = 1000;
    int n_products = 10;
    double noise = 0.0;  // probability a row's product label is re-rolled uniformly
    std::uint64_t seed = 0;

    void validate() const {
        if (n_rows == 0) throw BadConfig("n_rows must be positive");
        if (n_products < 2) throw BadConfig("need at least 2 products");
        if (!(noise >= 0.0 && noise <= 1.0)) throw BadConfig("noise must be in [0, 1]");
        if (n_rows < 4 * static_cast<std::size_t>(n_products))
            throw BadConfig("n_rows must be at least 4 * n_products");
    }
};

namespace detail {

inline const std::array<const char*, 16>& first_names() {
    static const std::array<const char*, 16> names = {
        "Alex",  "Bella", "Carlos", "Dina",  "Emil",  "Farah", "Grace", "Hassan",
        "Irene", "Jonas", "Keiko",  "Liam",  "Mira",  "Noah",  "Priya", "Tomas"};
    return names;
}

inline const std::array<const char*, 16>& last_names() {
    static const std::array<const char*, 16> names = {
        "Ahmed",  "Brown",  "Chen",   "Diaz",   "Evans",  "Fischer", "Garcia", "Haque",
        "Ivanov", "Jensen", "Khan",   "Lopez",  "Miller", "Novak",   "Okafor", "Patel"};
    return names;
}

inline const std::array<const char*, 8>& streets() {
    static const std::array<const char*, 8> streets = {
        "Maple Street", "Oak Avenue",   "Lake Road",    "Hill Lane",
        "River Drive",  "Park Terrace", "Cedar Court",  "Station Way"};
    return streets;
}

inline const std::array<const char*, 6>& cities() {
    static const std::array<const char*, 6> cities = {"Dhaka",   "Khulna", "Sylhet",
                                                      "Rajshahi", "Bogra",  "Comilla"};
    return cities;
}

inline const std::array<const char*, 3>& email_domains() {
    static const std::array<const char*, 3> domains = {"example.com", "mail.test",
                                                       "shop.example.org"};
    return domains;
}

// Order status pools. Even-indexed products draw from one pool, odd-indexed
// from the other, so status parity identifies the member within a price
// pair. The six statuses interleave once label-encoded, which keeps the
// signal easy for trees and hard for Gaussian or linear models.
inline const std::array<const char*, 3>& even_statuses() {
    static const std::array<const char*, 3> statuses = {"delivered", "processing",
                                                        "shipped"};
    return statuses;
}

inline const std::array<const char*, 3>& odd_statuses() {
    static const std::array<const char*, 3> statuses = {"cancelled", "pending",
                                                        "returned"};
    return statuses;
}

inline const std::array<const char*, 10>& feedback_pool() {
    static const std::array<const char*, 10> messages = {
        "Great product, fast delivery",
        "Packaging was damaged, product fine",
        "Exactly as described",
        "Would buy again",
        "Shipping took too long",
        "Quality is \"okay\" for the price",
        "Five stars, very satisfied",
        "Color differs from the photos",
        "Customer support was helpful, thanks",
        "Stopped working after a week"};
    return messages;
}

inline std::string product_name(int index) { return "MX-" + std::to_string(100 + index); }

inline std::string fixed_decimal(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

/// splitmix64-style seed derivation for independent generator substreams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Seeded synthetic survey table under the default 11-column schema.
///
/// Products come in pairs sharing a disjoint price band (pair p spans
/// 80 * 1.3^p within +-5% jitter); order status parity picks the member
/// within a pair and quantity follows a pair-dependent small-integer
/// distribution. At noise = 0 the product is therefore a deterministic
/// function of (price, status). Identifier columns come from seeded pools
/// and carry no signal. A balanced product pool guarantees every product
/// appears; with probability `noise` a row's recorded product is re-rolled
/// uniformly (label noise).
///
/// Features, cosmetic identifiers and label noise draw from independent
/// substreams of the seed, so tables that differ only in the noise level
/// carry identical feature rows (noise comparisons are paired).
inline RawTable generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng feature_rng(detail::derive_seed(cfg.seed, 0));
    Rng cosmetic_rng(detail::derive_seed(cfg.seed, 1));
    Rng noise_rng(detail::derive_seed(cfg.seed, 2));

    const auto n_products = static_cast<std::size_t>(cfg.n_products);
    std::vector<int> product_pool;
    product_pool.reserve(cfg.n_rows);
    const std::size_t per_product = cfg.n_rows / n_products;
    const std::size_t remainder = cfg.n_rows % n_products;
    for (std::size_t p = 0; p < n_products; ++p) {
        const std::size_t copies = per_product + (p < remainder ? 1 : 0);
        product_pool.insert(product_pool.end(), copies, static_cast<int>(p));
    }
    feature_rng.shuffle(product_pool);

    RawTable table;
    for (const auto& col : Schema::default_survey().columns)
        table.header.push_back(col.name);

    for (std::size_t i = 0; i < cfg.n_rows; ++i) {
        const int product = product_pool[i];
        const int pair = product / 2;

        const int mode = 1 + pair % 4;
        const int quantity =
            std::max(1, mode + static_cast<int>(feature_rng.next_index(3)) - 1);

        const double base = 80.0 * std::pow(1.3, pair);
        const double price = base * (1.0 + (feature_rng.next_real() * 0.1 - 0.05));

        const auto& statuses =
            product % 2 == 0 ? detail::even_statuses() : detail::odd_statuses();
        const char* status = statuses[feature_rng.next_index(statuses.size())];

        Rng& rng = cosmetic_rng;
        const char* first = detail::first_names()[rng.next_index(16)];
        const char* last = detail::last_names()[rng.next_index(16)];
        const std::size_t mail_num = rng.next_index(100);
        const char* domain = detail::email_domains()[rng.next_index(3)];
        std::string email = std::string(first) + "." + last + std::to_string(mail_num) +
                            "@" + domain;
        for (char& c : email) c = static_cast<char>(std::tolower(c));

        std::string address = std::to_string(1 + rng.next_index(200)) + " " +
                              detail::streets()[rng.next_index(8)] + ", " +
                              detail::cities()[rng.next_index(6)];

        std::string phone = "01";
        for (int digit = 0; digit < 9; ++digit)
            phone += static_cast<char>('0' + rng.next_index(10));

        const std::size_t month = 1 + rng.next_index(12);
        const std::size_t day = 1 + rng.next_index(28);
        char date[16];
        std::snprintf(date, sizeof(date), "2023-%02zu-%02zu", month, day);

        const char* feedback = detail::feedback_pool()[rng.next_index(10)];

        // Two noise draws per row regardless of outcome, so different noise
        // levels flip the same rows where their thresholds overlap.
        int label = product;
        if (cfg.noise > 0.0) {
            const bool flip = noise_rng.next_real() < cfg.noise;
            const auto replacement = static_cast<int>(noise_rng.next_index(n_products));
            if (flip) label = replacement;
        }

        table.rows.push_back({
            "C" + std::to_string(100000 + i),           // customer id
            std::string(first) + " " + last,            // name
            email,                                      // email
            detail::product_name(label),                // product model
            std::to_string(quantity),                   // product quantity
            detail::fixed_decimal(price),               // product price
            address,                                    // customer address
            phone,                                      // phone number
            date,                                       // order date
            status,                                     // order status
            feedback,                                   // customer feedback message
        });
    }
    return table;
}

}  // namespace recml
