#pragma once

// Flat key-value scenario files:
//
//   # comment
//   n_elements   = 30
//   quant_bits   = 3          # or: inf
//   gamma_srd_db = 20
//   gamma_sre_db = 0
//   gamma_se_db  = -5
//   c_th_nats    = 0.05       # or c_th_bits (multiplied by ln 2)
//
// Instead of the three gamma_*_db keys a geometry may be given through
// d_sr, d_rd, d_re, d_se, path_loss_exponent, eta and tx_snr_db. When both
// are present the direct SNR keys win and a warning is recorded.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rissop/channel.hpp"

namespace rissop {

struct Scenario {
    SystemConfig config;
    std::optional<GeometryConfig> geometry;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view text, const std::string& field)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError(field, "expected a finite number, got '" + std::string(text) + "'");
    }
    return value;
}

inline int parse_int(std::string_view text, const std::string& field)
{
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(field, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

inline const std::vector<std::string_view>& scenario_keys()
{
    static const std::vector<std::string_view> keys = {
        "n_elements", "quant_bits", "gamma_srd_db", "gamma_sre_db",       "gamma_se_db", "c_th_nats", "c_th_bits",
        "d_sr",       "d_rd",       "d_re",         "d_se", "path_loss_exponent", "eta",         "tx_snr_db"};
    return keys;
}

} // namespace detail

inline Scenario parse_scenario(std::istream& in)
{
    std::map<std::string, std::string, std::less<>> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const auto key = std::string(detail::trim(view.substr(0, eq)));
        const auto value = std::string(detail::trim(view.substr(eq + 1)));
        const auto& known = detail::scenario_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key, "unknown key");
        }
        if (value.empty()) throw ConfigError(key, "missing value");
        if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicate key");
    }

    auto get = [&](std::string_view key) -> std::optional<std::string> {
        if (auto it = kv.find(key); it != kv.end()) return it->second;
        return std::nullopt;
    };

    Scenario sc;
    auto& cfg = sc.config;
    const auto n = get("n_elements");
    if (!n) throw ConfigError("n_elements", "required key missing");
    cfg.n_elements = detail::parse_int(*n, "n_elements");
    const auto b = get("quant_bits");
    if (!b) throw ConfigError("quant_bits", "required key missing");
    cfg.quant_bits = QuantBits::parse(*b);

    const auto nats = get("c_th_nats");
    const auto bits = get("c_th_bits");
    if (nats && bits) throw ConfigError("c_th_bits", "give either c_th_nats or c_th_bits, not both");
    if (!nats && !bits) throw ConfigError("c_th_nats", "required key missing");
    cfg.c_th = nats ? detail::parse_real(*nats, "c_th_nats")
                    : detail::parse_real(*bits, "c_th_bits") * std::numbers::ln2;

    const bool any_geometry = get("d_sr") || get("d_rd") || get("d_re") || get("d_se") ||
                              get("path_loss_exponent") || get("eta") || get("tx_snr_db");
    std::optional<AverageSnrs> from_geometry;
    if (any_geometry) {
        GeometryConfig geo;
        auto required = [&](const char* key) {
            const auto v = get(key);
            if (!v) throw ConfigError(key, "required geometry key missing");
            return detail::parse_real(*v, key);
        };
        geo.d_sr = required("d_sr");
        geo.d_rd = required("d_rd");
        geo.d_re = required("d_re");
        geo.d_se = required("d_se");
        geo.upsilon = required("path_loss_exponent");
        geo.tx_snr = db_to_linear(required("tx_snr_db"));
        if (const auto eta = get("eta")) geo.eta = detail::parse_real(*eta, "eta");
        from_geometry = snrs_from_geometry(geo);
        sc.geometry = geo;
    }

    auto snr = [&](const char* key, double AverageSnrs::*member) {
        if (const auto v = get(key)) {
            if (from_geometry) {
                sc.warnings.push_back(std::string(key) + " given directly; overrides the geometry-derived value");
            }
            return db_to_linear(detail::parse_real(*v, key));
        }
        if (from_geometry) return (*from_geometry).*member;
        throw ConfigError(key, "required key missing (or give a geometry)");
    };
    cfg.gamma_srd_bar = snr("gamma_srd_db", &AverageSnrs::gamma_srd_bar);
    cfg.gamma_sre_bar = snr("gamma_sre_db", &AverageSnrs::gamma_sre_bar);
    cfg.gamma_se_bar = snr("gamma_se_db", &AverageSnrs::gamma_se_bar);

    cfg.validate();
    return sc;
}

inline Scenario parse_scenario_text(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_scenario(in);
}

inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_scenario(in);
}

} // namespace rissop
