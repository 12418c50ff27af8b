#include "irrsde/brownian.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace irrsde {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ typedef unsigned __int128 uint128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) noexcept {
    const uint128 p = static_cast<uint128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

constexpr std::uint64_t kMaxSteps = std::uint64_t{1} << 31;

IncrementArray halve(const IncrementArray& in) {
    IncrementArray out;
    if (in.level > 0) {
        out.level = in.level - 1;
        out.base_steps = in.base_steps;
    } else {
        out.level = 0;
        out.base_steps = in.base_steps / 2;
    }
    out.horizon = in.horizon;
    out.values.resize(in.values.size() / 2);
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = in.values[2 * j] + in.values[2 * j + 1];
    return out;
}

}  // namespace

Philox4x64::Counter Philox4x64::apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

double bits_to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double inverse_normal_cdf(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal quantile requires u in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double increment_at(const PathKey& key, std::size_t j, double step_size) {
    const auto block = Philox4x64::apply({static_cast<std::uint64_t>(j / 4), 0, 0, 0},
                                         {key.master_seed, key.path_index});
    return inverse_normal_cdf(bits_to_open_unit(block[j % 4])) * std::sqrt(step_size);
}

IncrementArray generate_increments(const PathKey& key, unsigned finest_level, std::size_t base_steps, double T) {
    if (base_steps == 0) throw std::invalid_argument("base_steps must be at least 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon must be positive");
    if (finest_level > 31 || base_steps > (kMaxSteps >> finest_level)) {
        throw std::length_error("step count exceeds 2^31");
    }
    const std::size_t n = base_steps << finest_level;
    IncrementArray out;
    out.level = finest_level;
    out.base_steps = base_steps;
    out.horizon = T;
    out.values.resize(n);
    const double scale = std::sqrt(T / static_cast<double>(n));
    for (std::size_t block = 0; 4 * block < n; ++block) {
        const auto bits = Philox4x64::apply({block, 0, 0, 0}, {key.master_seed, key.path_index});
        for (std::size_t lane = 0; lane < 4 && 4 * block + lane < n; ++lane) {
            out.values[4 * block + lane] = inverse_normal_cdf(bits_to_open_unit(bits[lane])) * scale;
        }
    }
    return out;
}

IncrementArray coarsen(const IncrementArray& fine, std::size_t factor) {
    if (factor == 0 || !std::has_single_bit(factor)) {
        throw std::invalid_argument("coarsening factor must be a power of two");
    }
    if (fine.values.size() % factor != 0) throw std::invalid_argument("coarsening factor does not divide the grid");
    const auto halvings = static_cast<unsigned>(std::countr_zero(factor));
    IncrementArray out = fine;
    for (unsigned i = 0; i < halvings; ++i) out = halve(out);
    return out;
}

std::vector<IncrementArray> coarsening_hierarchy(const IncrementArray& fine, unsigned coarsest_level) {
    if (coarsest_level > fine.level) throw std::invalid_argument("coarsest level above the fine level");
    std::vector<IncrementArray> out;
    out.reserve(fine.level - coarsest_level + 1);
    out.push_back(fine);
    while (out.back().level > coarsest_level) out.push_back(halve(out.back()));
    return out;
}

}  // namespace irrsde
