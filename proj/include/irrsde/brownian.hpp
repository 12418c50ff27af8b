#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace irrsde {

/// Identifies one Brownian path. All increments at every level are a pure
/// function of the key.
struct PathKey {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

/// Philox-4x64-10 counter-based generator (Salmon et al., Random123).
class Philox4x64 {
public:
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static Counter apply(Counter ctr, Key key) noexcept;
};

/// Uniform in the open interval (0, 1) from the top 52 bits.
double bits_to_open_unit(std::uint64_t bits) noexcept;

/// Standard normal quantile.
double inverse_normal_cdf(double u);

/// Brownian increments on an equidistant grid of base_steps * 2^level steps over [0, T].
struct IncrementArray {
    unsigned level = 0;
    std::size_t base_steps = 1;
    double horizon = 1.0;
    std::vector<double> values;

    std::size_t steps() const noexcept { return values.size(); }
    double step_size() const noexcept { return horizon / static_cast<double>(values.size()); }
};

/// Counter-mode stream: increment j is Phi^{-1}(u_j) * sqrt(T/N). Throws
/// std::length_error if base_steps * 2^finest_level exceeds 2^31 and
/// std::invalid_argument for base_steps == 0 or T <= 0.
IncrementArray generate_increments(const PathKey& key, unsigned finest_level, std::size_t base_steps, double T);

/// Single increment j of the same stream, without generating its predecessors.
double increment_at(const PathKey& key, std::size_t j, double step_size);

/// Sums consecutive blocks of `factor` increments. factor must be a power of
/// two dividing the length (std::invalid_argument otherwise). Summation is a
/// sequence of pairwise halvings, so coarsening by 2 twice equals coarsening
/// by 4 bit for bit.
IncrementArray coarsen(const IncrementArray& fine, std::size_t factor);

/// All levels from fine.level down to coarsest_level, finest first.
std::vector<IncrementArray> coarsening_hierarchy(const IncrementArray& fine, unsigned coarsest_level);

}  // namespace irrsde
