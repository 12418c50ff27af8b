#include "irrsde/parallel.hpp"

namespace irrsde {

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double column_sum(const PathTable& table, std::size_t column, std::size_t chunk_size) {
    return column_sum(table, column, chunk_size, [](double v) { return v; });
}

}  // namespace irrsde
