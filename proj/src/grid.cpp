#include "fractrans/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fractrans {

bool is_transform_friendly(std::size_t n)
{
    if (n == 0) return false;
    for (std::size_t p : {2u, 3u, 5u, 7u})
        while (n % p == 0) n /= p;
    return n == 1;
}

Grid::Grid(double half_length, std::size_t n) : L_(half_length), n_(n)
{
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw std::invalid_argument("grid half-length must be positive and finite");
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("grid size must be an even integer >= 4, got " + std::to_string(n));
    if (!is_transform_friendly(n))
        throw std::invalid_argument("grid size must factor into 2,3,5,7, got " + std::to_string(n));
    h_ = 2.0 * L_ / static_cast<double>(n_);
}

std::vector<double> Grid::points() const
{
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
}

long Grid::mode_index(std::size_t m) const
{
    const long half = static_cast<long>(n_ / 2);
    const long j = static_cast<long>(m);
    return j == half ? -half : j;
}

double Grid::wavenumber(std::size_t m) const
{
    return std::numbers::pi * static_cast<double>(mode_index(m)) / L_;
}

} // namespace fractrans
