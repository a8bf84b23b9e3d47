#pragma once

#include <cstddef>
#include <vector>

namespace fractrans {

// Uniform periodic grid on [-L, L) with N points, x_i = -L + i h.
class Grid {
public:
    Grid(double half_length, std::size_t n);

    double half_length() const { return L_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    double x(std::size_t i) const { return -L_ + static_cast<double>(i) * h_; }
    std::vector<double> points() const;

    // Wavenumber of half-spectrum slot m (0 <= m <= N/2). Slot N/2 is the
    // unpaired Nyquist mode j = -N/2, reported as a negative wavenumber.
    double wavenumber(std::size_t m) const;
    // Signed mode index j for slot m.
    long mode_index(std::size_t m) const;

    bool operator==(const Grid& o) const { return L_ == o.L_ && n_ == o.n_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    Grid refined() const { return Grid(L_, 2 * n_); }

private:
    double L_;
    std::size_t n_;
    double h_;
};

bool is_transform_friendly(std::size_t n);

} // namespace fractrans
