#pragma once

#include <span>
#include <vector>

namespace vbwave {

/// Square matrix with equal lower/upper bandwidth, stored row-major by band.
/// factor() performs LU without pivoting; the forms assembled here are SPD,
/// so a non-positive pivot is reported as a PivotError instead of permuted.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int dim, int bandwidth);

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] int bandwidth() const noexcept { return bw_; }
    [[nodiscard]] bool factored() const noexcept { return factored_; }

    [[nodiscard]] bool in_band(int i, int j) const noexcept {
        return j - i <= bw_ && i - j <= bw_;
    }
    /// Entry (i, j); zero outside the band. Undefined after factor().
    [[nodiscard]] double operator()(int i, int j) const noexcept {
        return in_band(i, j) ? data_[index(i, j)] : 0.0;
    }
    void add(int i, int j, double v) noexcept { data_[index(i, j)] += v; }
    void set(int i, int j, double v) noexcept { data_[index(i, j)] = v; }

    /// y = A x (unfactored matrices only).
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// Largest |A_ij - A_ji| relative to the largest |A_ij|.
    [[nodiscard]] double asymmetry() const;

    /// Rows/columns [lo, hi) as a new matrix.
    [[nodiscard]] BandedMatrix block(int lo, int hi) const;

    /// In-place LU. Throws PivotError on a pivot <= 0.
    void factor();
    /// Smallest pivot met during factor().
    [[nodiscard]] double min_pivot() const noexcept { return min_pivot_; }

    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;
    void solve_in_place(std::span<double> x) const;

private:
    [[nodiscard]] std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * (2 * bw_ + 1) + static_cast<std::size_t>(j - i + bw_);
    }

    int n_ = 0;
    int bw_ = 0;
    bool factored_ = false;
    double min_pivot_ = 0.0;
    std::vector<double> data_;
};

}  // namespace vbwave
