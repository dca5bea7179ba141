#include "vbwave/banded_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vbwave/error.hpp"

namespace vbwave {

BandedMatrix::BandedMatrix(int dim, int bandwidth)
    : n_(dim), bw_(bandwidth), data_(static_cast<std::size_t>(dim) * (2 * bandwidth + 1), 0.0) {
    if (dim < 1 || bandwidth < 0) {
        throw InvalidArgument("BandedMatrix: invalid shape");
    }
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    if (factored_) {
        throw InvalidArgument("BandedMatrix::multiply on a factored matrix");
    }
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - bw_);
        const int j1 = std::min(n_ - 1, i + bw_);
        double s = 0.0;
        for (int j = j0; j <= j1; ++j) {
            s += data_[index(i, j)] * x[j];
        }
        y[i] = s;
    }
    return y;
}

double BandedMatrix::asymmetry() const {
    double amax = 0.0;
    double dmax = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j) {
            amax = std::max(amax, std::abs((*this)(i, j)));
            dmax = std::max(dmax, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return amax > 0.0 ? dmax / amax : 0.0;
}

BandedMatrix BandedMatrix::block(int lo, int hi) const {
    BandedMatrix out(hi - lo, bw_);
    for (int i = lo; i < hi; ++i) {
        for (int j = std::max(lo, i - bw_); j <= std::min(hi - 1, i + bw_); ++j) {
            out.set(i - lo, j - lo, (*this)(i, j));
        }
    }
    return out;
}

void BandedMatrix::factor() {
    if (factored_) {
        return;
    }
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_; ++k) {
        const double pivot = data_[index(k, k)];
        if (!(pivot > 0.0)) {
            throw PivotError("banded LU: non-positive pivot " + std::to_string(pivot) + " at row " +
                                 std::to_string(k) + " (form not positive definite)",
                             k, pivot);
        }
        min_pivot_ = std::min(min_pivot_, pivot);
        const int iend = std::min(n_ - 1, k + bw_);
        for (int i = k + 1; i <= iend; ++i) {
            const double l = data_[index(i, k)] / pivot;
            data_[index(i, k)] = l;
            if (l == 0.0) {
                continue;
            }
            for (int j = k + 1; j <= iend; ++j) {
                data_[index(i, j)] -= l * data_[index(k, j)];
            }
        }
    }
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

void BandedMatrix::solve_in_place(std::span<double> x) const {
    if (!factored_) {
        throw InvalidArgument("BandedMatrix::solve before factor()");
    }
    if (static_cast<int>(x.size()) != n_) {
        throw InvalidArgument("BandedMatrix::solve: rhs has wrong length");
    }
    for (int i = 1; i < n_; ++i) {
        double s = x[i];
        for (int j = std::max(0, i - bw_); j < i; ++j) {
            s -= data_[index(i, j)] * x[j];
        }
        x[i] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j <= std::min(n_ - 1, i + bw_); ++j) {
            s -= data_[index(i, j)] * x[j];
        }
        x[i] = s / data_[index(i, i)];
    }
}

}  // namespace vbwave
