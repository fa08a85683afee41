#include "agg/grid.hpp"

#include "agg/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace agg {

bool is_valid_grid(int dimension, int points_per_axis, double box_length) {
    if (dimension != 2 && dimension != 3) return false;
    if (points_per_axis < 8) return false;
    if ((points_per_axis & (points_per_axis - 1)) != 0) return false;
    return std::isfinite(box_length) && box_length > 0.0;
}

Grid::Grid(int dimension, int points_per_axis, double box_length)
    : dim_(dimension), n_(points_per_axis), length_(box_length) {
    if (!is_valid_grid(dimension, points_per_axis, box_length)) {
        throw InvalidArgument("invalid grid: d=" + std::to_string(dimension) +
                              " n=" + std::to_string(points_per_axis) +
                              " L=" + std::to_string(box_length));
    }
    size_ = 1;
    for (int a = 0; a < dim_; ++a) size_ *= n_;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::box_volume() const { return std::pow(length_, dim_); }

std::array<int, 3> Grid::unravel(Eigen::Index flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return idx;
}

Eigen::Index Grid::ravel(const std::array<int, 3>& idx) const {
    Eigen::Index flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * n_ + idx[a];
    return flat;
}

double Grid::physical_wavenumber(int k) const {
    return 2.0 * std::numbers::pi * k / length_;
}

Eigen::MatrixXd Grid::node_coordinates() const {
    Eigen::MatrixXd x(dim_, size_);
    const double h = spacing();
    for (Eigen::Index p = 0; p < size_; ++p) {
        const auto idx = unravel(p);
        for (int a = 0; a < dim_; ++a) x(a, p) = idx[a] * h;
    }
    return x;
}

ScalarField::ScalarField(const Grid& g, double t)
    : grid(g), values(Eigen::ArrayXd::Zero(g.size())), time(t) {}

ScalarField::ScalarField(const Grid& g, Eigen::ArrayXd v, double t)
    : grid(g), values(std::move(v)), time(t) {
    validate();
}

void ScalarField::validate() const {
    if (values.size() != grid.size()) {
        throw InvalidArgument("scalar field has " + std::to_string(values.size()) +
                              " values, grid needs " + std::to_string(grid.size()));
    }
    if (!values.isFinite().all()) throw InvalidArgument("scalar field has non-finite values");
}

VectorField::VectorField(const Grid& g, double t)
    : grid(g), components(Eigen::ArrayXXd::Zero(g.size(), g.dimension())), time(t) {}

VectorField::VectorField(const Grid& g, Eigen::ArrayXXd c, double t)
    : grid(g), components(std::move(c)), time(t) {
    validate();
}

Eigen::ArrayXd VectorField::magnitude() const { return components.square().rowwise().sum().sqrt(); }

double VectorField::max_magnitude() const {
    return components.size() == 0 ? 0.0 : magnitude().maxCoeff();
}

void VectorField::validate() const {
    if (components.cols() != grid.dimension()) {
        throw InvalidArgument("vector field component count does not match grid dimension");
    }
    if (components.rows() != grid.size()) {
        throw InvalidArgument("vector field component length does not match grid size");
    }
    if (!components.isFinite().all()) throw InvalidArgument("vector field has non-finite values");
}

SpectralField::SpectralField(const Grid& g)
    : grid(g), coefficients(Eigen::ArrayXcd::Zero(g.size())) {}

SpectralField::SpectralField(const Grid& g, Eigen::ArrayXcd c) : grid(g), coefficients(std::move(c)) {
    if (coefficients.size() != grid.size()) {
        throw InvalidArgument("spectral field size does not match grid");
    }
}

}  // namespace agg
