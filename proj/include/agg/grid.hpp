#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstdint>

namespace agg {

/// Uniform periodic grid on the box [0, L)^d, n points per axis.
///
/// Samples are stored row-major with the last axis fastest. Node (i_0, ..., i_{d-1})
/// sits at x_a = i_a * h. The box center L/2 is a grid node because n is even.
class Grid {
public:
    Grid() = default;
    Grid(int dimension, int points_per_axis, double box_length);

    int dimension() const { return dim_; }
    int points_per_axis() const { return n_; }
    double box_length() const { return length_; }
    double spacing() const { return length_ / n_; }
    double cell_volume() const;
    double center() const { return 0.5 * length_; }
    double box_volume() const;
    Eigen::Index size() const { return size_; }

    /// Multi-index of a flat index; unused trailing entries are zero.
    std::array<int, 3> unravel(Eigen::Index flat) const;
    Eigen::Index ravel(const std::array<int, 3>& idx) const;

    /// Signed integer wavenumber of a storage index along one axis, in [-n/2, n/2).
    int wavenumber(int index) const { return index < n_ / 2 ? index : index - n_; }
    /// Physical wavenumber 2 pi k / L.
    double physical_wavenumber(int k) const;

    /// Coordinates of every node as a d x N matrix.
    Eigen::MatrixXd node_coordinates() const;

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int dim_ = 2;
    int n_ = 8;
    double length_ = 1.0;
    Eigen::Index size_ = 64;
};

/// Real samples of a scalar quantity (density and its differences).
struct ScalarField {
    Grid grid;
    Eigen::ArrayXd values;
    double time = 0.0;

    ScalarField() = default;
    ScalarField(const Grid& g, double t = 0.0);
    ScalarField(const Grid& g, Eigen::ArrayXd v, double t = 0.0);

    /// Throws InvalidArgument on size mismatch or non-finite samples.
    void validate() const;
};

/// d real components stored as the columns of an N x d array.
struct VectorField {
    Grid grid;
    Eigen::ArrayXXd components;
    double time = 0.0;

    VectorField() = default;
    VectorField(const Grid& g, double t = 0.0);
    VectorField(const Grid& g, Eigen::ArrayXXd c, double t = 0.0);

    int dimension() const { return static_cast<int>(components.cols()); }
    auto component(int j) { return components.col(j); }
    auto component(int j) const { return components.col(j); }

    /// Pointwise Euclidean magnitude.
    Eigen::ArrayXd magnitude() const;
    double max_magnitude() const;

    void validate() const;
};

/// Unnormalized DFT coefficients, stored in FFT order (index i <-> wavenumber
/// i for i < n/2 and i - n otherwise).
struct SpectralField {
    Grid grid;
    Eigen::ArrayXcd coefficients;

    SpectralField() = default;
    explicit SpectralField(const Grid& g);
    SpectralField(const Grid& g, Eigen::ArrayXcd c);
};

/// Nodes satisfy n >= 8, n a power of two, d in {2, 3}, L > 0.
bool is_valid_grid(int dimension, int points_per_axis, double box_length);

}  // namespace agg
