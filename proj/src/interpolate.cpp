#include "agg/interpolate.hpp"

#include "agg/error.hpp"

#include <cmath>

namespace agg {
namespace {

struct AxisStencil {
    std::array<int, 4> index;
    std::array<double, 4> weight;
};

AxisStencil axis_stencil(double x, double h, int n) {
    const double s = x / h;
    int cell = static_cast<int>(std::floor(s));
    double t = s - cell;
    if (t >= 1.0) {  // rounding at the far edge
        t -= 1.0;
        ++cell;
    }
    AxisStencil st;
    for (int q = 0; q < 4; ++q) {
        int idx = (cell - 1 + q) % n;
        if (idx < 0) idx += n;
        st.index[q] = idx;
    }
    const double tm1 = t - 1.0;
    const double tm2 = t - 2.0;
    const double tp1 = t + 1.0;
    st.weight[0] = -t * tm1 * tm2 / 6.0;
    st.weight[1] = tp1 * tm1 * tm2 / 2.0;
    st.weight[2] = -tp1 * t * tm2 / 2.0;
    st.weight[3] = tp1 * t * tm1 / 6.0;
    return st;
}

}  // namespace

double wrap_coordinate(double x, double length) {
    double w = std::fmod(x, length);
    if (w < 0.0) w += length;
    if (w >= length) w -= length;
    return w;
}

Eigen::ArrayXXd interpolate_columns(const Grid& grid, const Eigen::Ref<const Eigen::ArrayXXd>& samples,
                                    const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const int d = grid.dimension();
    const int n = grid.points_per_axis();
    const double h = grid.spacing();
    const double length = grid.box_length();
    if (points.rows() != d) throw InvalidArgument("interpolation points must have d rows");
    if (samples.rows() != grid.size()) throw InvalidArgument("sample arrays do not match grid");

    const Eigen::Index m = points.cols();
    const Eigen::Index cols = samples.cols();
    Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(m, cols);
    const Eigen::Index stride0 = (d == 3) ? static_cast<Eigen::Index>(n) * n : n;

    for (Eigen::Index p = 0; p < m; ++p) {
        std::array<AxisStencil, 3> st;
        for (int a = 0; a < d; ++a) st[a] = axis_stencil(wrap_coordinate(points(a, p), length), h, n);
        if (d == 2) {
            for (int q0 = 0; q0 < 4; ++q0) {
                const Eigen::Index row = st[0].index[q0] * stride0;
                for (int q1 = 0; q1 < 4; ++q1) {
                    const double w = st[0].weight[q0] * st[1].weight[q1];
                    const Eigen::Index flat = row + st[1].index[q1];
                    for (Eigen::Index c = 0; c < cols; ++c) out(p, c) += w * samples(flat, c);
                }
            }
        } else {
            for (int q0 = 0; q0 < 4; ++q0) {
                for (int q1 = 0; q1 < 4; ++q1) {
                    const double w01 = st[0].weight[q0] * st[1].weight[q1];
                    const Eigen::Index row = st[0].index[q0] * stride0 + st[1].index[q1] * n;
                    for (int q2 = 0; q2 < 4; ++q2) {
                        const double w = w01 * st[2].weight[q2];
                        const Eigen::Index flat = row + st[2].index[q2];
                        for (Eigen::Index c = 0; c < cols; ++c) out(p, c) += w * samples(flat, c);
                    }
                }
            }
        }
    }
    return out;
}

Eigen::ArrayXd interpolate(const ScalarField& f, const Eigen::Ref<const Eigen::MatrixXd>& points) {
    return interpolate_columns(f.grid, f.values, points).col(0);
}

Eigen::ArrayXXd interpolate(const VectorField& v, const Eigen::Ref<const Eigen::MatrixXd>& points) {
    return interpolate_columns(v.grid, v.components, points);
}

}  // namespace agg
