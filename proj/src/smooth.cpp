#include "agg/smooth.hpp"

namespace agg {
namespace {

double simpson_fixed(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; ++i) {
        const double v = f(a + i * h);
        (i % 2 ? odd : even) += v;
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, int panels, double tol,
               int max_doublings) {
    if (b <= a) return 0.0;
    double prev = simpson_fixed(f, a, b, panels);
    for (int k = 0; k < max_doublings; ++k) {
        panels *= 2;
        const double next = simpson_fixed(f, a, b, panels);
        if (std::abs(next - prev) < tol) return next;
        prev = next;
    }
    return prev;
}

}  // namespace agg
