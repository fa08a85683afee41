#include "agg/fft.hpp"

#include "agg/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace agg {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (d, n, sign), in place and unaligned, so any
// Eigen buffer of the right length can be passed to fftw_execute_dft.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(dim, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<int> dims(dim, n);
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
        auto* scratch = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(dim, dims.data(), scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr) throw Error("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(const Grid& grid, Eigen::ArrayXcd& data, int sign) {
    if (data.size() != grid.size()) throw InvalidArgument("FFT buffer size does not match grid");
    fftw_plan plan = plan_cache().get(grid.dimension(), grid.points_per_axis(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(const Grid& grid, Eigen::ArrayXcd& data) { execute(grid, data, FFTW_FORWARD); }

void fft_inverse(const Grid& grid, Eigen::ArrayXcd& data) {
    execute(grid, data, FFTW_BACKWARD);
    data /= static_cast<double>(grid.size());
}

}  // namespace agg
