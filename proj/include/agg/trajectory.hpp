#pragma once

#include "agg/diagnostics.hpp"
#include "agg/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace agg {

/// Callback invoked at the initial state, every `every` steps, and at the final state.
struct Observer {
    int every = 1;
    std::function<void(const ScalarField&)> notify;
};

struct Trajectory {
    ScalarField final_state;
    std::vector<ScalarField> snapshots;  ///< initial, every snapshot_every steps, final
    MassLedger ledger;                   ///< one record per step, initial state included
    std::vector<double> linf;            ///< ||ρ(t)||_inf aligned with ledger.times
    double rho0_sup = 0.0;
    int steps = 0;

    /// ||ρ(t)||_inf <= ||ρ0||_inf / (1 - |σ2| ||ρ0||_inf t) + slack ||ρ0||_inf at every record.
    bool amplitude_bound_holds(double sigma2, double slack = 1e-3) const;

    /// Snapshot closest in time to t.
    const ScalarField& snapshot_at(double t) const;
};

/// Upper envelope ||ρ0||_inf / (1 - |σ2| ||ρ0||_inf t).
double amplitude_envelope(double rho0_sup, double sigma2, double t);

namespace detail {

/// Bookkeeping shared by the viscous and inviscid time loops.
class Recorder {
public:
    Recorder(Trajectory& traj, std::span<const Observer> observers, int snapshot_every);

    void initial(const ScalarField& rho);
    void step(const ScalarField& rho, int step_index);
    void finish(const ScalarField& rho, int step_index);

private:
    Trajectory& traj_;
    std::span<const Observer> observers_;
    int snapshot_every_;
    int last_snapshot_ = -1;
    std::vector<int> last_notified_;
};

}  // namespace detail
}  // namespace agg
