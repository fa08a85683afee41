#include "agg/trajectory.hpp"

#include "agg/error.hpp"

#include <cmath>

namespace agg {

double amplitude_envelope(double rho0_sup, double sigma2, double t) {
    const double denom = 1.0 - std::abs(sigma2) * rho0_sup * t;
    if (!(denom > 0.0)) return kInfinity;
    return rho0_sup / denom;
}

bool Trajectory::amplitude_bound_holds(double sigma2, double slack) const {
    for (std::size_t k = 0; k < linf.size(); ++k) {
        const double bound = amplitude_envelope(rho0_sup, sigma2, ledger.times[k]) + slack * rho0_sup;
        if (linf[k] > bound) return false;
    }
    return true;
}

const ScalarField& Trajectory::snapshot_at(double t) const {
    if (snapshots.empty()) throw InvalidArgument("trajectory holds no snapshots");
    std::size_t best = 0;
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        if (std::abs(snapshots[k].time - t) < std::abs(snapshots[best].time - t)) best = k;
    }
    return snapshots[best];
}

namespace detail {

Recorder::Recorder(Trajectory& traj, std::span<const Observer> observers, int snapshot_every)
    : traj_(traj), observers_(observers), snapshot_every_(snapshot_every),
      last_notified_(observers.size(), -1) {}

void Recorder::initial(const ScalarField& rho) {
    traj_.rho0_sup = rho.values.size() ? rho.values.abs().maxCoeff() : 0.0;
    traj_.snapshots.push_back(rho);
    last_snapshot_ = 0;
    mass_ledger_append(traj_.ledger, rho);
    traj_.linf.push_back(traj_.rho0_sup);
    for (std::size_t o = 0; o < observers_.size(); ++o) {
        if (observers_[o].notify) observers_[o].notify(rho);
        last_notified_[o] = 0;
    }
}

void Recorder::step(const ScalarField& rho, int step_index) {
    mass_ledger_append(traj_.ledger, rho);
    traj_.linf.push_back(rho.values.abs().maxCoeff());
    if (snapshot_every_ > 0 && step_index % snapshot_every_ == 0) {
        traj_.snapshots.push_back(rho);
        last_snapshot_ = step_index;
    }
    for (std::size_t o = 0; o < observers_.size(); ++o) {
        const int every = observers_[o].every;
        if (every > 0 && step_index % every == 0) {
            if (observers_[o].notify) observers_[o].notify(rho);
            last_notified_[o] = step_index;
        }
    }
}

void Recorder::finish(const ScalarField& rho, int step_index) {
    traj_.final_state = rho;
    traj_.steps = step_index;
    if (last_snapshot_ != step_index) traj_.snapshots.push_back(rho);
    for (std::size_t o = 0; o < observers_.size(); ++o) {
        if (last_notified_[o] != step_index && observers_[o].notify) observers_[o].notify(rho);
    }
}

}  // namespace detail
}  // namespace agg
