// timeseries.hpp - uniform time grid and the record type every solver emits

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rcet/model.hpp"

namespace rcet {

// n_steps integration steps of size dt; every stride-th step (and the
// initial point) is recorded.
struct TimeGrid {
    double dt{0.0};
    std::size_t n_steps{0};
    std::size_t stride{1};

    static TimeGrid from_horizon(double dt, double t_max, std::size_t stride = 1);

    double t_max() const { return dt * static_cast<double>(n_steps); }
    std::size_t n_records() const { return n_steps / stride + 1; }
    double record_time(std::size_t k) const {
        return dt * static_cast<double>(k * stride);
    }
    void validate() const {
        if (!(dt > 0.0) || n_steps == 0 || stride == 0 || n_steps % stride != 0) {
            throw std::invalid_argument("TimeGrid: need dt > 0, n_steps > 0 and stride dividing n_steps");
        }
    }
};

// Per-record populations, coherence and efficiency. The standard-error
// columns are only filled by ensemble averages.
struct TimeSeries {
    TimeGrid grid;
    std::vector<double> t;
    std::vector<DensityMatrix2> states;
    std::vector<double> eta;
    std::vector<double> se_rho11;
    std::vector<double> se_rho22;

    std::size_t size() const { return t.size(); }
    bool has_errors() const { return !se_rho11.empty(); }

    void reserve(std::size_t n) {
        t.reserve(n);
        states.reserve(n);
        eta.reserve(n);
    }
    void push(double time, const DensityMatrix2& rho, double efficiency) {
        t.push_back(time);
        states.push_back(rho);
        eta.push_back(efficiency);
    }
};

inline TimeGrid TimeGrid::from_horizon(double dt, double t_max, std::size_t stride) {
    if (!(dt > 0.0) || !(t_max > 0.0) || stride == 0) {
        throw std::invalid_argument("TimeGrid: dt and t_max must be positive");
    }
    auto n = static_cast<std::size_t>(t_max / dt + 0.5);
    if (n == 0) {
        n = 1;
    }
    n = ((n + stride - 1) / stride) * stride;
    return TimeGrid{t_max / static_cast<double>(n), n, stride};
}

}  // namespace rcet
