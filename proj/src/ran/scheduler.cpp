#include "ranloop/ran/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ranloop::ran {

RrResult schedule_rr(std::span<const uint32_t> backlogged, uint16_t n_prbs, uint32_t start_ue) {
    RrResult res;
    res.next_ue = start_ue;
    if (backlogged.empty() || n_prbs == 0) return res;

    // First deal position: the first listed UE with id >= start_ue, wrapping.
    size_t pos = 0;
    while (pos < backlogged.size() && backlogged[pos] < start_ue) ++pos;
    if (pos == backlogged.size()) pos = 0;

    for (uint16_t k = 0; k < n_prbs; ++k) {
        res.alloc[backlogged[pos]] += 1;
        pos = (pos + 1) % backlogged.size();
    }
    res.next_ue = backlogged[pos];
    return res;
}

PrbAllocation schedule_pf(std::span<const SchedUe> ues, uint16_t n_prbs) {
    PrbAllocation alloc;
    if (ues.empty() || n_prbs == 0) return alloc;

    size_t best = 0;
    double best_metric = -1.0;
    for (size_t i = 0; i < ues.size(); ++i) {
        double metric = ues[i].inst_rate_bps / ues[i].history_bps;
        if (metric > best_metric) {
            best_metric = metric;
            best = i;
        }
    }
    alloc[ues[best].ue_id] = n_prbs;
    return alloc;
}

double waterfill_level(std::span<const double> levels, double budget,
                       std::vector<double>* shares) {
    double lo = levels[0];
    double hi = levels[0];
    for (double n : levels) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    hi += budget;

    auto filled = [&](double mu) {
        double s = 0.0;
        for (double n : levels) s += std::max(0.0, mu - n);
        return s;
    };

    for (int iter = 0; iter < 200 && (hi - lo) > 1e-9; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (filled(mid) < budget)
            lo = mid;
        else
            hi = mid;
    }
    double mu = 0.5 * (lo + hi);
    if (shares) {
        shares->resize(levels.size());
        for (size_t i = 0; i < levels.size(); ++i) (*shares)[i] = std::max(0.0, mu - levels[i]);
    }
    return mu;
}

std::vector<uint16_t> largest_remainder(std::span<const double> shares, uint16_t budget) {
    std::vector<uint16_t> grants(shares.size(), 0);
    uint32_t assigned = 0;
    std::vector<std::pair<double, size_t>> remainders;
    for (size_t i = 0; i < shares.size(); ++i) {
        if (shares[i] <= 0.0) continue;
        double fl = std::floor(shares[i]);
        grants[i] = static_cast<uint16_t>(fl);
        assigned += grants[i];
        remainders.emplace_back(shares[i] - fl, i);
    }
    // Ties on the remainder go to the lower index.
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (size_t k = 0; assigned < budget && k < remainders.size(); ++k) {
        grants[remainders[k].second] += 1;
        ++assigned;
    }
    return grants;
}

PrbAllocation schedule_wf(std::span<const SchedUe> ues, uint16_t n_prbs) {
    PrbAllocation alloc;
    if (ues.empty() || n_prbs == 0) return alloc;

    std::vector<double> levels(ues.size());
    for (size_t i = 0; i < ues.size(); ++i) levels[i] = 1.0 / ues[i].efficiency;

    std::vector<double> shares;
    waterfill_level(levels, static_cast<double>(n_prbs), &shares);
    std::vector<uint16_t> grants = largest_remainder(shares, n_prbs);
    for (size_t i = 0; i < ues.size(); ++i) {
        if (grants[i] > 0) alloc[ues[i].ue_id] = grants[i];
    }
    return alloc;
}

}  // namespace ranloop::ran
