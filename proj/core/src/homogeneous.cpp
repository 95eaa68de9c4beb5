#include "ilsbm/homogeneous.hpp"

#include <cmath>
#include <stdexcept>

namespace ilsbm {

namespace {

struct Sums {
    std::int64_t l_mu = 0;
    std::int64_t l_nu = 0;
    double eta = 0.0;
    double zeta = 0.0;

    void add(const PairStats& s) {
        l_mu += s.a_plus;
        l_nu += s.a_minus;
        eta += s.x_plus;
        zeta += s.x_minus;
    }
};

HomogeneousFit fit_from_sums(const Sums& sums) {
    HomogeneousFit fit;
    fit.mu_degenerate = sums.l_mu == 0;
    fit.nu_degenerate = sums.l_nu == 0;
    fit.mu_hat = fit.mu_degenerate ? 0.0 : static_cast<double>(sums.l_mu) / sums.eta;
    fit.nu_hat = fit.nu_degenerate ? 0.0 : static_cast<double>(sums.l_nu) / sums.zeta;

    double ll = 0.0;
    if (sums.l_mu > 0) ll += static_cast<double>(sums.l_mu) * std::log(fit.mu_hat);
    if (sums.l_nu > 0) ll += static_cast<double>(sums.l_nu) * std::log(fit.nu_hat);
    ll -= fit.mu_hat * sums.eta;
    ll -= fit.nu_hat * sums.zeta;
    fit.loglik = ll;
    return fit;
}

} // namespace

HomogeneousFit fit_homogeneous(std::span<const PairStats> stats) {
    if (stats.empty()) throw std::invalid_argument("fit_homogeneous: no pairs");
    Sums sums;
    for (const PairStats& s : stats) sums.add(s);
    return fit_from_sums(sums);
}

HomogeneousFit fit_homogeneous(const PairStatsTable& table) {
    if (table.entries.empty()) throw std::invalid_argument("fit_homogeneous: no pairs");
    Sums sums;
    for (const PairStatsEntry& e : table.entries) sums.add(e.stats);
    return fit_from_sums(sums);
}

} // namespace ilsbm
