#include "birkhoff/harness/thresholds.hpp"

#include <array>
#include <string>

#include "birkhoff/core/error.hpp"

namespace birkhoff::harness {

namespace {

constexpr std::array kTable{
    Threshold{"sample_ds_tol", 1e-8, "every emitted matrix passes the doubly stochastic check"},
    Threshold{"oracle_ks_max", 0.02, "two-sample KS, Gibbs vs exact rejection, n X_11"},
    Threshold{"oracle_pair_tv_max", 0.03, "two-sample binned TV of entry pairs"},
    Threshold{"oracle_pair_bins", 8, "quantile cells per axis for the pair TV"},
    Threshold{"oracle_max_entry_ks_max", 0.02, "two-sample KS of the max entry, Gibbs vs exact"},
    Threshold{"exchangeability_ks_max", 0.02, "two-sample KS between X_11 and X_23 of Gibbs samples"},
    Threshold{"marginal_ks_max", 0.03, "KS(n X_11, Exp(1)) at the largest n"},
    Threshold{"marginal_tv_monotone_se", 2.0, "tv_binned may rise by this many combined SE between n"},
    Threshold{"marginal_tv_grid_hi", 12.0, "upper edge of the TV grid for Exp(1)-scale data"},
    Threshold{"marginal_tv_bins", 64, "bins of the TV grid"},
    Threshold{"spacing_autocorr_max", 0.05, "lag-one autocorrelation of n X_11 between successive samples of a chain"},
    Threshold{"moments_mean_se", 4.0, "first moment of n X_11 within this many SE of 1"},
    Threshold{"moments_second_rel", 0.05, "second moment of n X_11 within this relative error of 2"},
    Threshold{"moments_cross_rel", 0.05, "E[(n X_11)(n X_34)] within this relative error of 1"},
    Threshold{"max_entry_fraction", 0.08, "fraction of matrices with max n X_ij > (2+eps) log n"},
    Threshold{"singular_w1_max", 0.05, "W1 of pooled singular values against the quarter circle"},
    Threshold{"singular_w1_squared_max", 0.10, "W1 of pooled squared singular values against the image law"},
    Threshold{"frobenius_rel_max", 1e-8, "relative error of sum sigma^2 = n sum (X_ij - 1/n)^2"},
    Threshold{"mixing_d1_min", 0.25, "d(1) must exceed this (not mixed after one step)"},
    Threshold{"mixing_d2_max", 0.05, "d(2) must fall below this"},
    Threshold{"mixing_pattern_fraction", 0.95, "fraction of matrices showing both d(1) and d(2) conditions"},
    Threshold{"mixing_mean_d1_rel", 0.15, "row-averaged d(1) within this relative error of 1/e"},
    Threshold{"mixing_monotone_tol", 1e-12, "d(t+1) may exceed d(t) by at most this"},
    Threshold{"mixing_asymptotic_min_n", 16, "smallest n at which the mixing-time-2 pattern is asserted"},
    Threshold{"submatrix_corr_max", 0.05, "max |correlation| among rescaled k x k block entries"},
    Threshold{"submatrix_energy_ratio", 2.0, "energy distance at most this multiple of the iid self-distance"},
    Threshold{"vertex_mean_se", 3.0, "vertex mixture mean of M_11 within this many SE of 1/n"},
    Threshold{"vertex_var_se", 3.0, "vertex mixture variance of M_11 within this many SE"},
    Threshold{"vertex_ks_max", 0.01, "KS of M_11 against Beta((n-1)!, (n-1)(n-1)!)"},
    Threshold{"volume_sigma", 3.0, "volume comparisons hold within this many combined SE"},
    Threshold{"log_concavity_tol", 1e-9, "largest allowed second difference of log density"},
    Threshold{"radon_ratio_slack", 1.2, "binned density ratio at most this multiple of e^{r/2}"},
    Threshold{"radon_min_count", 100, "bins need this many counts in both samples"},
    Threshold{"formula_exact_tol", 1e-9, "agreement of algebraically identical formula values"},
    Threshold{"cm_order_of_magnitude", 2.302585092994046, "|formula - Monte Carlo| log-volume gap at n = 3 (ln 10)"},
    Threshold{"radon_min_bins", 1, "bins meeting the count requirement"},
    Threshold{"failures_max", 0, "allowed number of failed sub-checks"},
};

}  // namespace

std::span<const Threshold> thresholds() { return kTable; }

const Threshold& threshold(std::string_view name) {
  for (const auto& t : kTable)
    if (t.name == name) return t;
  throw PreconditionError("unknown threshold '" + std::string(name) + "'");
}

}  // namespace birkhoff::harness
