#pragma once

#include "hrv/cone.hpp"
#include "hrv/risk_set.hpp"
#include "hrv/sampler.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hrv {

enum class TailMethod { Hill, QQ };

std::string to_string(TailMethod m);
TailMethod tail_method_from_string(const std::string& name);  // "hill" | "qq"

// Positive distances d(Z_i, F) sorted descending (ties by row index), with
// the rows they came from. Zero distances are counted and dropped.
struct OrderedDistances {
    std::vector<double> dist;
    std::vector<std::size_t> row;
    std::size_t n_total = 0;
    std::size_t n_zero = 0;

    std::size_t n_pos() const noexcept { return dist.size(); }
};

OrderedDistances order_distances(const DataSet& data, const ConeSpec& cone);

struct TailIndexFit {
    double alpha_hat = 0.0;
    std::size_t k = 0;
    double b_hat = 0.0;  // d_(k+1)
    TailMethod method = TailMethod::Hill;
    std::size_t n_pos = 0;
    std::size_t n_zero = 0;
    ConeSpec cone;
};

// Hill and QQ estimates from descending positive values; need 1 <= k < size.
double hill_estimate(std::span<const double> desc, std::size_t k);
double qq_estimate(std::span<const double> desc, std::size_t k);

// Throws InsufficientExceedancesError unless 1 <= k < n_pos.
TailIndexFit fit_tail_index(const OrderedDistances& od, const ConeSpec& cone, std::size_t k,
                            TailMethod method = TailMethod::Hill);
TailIndexFit fit_tail_index(const DataSet& data, const ConeSpec& cone, std::size_t k,
                            TailMethod method = TailMethod::Hill);

// alpha_hat against k (the Hill plot as data).
struct SweepPoint {
    std::size_t k;
    double alpha_hat;
};

// Roughly log-spaced k from 10 (or 1) up to n_pos - 1, at most `points` values.
std::vector<std::size_t> sweep_grid(std::size_t n_pos, std::size_t points = 60);
std::vector<SweepPoint> hill_sweep(const OrderedDistances& od, const std::vector<std::size_t>& ks);

// ---------------------------------------------------------------------------
// Spectral measure: atoms Z_i / d_i for d_i > d_(k+1), each of weight 1/k.
// ---------------------------------------------------------------------------
struct SpectralMeasureEstimate {
    std::vector<Point> atoms;  // descending distance order
    std::vector<std::size_t> rows;
    std::vector<double> weights;
    double total_mass = 0.0;
    ConeSpec cone;
    std::size_t k = 0;
    double b_hat = 0.0;
};

SpectralMeasureEstimate spectral_estimate(const OrderedDistances& od, const DataSet& data, const ConeSpec& cone,
                                          std::size_t k);
SpectralMeasureEstimate spectral_estimate(const DataSet& data, const ConeSpec& cone, std::size_t k);

// ---------------------------------------------------------------------------
// Support: the atom cloud plus a greedy ball covering in angular distance.
// ---------------------------------------------------------------------------
struct SupportCluster {
    Point center;          // an atom, lies on {d(., F) = 1}
    double radius = 0.0;   // largest angular distance of a member to the center
    double mass_fraction = 0.0;
    std::size_t count = 0;
    bool outlier = false;
};

struct SupportEstimate {
    SpectralMeasureEstimate spectral;
    std::vector<SupportCluster> clusters;  // in formation order
    std::vector<std::size_t> cluster_of;   // per atom
    double cluster_eps = 0.05;
    double outlier_fraction = 0.01;
};

SupportEstimate cluster_support(SpectralMeasureEstimate spectral, double cluster_eps,
                                double outlier_fraction = 0.01);
SupportEstimate support_estimate(const DataSet& data, const ConeSpec& cone, std::size_t k, double cluster_eps,
                                 double outlier_fraction = 0.01);

// (1/k) #{i : Z_i / d_(k+1) in region}. ContractError unless the region is
// bounded away from the cone.
double empirical_tail_measure(const DataSet& data, const ConeSpec& cone, std::size_t k, const RiskSet& region);
double empirical_tail_measure(const OrderedDistances& od, const DataSet& data, const ConeSpec& cone, std::size_t k,
                              const RiskSet& region);

}  // namespace hrv
