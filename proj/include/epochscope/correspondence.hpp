#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"
#include "epochscope/svd.hpp"

namespace epochscope {

struct CAResult {
    std::vector<double> inertias;     // lambda_k, descending
    std::vector<double> inertia_pct;  // sums to 100 over retained dimensions
    double total_inertia = 0.0;       // chi^2 / N
    std::vector<double> sigma;        // singular values of the retained dims
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> row_coords;  // principal, [row][dim]
    std::vector<std::vector<double>> col_coords;  // principal, [col][dim]
    std::vector<double> row_mass;
    std::vector<double> col_mass;

    std::size_t dimensions() const { return sigma.size(); }
};

// Correspondence analysis of a contingency table: SVD of the standardized
// residuals S_ij = (P_ij - r_i c_j) / sqrt(r_i c_j). Dimensions with
// sigma < 1e-12 * sigma_max are dropped as numerical zeros; each retained
// dimension is signed so that its largest-magnitude column coordinate is
// positive.
inline CAResult ca_fit(const ContingencyTable& table) {
    const std::size_t m = table.row_labels.size();
    const std::size_t n = table.col_labels.size();
    if (m < 2 || n < 2)
        throw DegenerateTableError("ca_fit: need at least 2 rows and 2 columns");
    if (table.grand_total == 0) throw DegenerateTableError("ca_fit: empty table");

    const double N = static_cast<double>(table.grand_total);
    CAResult result;
    result.row_labels = table.row_labels;
    result.col_labels = table.col_labels;
    result.row_mass.resize(m);
    result.col_mass.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (table.row_totals[i] == 0)
            throw DegenerateTableError("ca_fit: all-zero row '" + table.row_labels[i] + "'");
        result.row_mass[i] = static_cast<double>(table.row_totals[i]) / N;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (table.col_totals[j] == 0)
            throw DegenerateTableError("ca_fit: all-zero column '" + table.col_labels[j] + "'");
        result.col_mass[j] = static_cast<double>(table.col_totals[j]) / N;
    }

    Matrix s(m, n);
    long double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double p = static_cast<double>(table.counts[i][j]) / N;
            const double e = result.row_mass[i] * result.col_mass[j];
            const double sij = (p - e) / std::sqrt(e);
            s.at(i, j) = sij;
            total += static_cast<long double>(sij) * sij;
        }
    }
    result.total_inertia = static_cast<double>(total);

    const SvdResult svd = jacobi_svd(s);
    const double sigma_max = svd.singular.empty() ? 0.0 : svd.singular.front();
    const std::size_t max_dims = std::min(m, n) - 1;
    std::size_t k = 0;
    while (k < svd.singular.size() && k < max_dims &&
           svd.singular[k] > 1e-12 * sigma_max)
        ++k;

    result.sigma.assign(svd.singular.begin(), svd.singular.begin() + k);
    result.inertias.resize(k);
    double retained = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
        result.inertias[d] = result.sigma[d] * result.sigma[d];
        retained += result.inertias[d];
    }
    result.inertia_pct.resize(k);
    for (std::size_t d = 0; d < k; ++d)
        result.inertia_pct[d] = retained > 0 ? 100.0 * result.inertias[d] / retained : 0.0;

    result.row_coords.assign(m, std::vector<double>(k, 0.0));
    result.col_coords.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t d = 0; d < k; ++d) {
        // sign convention: largest-|value| column coordinate positive
        double best = 0.0;
        double flip = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double coord = result.sigma[d] * svd.v.at(j, d) /
                                 std::sqrt(result.col_mass[j]);
            if (std::abs(coord) > best) {
                best = std::abs(coord);
                flip = coord < 0 ? -1.0 : 1.0;
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            result.row_coords[i][d] =
                flip * result.sigma[d] * svd.u.at(i, d) / std::sqrt(result.row_mass[i]);
        for (std::size_t j = 0; j < n; ++j)
            result.col_coords[j][d] =
                flip * result.sigma[d] * svd.v.at(j, d) / std::sqrt(result.col_mass[j]);
    }
    return result;
}

// Projects a supplementary column profile (length = row count, sums to 1)
// onto the principal axes via the transition formula
// g_k = (1/sigma_k) * sum_i profile_i * row_coord_ik.
inline std::vector<double> ca_project_supplementary(const CAResult& result,
                                                    std::span<const double> profile) {
    if (profile.size() != result.row_labels.size())
        throw DimensionMismatchError("ca_project_supplementary: profile length != rows");
    long double sum = 0;
    for (const double p : profile) sum += p;
    if (std::abs(static_cast<double>(sum) - 1.0) > 1e-9)
        throw DomainError("ca_project_supplementary: profile must sum to 1");

    std::vector<double> coords(result.dimensions(), 0.0);
    for (std::size_t d = 0; d < result.dimensions(); ++d) {
        long double acc = 0;
        for (std::size_t i = 0; i < profile.size(); ++i)
            acc += static_cast<long double>(profile[i]) * result.row_coords[i][d];
        coords[d] = static_cast<double>(acc) / result.sigma[d];
    }
    return coords;
}

}  // namespace epochscope
