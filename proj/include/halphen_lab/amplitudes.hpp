#ifndef HALPHEN_LAB_AMPLITUDES_HPP
#define HALPHEN_LAB_AMPLITUDES_HPP

#include <array>
#include <string>
#include <vector>

#include "halphen_lab/types.hpp"

namespace hl {

/// Massless four-point kinematics; u is always -s-t.
struct Mandelstam {
    double s = 0.0, t = 0.0, u = 0.0;
    double alpha_prime = 1.0;

    static Mandelstam from_st(double s, double t, double alpha_prime = 1.0);
    /// Rejects triples with s + t + u != 0.
    static Mandelstam from_stu(double s, double t, double u, double alpha_prime = 1.0);
};

double tree_amplitude_gamma(const Mandelstam& k);

/// Exponentiated odd-zeta form truncated at N terms. NotConverged if the
/// last retained term exceeds tol.
double tree_amplitude_series(const Mandelstam& k, int N, double tol = 1e-8);

/// sigma_n = (a's)^n + (a't)^n + (a'u)^n.
double sigma_n(const Mandelstam& k, int n);
/// The same sigma_n rebuilt from sigma_2 and sigma_3.
double sigma_n_from_basis(const Mandelstam& k, int n);
double sigma_recursion_check(const Mandelstam& k, int n);

int dimension_dn(int n);

double genus_one_propagator(cplx z, const ModularPoint& tau, const QTruncation& trunc = {});
/// (1/4pi) sum' tau2/|p|^2 cos(2 pi Im(conj(z) p)/tau2) over max(|m|,|n|) <= cutoff.
double genus_one_propagator_momentum(cplx z, const ModularPoint& tau, int cutoff);
/// log|sqrt(2 pi) eta(tau)|, the offset between the two propagator forms.
double propagator_offset(const ModularPoint& tau);

/// n-fold sum of prod tau2/(4 pi |p_i|^2) with sum p_i = 0, every p_i != 0
/// and |p_i| <= cutoff.
MaassValue kronecker_eisenstein_Dn(int n, const ModularPoint& tau, const LatticeSumSpec& spec = {});

/// Edge multiplicities in the order n12, n13, n14, n23, n24, n34.
using GraphMultiplicities = std::array<int, 6>;

struct GraphValue {
    double value = 0.0;
    double est_error = 0.0;
    int loops = 0;
    int weight = 0;
    // A bridge forces zero momentum on an edge; the value is then 0.
    bool forced_zero = false;
};

GraphValue graph_D(const GraphMultiplicities& mult, const ModularPoint& tau, const LatticeSumSpec& spec = {});

struct DecompositionReport {
    int n = 0;
    std::vector<std::string> basis;
    std::vector<double> coefficients;
    std::vector<cplx> taus;
    std::vector<double> values;
    std::vector<double> errors;
    std::vector<double> residuals;
    std::vector<double> relative_residuals;
    double max_relative_residual = 0.0;
};

/// Least-squares fit of D_n over taus against 1, E_n/(4pi)^n and E_r E_s/(4pi)^n.
DecompositionReport decomposition_probe(int n, const std::vector<cplx>& taus, const LatticeSumSpec& spec = {});

} // namespace hl

#endif
