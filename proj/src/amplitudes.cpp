#include "halphen_lab/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>
#include <fftw3.h>

#include "halphen_lab/maass.hpp"
#include "halphen_lab/modforms.hpp"
#include "halphen_lab/parallel.hpp"
#include "halphen_lab/special.hpp"

namespace hl {

Mandelstam Mandelstam::from_st(double s, double t, double alpha_prime)
{
    require(alpha_prime > 0.0 && std::isfinite(alpha_prime), ErrorCode::InvalidArgument, "alpha' must be positive");
    require(std::isfinite(s) && std::isfinite(t), ErrorCode::InvalidArgument, "non-finite Mandelstam variable");
    return {s, t, -s - t, alpha_prime};
}

Mandelstam Mandelstam::from_stu(double s, double t, double u, double alpha_prime)
{
    double scale = std::max({1.0, std::abs(s), std::abs(t), std::abs(u)});
    if (std::abs(s + t + u) > 1e-12 * scale)
        fail(ErrorCode::KinematicsDegenerate, "s + t + u must vanish for massless legs");
    return from_st(s, t, alpha_prime);
}

namespace {

std::array<double, 3> scaled(const Mandelstam& k)
{
    return {k.alpha_prime * k.s, k.alpha_prime * k.t, k.alpha_prime * k.u};
}

double prefactor(const std::array<double, 3>& x)
{
    double stu = x[0] * x[1] * x[2];
    if (stu == 0.0)
        fail(ErrorCode::KinematicsDegenerate, "stu = 0: the amplitude has a pole at this kinematic point");
    return 1.0 / stu;
}

} // namespace

double tree_amplitude_gamma(const Mandelstam& k)
{
    auto x = scaled(k);
    for (double v : x) {
        double r = std::round(v);
        if (r != 0.0 && std::abs(v - r) < 1e-12)
            fail(ErrorCode::PoleHit, "tree amplitude: alpha' times a Mandelstam variable is a nonzero integer");
    }
    double pre = prefactor(x);
    double num = 1.0, den = 1.0;
    for (double v : x) {
        num *= std::tgamma(1.0 + v);
        den *= std::tgamma(1.0 - v);
    }
    return pre * num / den;
}

double tree_amplitude_series(const Mandelstam& k, int N, double tol)
{
    require(N >= 0, ErrorCode::InvalidArgument, "N must be non-negative");
    auto x = scaled(k);
    for (double v : x)
        require(std::abs(v) < 1.0, ErrorCode::InvalidArgument, "series form needs |alpha' s|, |alpha' t|, |alpha' u| < 1");
    double pre = prefactor(x);
    double expo = 0.0, last = 0.0;
    for (int n = 1; n <= N; ++n) {
        int p = 2 * n + 1;
        double pw = std::pow(x[0], p) + std::pow(x[1], p) + std::pow(x[2], p);
        last = 2.0 * zeta(double(p)) / double(p) * pw;
        expo += last;
    }
    if (N > 0 && std::abs(last) > tol)
        fail(ErrorCode::NotConverged, "tree_amplitude_series: last term above tolerance");
    return pre * std::exp(-expo);
}

double sigma_n(const Mandelstam& k, int n)
{
    require(n >= 2, ErrorCode::InvalidArgument, "sigma_n needs n >= 2");
    auto x = scaled(k);
    return std::pow(x[0], n) + std::pow(x[1], n) + std::pow(x[2], n);
}

double sigma_n_from_basis(const Mandelstam& k, int n)
{
    require(n >= 2, ErrorCode::InvalidArgument, "sigma_n needs n >= 2");
    double h2 = sigma_n(k, 2) / 2.0;
    double h3 = sigma_n(k, 3) / 3.0;
    double sum = 0.0;
    for (int q = 0; 3 * q <= n; ++q) {
        if ((n - 3 * q) % 2 != 0)
            continue;
        int p = (n - 3 * q) / 2;
        double coef = std::tgamma(double(p + q)) / (std::tgamma(double(p + 1)) * std::tgamma(double(q + 1)));
        sum += coef * std::pow(h2, p) * std::pow(h3, q);
    }
    return double(n) * sum;
}

double sigma_recursion_check(const Mandelstam& k, int n)
{
    double direct = sigma_n(k, n);
    return std::abs(direct - sigma_n_from_basis(k, n)) / std::max(1.0, std::abs(direct));
}

int dimension_dn(int n)
{
    require(n >= 0, ErrorCode::InvalidArgument, "dimension_dn needs n >= 0");
    return (n + 2) / 2 - (n + 2) / 3;
}

namespace {

cplx reduce_to_cell(cplx z, const ModularPoint& tau)
{
    double n = std::round(z.imag() / tau.im());
    cplx w = z - n * tau.tau();
    double m = std::round(w.real());
    return w - m;
}

} // namespace

double genus_one_propagator(cplx z, const ModularPoint& tau, const QTruncation& trunc)
{
    if (std::abs(reduce_to_cell(z, tau)) < 1e-12)
        fail(ErrorCode::LatticePointHit, "genus_one_propagator: z is a lattice point");
    cplx th = theta(1, z, tau, trunc);
    cplx d0 = theta_char_vderiv({1.0, 1.0}, 0.0, tau, trunc);
    return -0.25 * std::log(std::norm(th / d0)) + pi * z.imag() * z.imag() / (2.0 * tau.im());
}

double propagator_offset(const ModularPoint& tau)
{
    return std::log(std::abs(std::sqrt(2.0 * pi) * dedekind_eta(tau)));
}

double genus_one_propagator_momentum(cplx z, const ModularPoint& tau, int cutoff)
{
    require(cutoff >= 1, ErrorCode::InvalidArgument, "cutoff must be positive");
    const double t2 = tau.im();
    auto term = [&](int m, int n) {
        cplx p = double(m) + double(n) * tau.tau();
        double phase = 2.0 * pi * (std::conj(z) * p).imag() / t2;
        return t2 / std::norm(p) * std::cos(phase);
    };
    auto shell = [&](std::size_t idx) {
        int k = int(idx) + 1;
        CompensatedSum<double> acc;
        for (int m = -k; m <= k; ++m) {
            acc.add(term(m, k));
            acc.add(term(m, -k));
        }
        for (int n = -k + 1; n <= k - 1; ++n) {
            acc.add(term(k, n));
            acc.add(term(-k, n));
        }
        return acc.value();
    };
    return pairwise_sum(parallel_parts(std::size_t(cutoff), shell)) / (4.0 * pi);
}

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

int fft_size(int n)
{
    for (int k = std::max(n, 1);; ++k) {
        int r = k;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return k;
    }
}

// Complex grid over (m, n) momenta with periodic indexing.
struct Grid {
    int Lm = 0, Ln = 0;
    std::vector<cplx> v;

    Grid(int lm, int ln) : Lm(lm), Ln(ln), v(std::size_t(lm) * ln, 0.0) {}
    std::size_t idx(int m, int n) const
    {
        int a = ((m % Lm) + Lm) % Lm, b = ((n % Ln) + Ln) % Ln;
        return std::size_t(a) * Ln + b;
    }
    double size() const { return double(Lm) * double(Ln); }
};

class FFT {
public:
    FFT(int Lm, int Ln) : buf_(std::size_t(Lm) * Ln)
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_2d(Lm, Ln, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(Lm, Ln, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FFT()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FFT(const FFT&) = delete;
    FFT& operator=(const FFT&) = delete;

    // New-array execution so one plan serves several threads.
    void forward(std::vector<cplx>& a) const { run(fwd_, a); }
    void backward(std::vector<cplx>& a) const { run(bwd_, a); }

private:
    static void run(fftw_plan p, std::vector<cplx>& a)
    {
        auto* d = reinterpret_cast<fftw_complex*>(a.data());
        fftw_execute_dft(p, d, d);
    }
    std::vector<cplx> buf_;
    fftw_plan fwd_, bwd_;
};

struct Box {
    int Bm = 0, Bn = 0;
};

Box momentum_box(const ModularPoint& tau, double R)
{
    Box b;
    b.Bn = int(std::floor(R / tau.im()));
    b.Bm = int(std::ceil(R + b.Bn * std::abs(tau.re())));
    return b;
}

Grid propagator_grid(const ModularPoint& tau, double R, int Lm, int Ln)
{
    Grid g(Lm, Ln);
    Box b = momentum_box(tau, R);
    for (int n = -b.Bn; n <= b.Bn; ++n)
        for (int m = -b.Bm; m <= b.Bm; ++m) {
            if (m == 0 && n == 0)
                continue;
            double p2 = std::norm(double(m) + double(n) * tau.tau());
            if (p2 <= R * R)
                g.v[g.idx(m, n)] = tau.im() / (4.0 * pi * p2);
        }
    return g;
}

double dn_at(int n, const ModularPoint& tau, double R)
{
    Box b = momentum_box(tau, R);
    int Lm = fft_size(n * b.Bm + 1), Ln = fft_size(n * b.Bn + 1);
    Grid g = propagator_grid(tau, R, Lm, Ln);
    FFT fft(Lm, Ln);
    fft.forward(g.v);
    std::vector<double> parts(std::size_t(Lm), 0.0);
    for (int a = 0; a < Lm; ++a) {
        CompensatedSum<double> acc;
        for (int c = 0; c < Ln; ++c)
            acc.add(std::pow(g.v[std::size_t(a) * Ln + c], n).real());
        parts[std::size_t(a)] = acc.value();
    }
    return pairwise_sum(parts) / g.size();
}

} // namespace

MaassValue kronecker_eisenstein_Dn(int n, const ModularPoint& tau, const LatticeSumSpec& spec)
{
    if (n < 2)
        fail(ErrorCode::DivergentParameter, "D_n needs n >= 2");
    spec.validate();
    double R = spec.cutoff;
    double full = dn_at(n, tau, R);
    double half = dn_at(n, tau, R / 2.0);
    return {full, std::abs(full - half) / 3.0};
}

namespace {

struct Edge {
    int u, v;
    Grid g;
};

class GraphEvaluator {
public:
    // span: largest multiple of the momentum box that any intermediate sum can reach.
    GraphEvaluator(const ModularPoint& tau, double R, int span) : tau_(tau), R_(R)
    {
        Box b = momentum_box(tau, R);
        Lm_ = fft_size(span * b.Bm + 1);
        Ln_ = fft_size(span * b.Bn + 1);
        fft_ = std::make_unique<FFT>(Lm_, Ln_);
    }

    double run(const GraphMultiplicities& mult)
    {
        static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        Grid f = propagator_grid(tau_, R_, Lm_, Ln_);
        std::vector<Edge> edges;
        for (int e = 0; e < 6; ++e)
            for (int c = 0; c < mult[std::size_t(e)]; ++c)
                edges.push_back({pairs[e][0], pairs[e][1], f});
        double result = 1.0;
        for (;;) {
            merge_parallel(edges);
            if (edges.size() == 1)
                return result * edges[0].g.v[0].real();
            std::map<int, std::vector<std::size_t>> incident;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                incident[edges[i].u].push_back(i);
                incident[edges[i].v].push_back(i);
            }
            bool reduced = false;
            for (auto& [vtx, list] : incident)
                if (list.size() == 1) {
                    result *= edges[list[0]].g.v[0].real();
                    edges.erase(edges.begin() + std::ptrdiff_t(list[0]));
                    reduced = true;
                    break;
                }
            if (reduced)
                continue;
            for (auto& [vtx, list] : incident)
                if (list.size() == 2) {
                    Edge& a = edges[list[0]];
                    const Edge& b = edges[list[1]];
                    int u = a.u == vtx ? a.v : a.u;
                    int w = b.u == vtx ? b.v : b.u;
                    for (std::size_t k = 0; k < a.g.v.size(); ++k)
                        a.g.v[k] *= b.g.v[k];
                    a.u = std::min(u, w);
                    a.v = std::max(u, w);
                    edges.erase(edges.begin() + std::ptrdiff_t(list[1]));
                    reduced = true;
                    break;
                }
            if (reduced)
                continue;
            return result * tetrahedron(edges);
        }
    }

private:
    void convolve_into(Grid& a, Grid b) const
    {
        fft_->forward(a.v);
        fft_->forward(b.v);
        const double inv = 1.0 / a.size();
        for (std::size_t k = 0; k < a.v.size(); ++k)
            a.v[k] *= b.v[k] * inv;
        fft_->backward(a.v);
    }

    void merge_parallel(std::vector<Edge>& edges) const
    {
        std::vector<Edge> out;
        for (auto& e : edges) {
            auto it = std::find_if(out.begin(), out.end(), [&](const Edge& o) { return o.u == e.u && o.v == e.v; });
            if (it == out.end())
                out.push_back(std::move(e));
            else
                convolve_into(it->g, std::move(e.g));
        }
        edges = std::move(out);
    }

    // Complete graph on four vertices: sum over positions x2, x3, x4 (x1 = 0)
    // of the product of the edge functions in position space.
    double tetrahedron(std::vector<Edge>& edges) const
    {
        require(edges.size() == 6, ErrorCode::Internal, "graph reduction left an unexpected graph");
        std::array<std::vector<cplx>, 6> G;
        std::array<std::vector<cplx>, 6> g;
        for (auto& e : edges) {
            int slot = e.u == 0 ? e.v - 1 : (e.u == 1 ? e.v + 1 : 5);
            g[std::size_t(slot)] = e.g.v;
            G[std::size_t(slot)] = e.g.v;
            fft_->backward(G[std::size_t(slot)]);
        }
        const int Lm = Lm_, Ln = Ln_;
        const std::size_t N = std::size_t(Lm) * Ln;
        auto row = [&](std::size_t x2m) {
            CompensatedSum<double> acc;
            std::vector<cplx> B(N);
            const int m2 = int(x2m);
            for (int n2 = 0; n2 < Ln; ++n2) {
                for (int m = 0; m < Lm; ++m) {
                    const std::size_t r = std::size_t(m) * Ln;
                    const std::size_t rs = std::size_t((m - m2 + Lm) % Lm) * Ln;
                    for (int n = 0; n < Ln; ++n)
                        B[r + n] = G[2][r + n].real() * G[4][rs + std::size_t((n - n2 + Ln) % Ln)].real();
                }
                fft_->forward(B);
                for (std::size_t k = 0; k < N; ++k)
                    B[k] *= g[5][k];
                fft_->backward(B);
                CompensatedSum<double> inner;
                for (int m = 0; m < Lm; ++m) {
                    const std::size_t r = std::size_t(m) * Ln;
                    const std::size_t rs = std::size_t((m - m2 + Lm) % Lm) * Ln;
                    for (int n = 0; n < Ln; ++n)
                        inner.add(G[1][r + n].real() * G[3][rs + std::size_t((n - n2 + Ln) % Ln)].real() * B[r + n].real());
                }
                acc.add(G[0][std::size_t(m2) * Ln + std::size_t(n2)].real() * inner.value());
            }
            return acc.value();
        };
        double total = pairwise_sum(parallel_parts(std::size_t(Lm), row));
        const double Nd = double(N);
        return total / (Nd * Nd * Nd);
    }

    ModularPoint tau_;
    double R_;
    int Lm_ = 0, Ln_ = 0;
    std::unique_ptr<FFT> fft_;
};

bool has_bridge(const GraphMultiplicities& mult)
{
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    auto components = [&](int skip) {
        std::array<int, 4> parent{0, 1, 2, 3};
        auto find = [&](int x) {
            while (parent[std::size_t(x)] != x)
                x = parent[std::size_t(x)];
            return x;
        };
        int count = 0;
        std::array<bool, 4> used{};
        for (int e = 0; e < 6; ++e) {
            if (mult[std::size_t(e)] == 0)
                continue;
            used[std::size_t(pairs[e][0])] = used[std::size_t(pairs[e][1])] = true;
            if (e == skip)
                continue;
            parent[std::size_t(find(pairs[e][0]))] = find(pairs[e][1]);
        }
        for (int v = 0; v < 4; ++v)
            if (used[std::size_t(v)] && find(v) == v)
                ++count;
        return count;
    };
    int base = components(-1);
    for (int e = 0; e < 6; ++e)
        if (mult[std::size_t(e)] == 1 && components(e) > base)
            return true;
    return false;
}

int component_count(const GraphMultiplicities& mult)
{
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::array<int, 4> parent{0, 1, 2, 3};
    auto find = [&](int x) {
        while (parent[std::size_t(x)] != x)
            x = parent[std::size_t(x)];
        return x;
    };
    std::array<bool, 4> used{};
    for (int e = 0; e < 6; ++e)
        if (mult[std::size_t(e)] > 0) {
            used[std::size_t(pairs[e][0])] = used[std::size_t(pairs[e][1])] = true;
            parent[std::size_t(find(pairs[e][0]))] = find(pairs[e][1]);
        }
    int count = 0;
    for (int v = 0; v < 4; ++v)
        if (used[std::size_t(v)] && find(v) == v)
            ++count;
    return count;
}

} // namespace

GraphValue graph_D(const GraphMultiplicities& mult, const ModularPoint& tau, const LatticeSumSpec& spec)
{
    spec.validate();
    GraphValue out;
    int vertices = 0;
    std::array<bool, 4> used{};
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int e = 0; e < 6; ++e) {
        require(mult[std::size_t(e)] >= 0, ErrorCode::InvalidArgument, "edge multiplicities must be non-negative");
        out.weight += mult[std::size_t(e)];
        if (mult[std::size_t(e)] > 0)
            used[std::size_t(pairs[e][0])] = used[std::size_t(pairs[e][1])] = true;
    }
    for (bool b : used)
        vertices += b ? 1 : 0;
    require(out.weight >= 1, ErrorCode::InvalidArgument, "graph has no edges");
    if (out.weight > 6)
        fail(ErrorCode::WeightTooLarge, "graph_D supports total weight up to 6");
    int comps = component_count(mult);
    out.loops = out.weight - vertices + comps;
    if (has_bridge(mult)) {
        out.forced_zero = true;
        return out;
    }
    if (comps > 1)
        fail(ErrorCode::DisconnectedGraph, "graph_D needs a connected graph");

    const bool tetrahedral = std::all_of(mult.begin(), mult.end(), [](int m) { return m == 1; });
    const int span = tetrahedral ? 3 : 2 * out.weight;
    double R = spec.cutoff;
    double full = GraphEvaluator(tau, R, span).run(mult);
    double half = GraphEvaluator(tau, R / 2.0, span).run(mult);
    out.value = full;
    out.est_error = std::abs(full - half) / 3.0;
    return out;
}

DecompositionReport decomposition_probe(int n, const std::vector<cplx>& taus, const LatticeSumSpec& spec)
{
    require(n >= 2 && n <= 4, ErrorCode::InvalidArgument, "decomposition_probe supports n in {2, 3, 4}");
    DecompositionReport rep;
    rep.n = n;
    rep.basis = {"1", "E" + std::to_string(n)};
    if (n == 4)
        rep.basis.push_back("E2^2");
    const std::size_t cols = rep.basis.size();
    if (taus.size() < cols)
        fail(ErrorCode::FitIllConditioned, "decomposition_probe: fewer tau points than unknowns");

    const double norm = std::pow(4.0 * pi, n);
    Eigen::MatrixXd A(taus.size(), cols);
    Eigen::VectorXd rhs(taus.size());
    std::vector<std::vector<double>> design;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        ModularPoint tau(taus[i]);
        MaassValue d = kronecker_eisenstein_Dn(n, tau, spec);
        auto E = [&](double s) { return eisenstein_fourier(s, tau, fourier_modes_for(s, tau)).value; };
        std::vector<double> row{1.0, E(n) / norm};
        if (n == 4) {
            double e2 = E(2.0);
            row.push_back(e2 * e2 / norm);
        }
        for (std::size_t c = 0; c < cols; ++c)
            A(Eigen::Index(i), Eigen::Index(c)) = row[c];
        rhs(Eigen::Index(i)) = d.value;
        design.push_back(row);
        rep.taus.push_back(taus[i]);
        rep.values.push_back(d.value);
        rep.errors.push_back(d.est_error);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < Eigen::Index(cols))
        fail(ErrorCode::FitIllConditioned, "decomposition_probe: design matrix is rank deficient");
    Eigen::VectorXd c = qr.solve(rhs);
    rep.coefficients.assign(c.data(), c.data() + c.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        double fit = 0.0;
        for (std::size_t k = 0; k < cols; ++k)
            fit += rep.coefficients[k] * design[i][k];
        double r = rep.values[i] - fit;
        rep.residuals.push_back(r);
        rep.relative_residuals.push_back(std::abs(r) / std::abs(rep.values[i]));
        rep.max_relative_residual = std::max(rep.max_relative_residual, rep.relative_residuals.back());
    }
    return rep;
}

} // namespace hl
