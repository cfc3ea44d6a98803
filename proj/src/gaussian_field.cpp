#include "levyfield/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levyfield {

namespace {

void check_lattice(const std::vector<double>& v, const char* what) {
    if (v.size() < 2) throw std::invalid_argument(std::string(what) + ": need >= 2 nodes");
    if (v.front() != 0.0)
        throw std::invalid_argument(std::string(what) + ": must start at 0");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw std::invalid_argument(std::string(what) + ": must be strictly increasing");
}

// LDL^T with clamping of tiny negative pivots; returns false when the matrix
// is not positive semidefinite within tolerance. On success `a` holds unit-L
// below the diagonal and D on the diagonal.
bool ldlt_psd(std::vector<double>& a, std::size_t n, double tol) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            d -= a[j * n + k] * a[j * n + k] * a[k * n + k];
        if (d < -tol) return false;
        d = std::max(d, 0.0);
        a[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                v -= a[i * n + k] * a[j * n + k] * a[k * n + k];
            if (d > 0.0)
                a[i * n + j] = v / d;
            else if (std::abs(v) > tol)
                return false;
            else
                a[i * n + j] = 0.0;
        }
    }
    return true;
}

std::size_t locate(const std::vector<double>& nodes, double v) {
    // cell index i with nodes[i] <= v <= nodes[i+1]
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    if (i == 0) return 0;
    return std::min(i - 1, nodes.size() - 2);
}

} // namespace

GaussianCovariance GaussianCovariance::none() { return {}; }

GaussianCovariance GaussianCovariance::brownian_sheet() {
    GaussianCovariance c;
    c.kind_ = Kind::BrownianSheet;
    return c;
}

GaussianCovariance GaussianCovariance::user_grid(std::vector<double> lattice,
                                                 std::vector<double> matrix) {
    check_lattice(lattice, "covariance lattice");
    const std::size_t n = lattice.size();
    if (matrix.size() != n * n)
        throw std::invalid_argument("covariance matrix size must match the lattice");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(matrix[i * n + j] - matrix[j * n + i]) >
                1e-12 * std::max(1.0, std::abs(matrix[i * n + j])))
                throw std::invalid_argument("covariance matrix must be symmetric");
        scale = std::max(scale, std::abs(matrix[i * n + i]));
    }
    std::vector<double> work = matrix;
    if (!ldlt_psd(work, n, 1e-10 * std::max(scale, 1.0)))
        throw std::invalid_argument(
            "covariance matrix failed the positive-semidefiniteness check");
    GaussianCovariance c;
    c.kind_ = Kind::UserGrid;
    c.lattice_ = std::move(lattice);
    c.matrix_ = std::move(matrix);
    return c;
}

double GaussianCovariance::maturity_cov(double t1, double t2) const {
    if (kind_ != Kind::UserGrid)
        throw std::logic_error("maturity_cov: only defined for UserGrid covariances");
    if (t1 < lattice_.front() || t1 > lattice_.back() || t2 < lattice_.front() ||
        t2 > lattice_.back())
        throw std::out_of_range("covariance queried outside the declared lattice");
    const std::size_t n = lattice_.size();
    const std::size_t i = locate(lattice_, t1);
    const std::size_t j = locate(lattice_, t2);
    const double u = (t1 - lattice_[i]) / (lattice_[i + 1] - lattice_[i]);
    const double v = (t2 - lattice_[j]) / (lattice_[j + 1] - lattice_[j]);
    const double m00 = matrix_[i * n + j];
    const double m10 = matrix_[(i + 1) * n + j];
    const double m01 = matrix_[i * n + j + 1];
    const double m11 = matrix_[(i + 1) * n + j + 1];
    return (1 - u) * (1 - v) * m00 + u * (1 - v) * m10 + (1 - u) * v * m01 +
           u * v * m11;
}

double GaussianCovariance::operator()(double s, double t1, double t2) const {
    switch (kind_) {
        case Kind::None: return 0.0;
        case Kind::BrownianSheet: return s * std::min(t1, t2);
        case Kind::UserGrid: return s * maturity_cov(t1, t2);
    }
    return 0.0;
}

GaussianGrid GaussianGrid::uniform(double s_max, double t_max, std::size_t s_steps,
                                   std::size_t t_steps) {
    if (!(s_max > 0.0 && t_max > 0.0) || s_steps < 1 || t_steps < 1)
        throw std::invalid_argument("gaussian grid: positive extents and steps required");
    GaussianGrid g;
    g.s_nodes.resize(s_steps + 1);
    g.t_nodes.resize(t_steps + 1);
    for (std::size_t i = 0; i <= s_steps; ++i)
        g.s_nodes[i] = s_max * static_cast<double>(i) / static_cast<double>(s_steps);
    for (std::size_t j = 0; j <= t_steps; ++j)
        g.t_nodes[j] = t_max * static_cast<double>(j) / static_cast<double>(t_steps);
    return g;
}

GaussianRealization::GaussianRealization(GaussianGrid grid, std::vector<double> values,
                                         GaussianCovariance::Kind covariance_id)
    : grid_(std::move(grid)), values_(std::move(values)), covariance_id_(covariance_id) {
    check_lattice(grid_.s_nodes, "gaussian grid s-nodes");
    check_lattice(grid_.t_nodes, "gaussian grid t-nodes");
    if (values_.size() != grid_.s_nodes.size() * grid_.t_nodes.size())
        throw std::invalid_argument("gaussian realization: value array size mismatch");
}

double GaussianRealization::node(std::size_t i, std::size_t j) const {
    return values_[i * grid_.t_nodes.size() + j];
}

double GaussianRealization::eval(double s, double t) const {
    const auto& sn = grid_.s_nodes;
    const auto& tn = grid_.t_nodes;
    if (s < 0.0 || s > sn.back() || t < 0.0 || t > tn.back())
        throw std::out_of_range("gaussian eval outside the grid");
    const std::size_t i = locate(sn, s);
    const std::size_t j = locate(tn, t);
    const double u = (s - sn[i]) / (sn[i + 1] - sn[i]);
    const double v = (t - tn[j]) / (tn[j + 1] - tn[j]);
    return (1 - u) * (1 - v) * node(i, j) + u * (1 - v) * node(i + 1, j) +
           (1 - u) * v * node(i, j + 1) + u * v * node(i + 1, j + 1);
}

double GaussianRealization::integral_forward(double s, double t) const {
    if (s > t) throw std::invalid_argument("integral_forward: needs s <= t");
    const auto& tn = grid_.t_nodes;
    double total = 0.0;
    double u_prev = s;
    double y_prev = eval(s, u_prev);
    for (double u : tn) {
        if (u <= s) continue;
        if (u >= t) break;
        const double y = eval(s, u);
        total += 0.5 * (y + y_prev) * (u - u_prev);
        u_prev = u;
        y_prev = y;
    }
    total += 0.5 * (eval(s, t) + y_prev) * (t - u_prev);
    return total;
}

double GaussianRealization::integral_spot(double s) const {
    const auto& sn = grid_.s_nodes;
    double total = 0.0;
    double u_prev = 0.0;
    double y_prev = eval(0.0, 0.0); // identically 0
    for (double u : sn) {
        if (u <= 0.0) continue;
        if (u >= s) break;
        const double y = eval(u, u);
        total += 0.5 * (y + y_prev) * (u - u_prev);
        u_prev = u;
        y_prev = y;
    }
    total += 0.5 * (eval(s, s) + y_prev) * (s - u_prev);
    return total;
}

GaussianSheetSimulator::GaussianSheetSimulator(const GaussianCovariance& cov,
                                               GaussianGrid grid)
    : kind_(cov.kind()), grid_(std::move(grid)) {
    check_lattice(grid_.s_nodes, "gaussian grid s-nodes");
    check_lattice(grid_.t_nodes, "gaussian grid t-nodes");
    if (kind_ == GaussianCovariance::Kind::None)
        throw std::invalid_argument("gaussian simulator: covariance is None");
    if (kind_ == GaussianCovariance::Kind::UserGrid) {
        // factor M at the simulation t-nodes (excluding t=0, where Y=0... note
        // Y_{s,0} needs Var = s*M(0,0), so keep all nodes)
        const std::size_t n = grid_.t_nodes.size();
        chol_.assign(n * n, 0.0);
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                chol_[i * n + j] = cov.maturity_cov(grid_.t_nodes[i], grid_.t_nodes[j]);
                scale = std::max(scale, std::abs(chol_[i * n + j]));
            }
        if (!ldlt_psd(chol_, n, 1e-9 * scale))
            throw std::invalid_argument(
                "covariance restricted to the simulation grid is not PSD");
        // fold sqrt(D) into L so sampling is a single triangular multiply
        for (std::size_t j = 0; j < n; ++j) {
            const double rd = std::sqrt(chol_[j * n + j]);
            chol_[j * n + j] = rd;
            for (std::size_t i = j + 1; i < n; ++i) chol_[i * n + j] *= rd;
        }
    }
}

GaussianRealization GaussianSheetSimulator::simulate(PathRng& rng) const {
    const std::size_t ns = grid_.s_nodes.size();
    const std::size_t nt = grid_.t_nodes.size();
    std::vector<double> y(ns * nt, 0.0);

    if (kind_ == GaussianCovariance::Kind::BrownianSheet) {
        // i.i.d. cell increments, variance ds*dt, prefix-summed in both axes
        for (std::size_t i = 1; i < ns; ++i) {
            const double ds = grid_.s_nodes[i] - grid_.s_nodes[i - 1];
            double row_accum = 0.0;
            for (std::size_t j = 1; j < nt; ++j) {
                const double dt = grid_.t_nodes[j] - grid_.t_nodes[j - 1];
                row_accum += std::sqrt(ds * dt) * rng.normal();
                y[i * nt + j] = y[(i - 1) * nt + j] + row_accum;
            }
        }
    } else {
        // independent s-increments: dY ~ N(0, ds * M) via the stored factor
        std::vector<double> z(nt), inc(nt);
        for (std::size_t i = 1; i < ns; ++i) {
            const double sq_ds = std::sqrt(grid_.s_nodes[i] - grid_.s_nodes[i - 1]);
            for (std::size_t j = 0; j < nt; ++j) z[j] = rng.normal();
            for (std::size_t r = 0; r < nt; ++r) {
                double acc = 0.0;
                for (std::size_t c = 0; c <= r; ++c) acc += chol_[r * nt + c] * z[c];
                inc[r] = sq_ds * acc;
            }
            for (std::size_t j = 0; j < nt; ++j)
                y[i * nt + j] = y[(i - 1) * nt + j] + inc[j];
        }
    }
    return GaussianRealization(grid_, std::move(y), kind_);
}

} // namespace levyfield
