#include "ctqw/spectral.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ctqw/errors.hpp"

namespace ctqw::spectral {

namespace {

// J_0..J_nmax at non-negative argument a, by Miller's downward recurrence
// (stable where the upward one is not).  Normalized with
// J_0 + 2*sum_{k even} J_k = 1.
std::vector<double> bessel_j_array(int nmax, double a) {
    std::vector<double> out(nmax + 1, 0.0);
    if (a <= 0.0) {
        out[0] = 1.0;
        return out;
    }
    const int start = nmax + 50 + static_cast<int>(2.0 * std::sqrt(static_cast<double>(nmax) + 1.0));
    double jnext = 0.0, jcur = 1e-30;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jprev = (2.0 * k / a) * jcur - jnext;
        jnext = jcur;
        jcur = jprev;
        if (k - 1 <= nmax) out[k - 1] = jcur;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jcur : 2.0 * jcur;
        if (std::abs(jcur) > 1e250) {  // rescale before overflow
            jcur *= 1e-250;
            jnext *= 1e-250;
            norm *= 1e-250;
            for (double& v : out) v *= 1e-250;
        }
    }
    for (double& v : out) v /= norm;
    return out;
}

}  // namespace

Hamiltonian::Hamiltonian(std::int32_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                         double gamma)
    : n_(n), gamma_(gamma) {
    if (n <= 0) throw invalid_parameter_error("hamiltonian size must be positive");
    if (gamma <= 0.0) throw invalid_parameter_error("gamma must be positive");
    std::vector<int> degree(n, 0);
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n) throw invalid_parameter_error("edge endpoint out of range");
        if (i == j) throw invalid_parameter_error("self-loop edge");
        ++degree[i];
        ++degree[j];
    }
    for (int d : degree) max_degree_ = std::max(max_degree_, d);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(edges.size() * 2 + n);
    for (auto [i, j] : edges) {
        trip.emplace_back(i, j, -gamma);
        trip.emplace_back(j, i, -gamma);
    }
    for (std::int32_t i = 0; i < n; ++i)
        if (degree[i] > 0) trip.emplace_back(i, i, gamma * degree[i]);
    mat_.resize(n, n);
    mat_.setFromTriplets(trip.begin(), trip.end());
    mat_.makeCompressed();
}

void Hamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    const Eigen::VectorXd re = x.real(), im = x.imag();
    y.resize(n_);
    y.real() = mat_ * re;
    y.imag() = mat_ * im;
}

Hamiltonian laplacian(const lattice::LatticePatch& patch, double gamma) {
    return {patch.num_vertices(), patch.edges, gamma};
}

Hamiltonian laplacian(std::int32_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                      double gamma) {
    return {n, edges, gamma};
}

WaveState localized_state(std::int32_t n, std::int32_t origin) {
    if (origin < 0 || origin >= n) throw invalid_parameter_error("origin vertex id out of range");
    WaveState psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(n);
    psi.amplitudes[origin] = 1.0;
    return psi;
}

std::vector<double> probabilities(const WaveState& psi) {
    std::vector<double> p(psi.amplitudes.size());
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) p[i] = std::norm(psi.amplitudes[i]);
    return p;
}

ChebyshevPropagator::ChebyshevPropagator(const Hamiltonian& h, double dt) : h_(&h) {
    // Gershgorin: spec(H) in [0, 2*gamma*max_degree].
    const double radius = h.gamma() * h.max_degree();
    center_ = radius;
    const double u = radius * dt;  // signed half-bandwidth
    phase_ = std::exp(Complex(0.0, -center_ * dt));
    if (u == 0.0) {
        coef_ = {Complex(1.0, 0.0)};
        inv_radius_ = 0.0;
        return;
    }
    inv_radius_ = 1.0 / radius;

    const double a = std::abs(u);
    int kmax = static_cast<int>(a) + 60 + static_cast<int>(15.0 * std::cbrt(a + 1.0));
    std::vector<double> js;
    int order = -1;
    for (int attempt = 0; attempt < 2 && order < 0; ++attempt) {
        js = bessel_j_array(kmax, a);
        double tail = 0.0;
        std::vector<double> tails(kmax + 1);
        for (int k = kmax; k >= 0; --k) {
            tails[k] = tail;
            tail += 2.0 * std::abs(js[k]);
        }
        for (int k = 0; k <= kmax; ++k)
            if (tails[k] < kChebyshevTail) {
                order = k;
                break;
            }
        if (order < 0) kmax = kmax * 2 + 200;
    }
    if (order < 0)
        throw accuracy_error("chebyshev expansion does not converge to the requested tolerance");

    // exp(-i u x) = sum_k (2 - delta_k0) (-i)^k J_k(u) T_k(x); J_k(-a) = (-1)^k J_k(a).
    const Complex step = (u > 0) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    Complex ik(1.0, 0.0);
    coef_.resize(order + 1);
    for (int k = 0; k <= order; ++k) {
        coef_[k] = (k == 0 ? 1.0 : 2.0) * ik * js[k];
        ik *= step;
    }
}

void ChebyshevPropagator::apply_scaled(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    re_ = x.real();
    im_ = x.imag();
    mre_.noalias() = h_->matrix() * re_;
    mim_.noalias() = h_->matrix() * im_;
    y.resize(x.size());
    y.real() = (mre_ - center_ * re_) * inv_radius_;
    y.imag() = (mim_ - center_ * im_) * inv_radius_;
}

void ChebyshevPropagator::step(Eigen::VectorXcd& psi) const {
    const int order = static_cast<int>(coef_.size()) - 1;
    if (order == 0 || inv_radius_ == 0.0) {
        psi *= phase_;
        return;
    }
    acc_ = coef_[0] * psi;
    apply_scaled(psi, t1_);
    acc_ += coef_[1] * t1_;
    t0_ = psi;
    for (int k = 2; k <= order; ++k) {
        apply_scaled(t1_, t2_);
        t2_ = 2.0 * t2_ - t0_;
        acc_ += coef_[k] * t2_;
        t0_.swap(t1_);
        t1_.swap(t2_);
    }
    psi = phase_ * acc_;
}

WaveState evolve(const Hamiltonian& h, const WaveState& psi, double dt) {
    if (psi.amplitudes.size() != h.size()) throw invalid_parameter_error("state size does not match hamiltonian");
    if (std::abs(psi.norm_sq() - 1.0) > 1e-6) throw invalid_parameter_error("state is not normalized");
    WaveState out;
    out.amplitudes = psi.amplitudes;
    out.time = psi.time + dt;
    ChebyshevPropagator prop(h, dt);
    prop.step(out.amplitudes);
    if (std::abs(out.norm_sq() - 1.0) > 1e-10)
        throw accuracy_error("propagation lost unitarity beyond tolerance");
    return out;
}

Eigen::MatrixXcd dense_propagator(const Hamiltonian& h, double t) {
    if (h.size() > kDensePropagatorCap)
        throw resource_limit_error("dense propagator requested beyond the size cap");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h.matrix())};
    if (es.info() != Eigen::Success) throw accuracy_error("eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) phases[i] = std::exp(Complex(0.0, -lam[i] * t));
    const Eigen::MatrixXd& v = es.eigenvectors();
    return v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
}

WaveState evolve_dense(const Hamiltonian& h, const WaveState& psi, double dt) {
    if (h.size() > kDensePropagatorCap)
        throw resource_limit_error("dense propagator requested beyond the size cap");
    if (psi.amplitudes.size() != h.size()) throw invalid_parameter_error("state size does not match hamiltonian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h.matrix())};
    if (es.info() != Eigen::Success) throw accuracy_error("eigendecomposition failed");
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Eigen::VectorXd cr = v.transpose() * psi.amplitudes.real();
    const Eigen::VectorXd ci = v.transpose() * psi.amplitudes.imag();
    Eigen::VectorXcd c(cr.size());
    c.real() = cr;
    c.imag() = ci;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c[i] *= std::exp(Complex(0.0, -es.eigenvalues()[i] * dt));
    WaveState out;
    out.amplitudes.resize(h.size());
    out.amplitudes.real() = v * c.real();
    out.amplitudes.imag() = v * c.imag();
    out.time = psi.time + dt;
    return out;
}

}  // namespace ctqw::spectral
