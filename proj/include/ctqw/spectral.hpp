#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ctqw/lattice.hpp"

namespace ctqw::spectral {

using Complex = std::complex<double>;

// Graph Laplacian Hamiltonian H = gamma * (D - A), stored sparse.  Symmetric,
// positive semidefinite, rows sum to zero; an isolated vertex contributes an
// all-zero row.
class Hamiltonian {
public:
    Hamiltonian() = default;
    Hamiltonian(std::int32_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                double gamma);

    std::int32_t size() const { return n_; }
    double gamma() const { return gamma_; }
    int max_degree() const { return max_degree_; }
    const Eigen::SparseMatrix<double>& matrix() const { return mat_; }

    // y = H x for a complex vector, via two real mat-vecs.
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

private:
    std::int32_t n_ = 0;
    double gamma_ = 1.0;
    int max_degree_ = 0;
    Eigen::SparseMatrix<double> mat_;
};

Hamiltonian laplacian(const lattice::LatticePatch& patch, double gamma);
Hamiltonian laplacian(std::int32_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
                      double gamma);

struct WaveState {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;

    double norm_sq() const { return amplitudes.squaredNorm(); }
};

WaveState localized_state(std::int32_t n, std::int32_t origin);

std::vector<double> probabilities(const WaveState& psi);

// Applies exp(-i H dt) via a Chebyshev expansion over the Gershgorin interval
// [0, 2*gamma*max_degree].  The truncation order is chosen so the dropped
// coefficient tail is below kChebyshevTail; if the expansion cannot reach that
// bound, or the result drifts off unit norm by more than 1e-10, an
// accuracy_error is thrown rather than returning a degraded state.
WaveState evolve(const Hamiltonian& h, const WaveState& psi, double dt);

inline constexpr double kChebyshevTail = 1e-12;

// Reusable stepper for evolving one state across many equal time steps
// (coefficients are computed once).
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const Hamiltonian& h, double dt);
    void step(Eigen::VectorXcd& psi) const;
    int order() const { return static_cast<int>(coef_.size()) - 1; }

private:
    const Hamiltonian* h_;
    double center_ = 0.0;
    double inv_radius_ = 0.0;
    Complex phase_{1.0, 0.0};
    std::vector<Complex> coef_;

    mutable Eigen::VectorXcd t0_, t1_, t2_, acc_;
    mutable Eigen::VectorXd re_, im_, mre_, mim_;

    void apply_scaled(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
};

// Exact dense propagator U = V exp(-i Lambda t) V^T from a full
// eigendecomposition; the reference backend for cross-checking evolve().
// Refuses sizes above kDensePropagatorCap.
inline constexpr std::int32_t kDensePropagatorCap = 4096;

Eigen::MatrixXcd dense_propagator(const Hamiltonian& h, double t);

// Same eigendecomposition route without forming the full matrix.
WaveState evolve_dense(const Hamiltonian& h, const WaveState& psi, double dt);

}  // namespace ctqw::spectral
