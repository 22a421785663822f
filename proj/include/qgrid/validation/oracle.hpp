#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qgrid/protocol.hpp"
#include "qgrid/state_algebra.hpp"

namespace qgrid::validation {

// Brute-force dense density-matrix model used to cross-check the
// GHZ-diagonal fast path. Qubit position 0 is the most significant index
// bit; position 0 is the anchor, matching GHZDiagonalState.
struct DenseState {
    std::vector<int> qubit_ids;
    Eigen::MatrixXcd rho;

    int num_qubits() const { return static_cast<int>(qubit_ids.size()); }
    int position_of(int qubit_id) const;
};

inline constexpr int kMaxOracleQubits = 10;

DenseState werner_dense(double fidelity, int id_a, int id_b);
DenseState tensor(const DenseState& a, const DenseState& b);

// Amplitudes of the GHZ-basis vector with labels (z, xbits) on n qubits.
Eigen::VectorXcd ghz_basis_vector(int n, int z, std::uint32_t xbits);

// Projects the listed qubit positions onto |vec> (first listed position is
// the most significant bit of vec). Returns the normalized remaining state
// and the outcome probability.
std::pair<DenseState, double> project(const DenseState& state,
                                      const std::vector<int>& positions,
                                      const Eigen::VectorXcd& vec);

// Diagonal of the state in the GHZ basis; optionally reports the largest
// off-diagonal magnitude (should be ~0 for states built by the protocol).
std::vector<double> ghz_diag_coeffs(const DenseState& state,
                                    double* max_offdiag = nullptr);

// run_plan backend replaying rounds against the dense model.
struct DenseBackend {
    using State = DenseState;
    State make_link(const PlannedLink& l);
    State fuse(const std::vector<const State*>& parts,
               const std::vector<int>& positions);
    State x_measure(const State& s, int pos);
    int size(const State& s) const { return s.num_qubits(); }
    const std::vector<int>& qubits(const State& s) const {
        return s.qubit_ids;
    }
    int position_of(const State& s, int mem) const {
        return s.position_of(mem);
    }
    GHZDiagonalState finish(const State& s) const;
};

} // namespace qgrid::validation
