#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qgrid {

struct WernerParams {
    double fidelity; // overlap with |Phi+>, in [1/4, 1]
    double weight;   // w = (4F - 1) / 3, in [0, 1]
};

WernerParams werner_from_fidelity(double fidelity);
WernerParams werner_from_weight(double weight);

// Pauli corrections accumulated from canonicalized measurement outcomes.
// They commute with everything we compute from the diagonal (they permute
// basis labels), but are tracked so a physical run could apply them.
struct PauliCorrection {
    bool x = false;
    bool z = false;
};

// An n-qubit state diagonal in the GHZ basis. Basis labels are packed as
//   index = (z << (n-1)) | xbits
// where xbits bit k refers to qubit position k+1; position 0 is the anchor
// qubit (the one carrying the Z label). Coefficients are probabilities:
// clamped at -1e-12, renormalized to sum 1.
class GHZDiagonalState {
public:
    GHZDiagonalState(std::vector<int> qubit_ids, std::vector<double> coeffs);

    int num_qubits() const { return static_cast<int>(qubit_ids_.size()); }
    const std::vector<int>& qubit_ids() const { return qubit_ids_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    // Position of a qubit id within this fragment; throws if absent.
    int position_of(int qubit_id) const;
    bool has_qubit(int qubit_id) const;

    std::size_t index_of(int z, std::uint32_t xbits) const {
        return (static_cast<std::size_t>(z) << (num_qubits() - 1)) | xbits;
    }
    double coeff(int z, std::uint32_t xbits) const {
        return coeffs_[index_of(z, xbits)];
    }

    std::map<int, PauliCorrection>& pauli_frame() { return frame_; }
    const std::map<int, PauliCorrection>& pauli_frame() const { return frame_; }

    // Folds the Pauli frame into the coefficients (frame becomes empty).
    GHZDiagonalState with_frame_applied() const;

private:
    std::vector<int> qubit_ids_;
    std::vector<double> coeffs_;
    std::map<int, PauliCorrection> frame_;
};

// Two-qubit Werner link as a GHZ(2)-diagonal (= Bell-diagonal) state.
GHZDiagonalState bell_from_werner(const WernerParams& params,
                                  int qubit_a, int qubit_b);

// State produced by an n-arm GHZ swap over Werner links of equal weight w
// (canonical all-zeros outcome). Closed form; qubit ids are the out-qubit
// ids, one per arm, with ids[0] becoming the anchor.
GHZDiagonalState ghz_swap_equal(int n, double weight,
                                const std::vector<int>& qubit_ids);
GHZDiagonalState ghz_swap_equal(int n, double weight);

// Same, but links may have different weights.
GHZDiagonalState ghz_swap_mixed(const std::vector<double>& weights,
                                const std::vector<int>& qubit_ids);
GHZDiagonalState ghz_swap_mixed(const std::vector<double>& weights);

// Single-qubit X-basis measurement on `position`; requires n >= 3 (a GHZ
// state cannot drop below two qubits here). Returns the canonical |+>
// outcome state; if outcome == 1 the |-> branch is canonicalized by
// recording a Z correction on the new anchor. Both outcomes occur with
// probability 1/2.
GHZDiagonalState x_measure(const GHZDiagonalState& state, int position,
                           int outcome);

// General GHZ swap fusing several fragments: one qubit of each fragment is
// measured out (the fragment's entry in `measured_positions`), and the
// remaining qubits join a single GHZ-diagonal state. The first fragment's
// anchor-most surviving qubit becomes the new anchor. Canonical all-zeros
// outcome; every outcome has probability 1 / 2^m for m fragments.
GHZDiagonalState fuse(const std::vector<const GHZDiagonalState*>& fragments,
                      const std::vector<int>& measured_positions);

// Convenience wrapper for a node-local swap: fuses `fragments`, measuring
// out in each the unique qubit whose id appears in `node_memories`.
GHZDiagonalState merge_swap(const std::vector<const GHZDiagonalState*>& fragments,
                            const std::vector<int>& node_memories);

// I_c = 1 - H(coeffs), base-2 Shannon entropy, 0 log 0 = 0. May be negative.
double coherent_information(const GHZDiagonalState& state);

double shannon_entropy_bits(std::span<const double> probs);

} // namespace qgrid
