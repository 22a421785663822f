#include "qgrid/state_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qgrid {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kSumTol = 1e-9;

int popcount(std::uint32_t v) { return std::popcount(v); }

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// In-place Walsh-Hadamard transform over all label bits; self-inverse up to
// a factor 2^n.
void wht(std::vector<double>& v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

} // namespace

WernerParams werner_from_fidelity(double fidelity) {
    if (fidelity < 0.25 || fidelity > 1.0)
        throw std::domain_error("werner fidelity outside [1/4, 1]");
    return {fidelity, (4.0 * fidelity - 1.0) / 3.0};
}

WernerParams werner_from_weight(double weight) {
    if (weight < 0.0 || weight > 1.0)
        throw std::domain_error("werner weight outside [0, 1]");
    return {(3.0 * weight + 1.0) / 4.0, weight};
}

GHZDiagonalState::GHZDiagonalState(std::vector<int> qubit_ids,
                                   std::vector<double> coeffs)
    : qubit_ids_(std::move(qubit_ids)), coeffs_(std::move(coeffs)) {
    const int n = static_cast<int>(qubit_ids_.size());
    if (n < 2) throw std::domain_error("GHZ-diagonal state needs >= 2 qubits");
    if (coeffs_.size() != (std::size_t{1} << n))
        throw std::invalid_argument("coefficient vector size != 2^n");
    auto sorted = qubit_ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("duplicate qubit id");
    double sum = 0.0;
    for (double& c : coeffs_) {
        if (c < -kClampTol)
            throw std::domain_error("negative GHZ-basis coefficient");
        if (c < 0.0) c = 0.0;
        sum += c;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw std::domain_error("GHZ-basis coefficients do not sum to 1");
    for (double& c : coeffs_) c /= sum;
}

int GHZDiagonalState::position_of(int qubit_id) const {
    for (int i = 0; i < num_qubits(); ++i)
        if (qubit_ids_[i] == qubit_id) return i;
    throw std::invalid_argument("qubit id not in state");
}

bool GHZDiagonalState::has_qubit(int qubit_id) const {
    return std::find(qubit_ids_.begin(), qubit_ids_.end(), qubit_id) !=
           qubit_ids_.end();
}

GHZDiagonalState GHZDiagonalState::with_frame_applied() const {
    const int n = num_qubits();
    const std::uint32_t xmask = (1u << (n - 1)) - 1;
    bool flip_z = false;
    std::uint32_t flip_x = 0;
    bool complement = false;
    for (const auto& [id, corr] : frame_) {
        int pos = position_of(id);
        if (corr.z) flip_z = !flip_z;
        if (corr.x) {
            if (pos == 0)
                complement = !complement;
            else
                flip_x ^= 1u << (pos - 1);
        }
    }
    std::vector<double> out(coeffs_.size());
    for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) {
        int z = static_cast<int>(idx >> (n - 1));
        std::uint32_t x = static_cast<std::uint32_t>(idx) & xmask;
        x ^= flip_x;
        if (complement) x = ~x & xmask;
        int z2 = z ^ (flip_z ? 1 : 0);
        out[(static_cast<std::size_t>(z2) << (n - 1)) | x] = coeffs_[idx];
    }
    return GHZDiagonalState(qubit_ids_, std::move(out));
}

GHZDiagonalState bell_from_werner(const WernerParams& params,
                                  int qubit_a, int qubit_b) {
    double f = params.fidelity;
    double rest = (1.0 - f) / 3.0;
    // labels (z,x): Phi+=(0,0), Psi+=(0,1), Phi-=(1,0), Psi-=(1,1)
    return GHZDiagonalState({qubit_a, qubit_b}, {f, rest, rest, rest});
}

GHZDiagonalState ghz_swap_equal(int n, double weight,
                                const std::vector<int>& qubit_ids) {
    if (n < 2) throw std::domain_error("ghz_swap_equal needs n >= 2");
    if (static_cast<int>(qubit_ids.size()) != n)
        throw std::invalid_argument("qubit id count != n");
    (void)werner_from_weight(weight);
    const double w = weight;
    // A label with x-weight p has exactly two preimage arm sets (of sizes p
    // and n-p); each contributes a tail over how many further arms are mixed.
    auto spread = [&](int t) {
        double s = 0.0;
        for (int m = std::max(t, 1); m <= n; ++m)
            s += binom(n - t, m - t) * std::pow(w, n - m) *
                 std::pow(1.0 - w, m) / std::pow(2.0, m + 1);
        return s;
    };
    std::vector<double> by_weight(n);
    for (int p = 0; p < n; ++p) by_weight[p] = spread(p) + spread(n - p);
    const std::size_t dim = std::size_t{1} << n;
    const std::uint32_t xmask = (1u << (n - 1)) - 1;
    std::vector<double> coeffs(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::uint32_t x = static_cast<std::uint32_t>(idx) & xmask;
        coeffs[idx] = by_weight[popcount(x)];
        if (idx == 0) coeffs[idx] += std::pow(w, n);
    }
    return GHZDiagonalState(qubit_ids, std::move(coeffs));
}

GHZDiagonalState ghz_swap_equal(int n, double weight) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ghz_swap_equal(n, weight, ids);
}

GHZDiagonalState ghz_swap_mixed(const std::vector<double>& weights,
                                const std::vector<int>& qubit_ids) {
    const int n = static_cast<int>(weights.size());
    if (n < 2) throw std::domain_error("ghz_swap_mixed needs n >= 2");
    if (static_cast<int>(qubit_ids.size()) != n)
        throw std::invalid_argument("qubit id count != n");
    for (double w : weights) (void)werner_from_weight(w);
    const std::size_t dim = std::size_t{1} << n;
    const std::uint32_t xmask = (1u << (n - 1)) - 1;
    std::vector<double> coeffs(dim, 0.0);
    // Sum over which arms contribute their maximally mixed part (set M),
    // then over the label spread T within M.
    for (std::uint32_t M = 0; M < (1u << n); ++M) {
        double wM = 1.0;
        for (int i = 0; i < n; ++i)
            wM *= (M >> i & 1) ? (1.0 - weights[i]) : weights[i];
        if (wM == 0.0) continue;
        if (M == 0) {
            coeffs[0] += wM;
            continue;
        }
        const int mbits = popcount(M);
        const double share = wM / std::pow(2.0, mbits + 1);
        for (std::uint32_t T = M;; T = (T - 1) & M) {
            std::uint32_t x;
            if (T & 1u) // anchor in T: use the complement representative
                x = ~(T >> 1) & xmask;
            else
                x = T >> 1;
            coeffs[x] += share;
            coeffs[(std::size_t{1} << (n - 1)) | x] += share;
            if (T == 0) break;
        }
    }
    return GHZDiagonalState(qubit_ids, std::move(coeffs));
}

GHZDiagonalState ghz_swap_mixed(const std::vector<double>& weights) {
    std::vector<int> ids(weights.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ghz_swap_mixed(weights, ids);
}

GHZDiagonalState x_measure(const GHZDiagonalState& state, int position,
                           int outcome) {
    const int n = state.num_qubits();
    if (n < 3)
        throw std::domain_error("x_measure requires a state of >= 3 qubits");
    if (position < 0 || position >= n)
        throw std::invalid_argument("x_measure position out of range");
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("x_measure outcome must be 0 or 1");

    const auto& c = state.coeffs();
    const int nn = n - 1;
    const std::size_t dim_out = std::size_t{1} << nn;
    std::vector<double> out(dim_out, 0.0);
    std::vector<int> ids;
    ids.reserve(nn);

    if (position >= 1) {
        for (int i = 0; i < n; ++i)
            if (i != position) ids.push_back(state.qubit_ids()[i]);
        const int bit = position - 1;
        const std::uint32_t low = (1u << bit) - 1;
        for (std::size_t idx = 0; idx < dim_out; ++idx) {
            int z = static_cast<int>(idx >> (nn - 1));
            std::uint32_t x = static_cast<std::uint32_t>(idx) &
                              ((1u << (nn - 1)) - 1);
            std::uint32_t hi = (x & ~low) << 1;
            std::uint32_t base = (x & low) | hi;
            std::size_t zoff = std::size_t{z} << (n - 1);
            out[idx] = c[zoff | base] + c[zoff | base | (1u << bit)];
        }
    } else {
        // Anchor measured: the next qubit becomes the anchor; the new x bit
        // of each remaining qubit is its old bit xored with old bit 0.
        for (int i = 1; i < n; ++i) ids.push_back(state.qubit_ids()[i]);
        for (std::size_t idx = 0; idx < dim_out; ++idx) {
            int z = static_cast<int>(idx >> (nn - 1));
            std::uint32_t x = static_cast<std::uint32_t>(idx) &
                              ((1u << (nn - 1)) - 1);
            std::size_t zoff = std::size_t{z} << (n - 1);
            std::uint32_t pre0 = x << 1;              // old bit 0 = 0
            std::uint32_t pre1 = ((~x << 1) | 1u) &
                                 ((1u << (n - 1)) - 1); // old bit 0 = 1
            out[idx] = c[zoff | pre0] + c[zoff | pre1];
        }
    }

    GHZDiagonalState result(std::move(ids), std::move(out));
    result.pauli_frame() = state.pauli_frame();
    const int measured_id = state.qubit_ids()[position];
    bool z_flip = (outcome == 1); // |-> branch differs by a phase flip
    if (auto it = result.pauli_frame().find(measured_id);
        it != result.pauli_frame().end()) {
        // A pending Z on the measured qubit survives as a Z on the anchor;
        // a pending X only flips the (discarded) outcome bit.
        if (it->second.z) z_flip = !z_flip;
        result.pauli_frame().erase(it);
    }
    if (z_flip) {
        auto& corr = result.pauli_frame()[result.qubit_ids()[0]];
        corr.z = !corr.z;
    }
    return result;
}

GHZDiagonalState fuse(const std::vector<const GHZDiagonalState*>& fragments,
                      const std::vector<int>& measured_positions) {
    const int m = static_cast<int>(fragments.size());
    if (m < 2) throw std::invalid_argument("fuse needs >= 2 fragments");
    if (measured_positions.size() != fragments.size())
        throw std::invalid_argument("one measured position per fragment");

    struct Surv {
        int frag;
        int pos;
    };
    std::vector<Surv> out_qubits;
    std::vector<int> out_ids;
    for (int s = 0; s < m; ++s) {
        const auto& st = *fragments[s];
        int q = measured_positions[s];
        if (q < 0 || q >= st.num_qubits())
            throw std::invalid_argument("measured position out of range");
        for (int p = 0; p < st.num_qubits(); ++p) {
            if (p == q) continue;
            out_qubits.push_back({s, p});
            out_ids.push_back(st.qubit_ids()[p]);
        }
    }
    const int n_out = static_cast<int>(out_qubits.size());
    if (n_out < 2) throw std::domain_error("fused state would have < 2 qubits");
    if (n_out > 24) throw std::domain_error("fused state too large");

    // Per-fragment correlator tables.
    std::vector<std::vector<double>> ts(m);
    for (int s = 0; s < m; ++s) {
        ts[s] = fragments[s]->coeffs();
        wht(ts[s]);
    }

    // Output y-bit index for each surviving non-anchor qubit.
    // out_qubits[0] is the new anchor (first survivor of fragment 0).
    const int p0 = out_qubits[0].pos;
    const std::size_t dim_out = std::size_t{1} << n_out;
    std::vector<double> tout(dim_out);
    const std::uint32_t ymask = (1u << (n_out - 1)) - 1;
    for (std::size_t idx = 0; idx < dim_out; ++idx) {
        const int a = static_cast<int>(idx >> (n_out - 1));
        const std::uint32_t y = static_cast<std::uint32_t>(idx) & ymask;
        const int Y = popcount(y) & 1;
        double prod = 1.0;
        for (int s = 0; s < m && prod != 0.0; ++s) {
            const int ns = fragments[s]->num_qubits();
            std::uint32_t ys = 0;
            int Ys = 0;
            // Surviving qubits of fragment s occupy a contiguous run of
            // output slots; walk all survivors once.
            for (int r = 0; r < n_out; ++r) {
                if (out_qubits[r].frag != s || r == 0) continue;
                int yb = (y >> (r - 1)) & 1;
                Ys ^= yb;
                if (out_qubits[r].pos >= 1 && yb)
                    ys ^= 1u << (out_qubits[r].pos - 1);
            }
            const int q = measured_positions[s];
            if (s == 0) {
                int yq = Ys ^ Y;
                if (q >= 1 && yq) ys ^= 1u << (q - 1);
                if (p0 >= 1 && Y) ys ^= 1u << (p0 - 1);
            } else if (q >= 1 && Ys) {
                ys ^= 1u << (q - 1);
            }
            prod *= ts[s][(std::size_t{static_cast<std::size_t>(a)}
                           << (ns - 1)) |
                          ys];
        }
        tout[idx] = prod;
    }
    wht(tout);
    double sum = 0.0;
    for (double& v : tout) {
        v /= static_cast<double>(dim_out);
        if (v < 0.0 && v > -kClampTol) v = 0.0;
        sum += v;
    }
    for (double& v : tout) v /= sum;

    GHZDiagonalState result(std::move(out_ids), std::move(tout));
    // Frames of surviving qubits carry over; a Z pending on a measured
    // qubit flips the joint parity and moves to the new anchor.
    bool z_carry = false;
    for (int s = 0; s < m; ++s) {
        const int measured_id =
            fragments[s]->qubit_ids()[measured_positions[s]];
        for (const auto& [id, corr] : fragments[s]->pauli_frame()) {
            if (id == measured_id) {
                if (corr.x)
                    throw std::logic_error(
                        "pending X correction on a fused qubit");
                if (corr.z) z_carry = !z_carry;
            } else {
                result.pauli_frame()[id] = corr;
            }
        }
    }
    if (z_carry) {
        auto& corr = result.pauli_frame()[result.qubit_ids()[0]];
        corr.z = !corr.z;
    }
    return result;
}

GHZDiagonalState merge_swap(const std::vector<const GHZDiagonalState*>& fragments,
                            const std::vector<int>& node_memories) {
    std::vector<int> positions;
    positions.reserve(fragments.size());
    for (const auto* frag : fragments) {
        int found = -1;
        for (int mem : node_memories) {
            if (frag->has_qubit(mem)) {
                if (found >= 0)
                    throw std::logic_error(
                        "fragment holds two memories of the swapping node");
                found = frag->position_of(mem);
            }
        }
        if (found < 0)
            throw std::invalid_argument(
                "fragment has no memory at the swapping node");
        positions.push_back(found);
    }
    return fuse(fragments, positions);
}

double shannon_entropy_bits(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double coherent_information(const GHZDiagonalState& state) {
    return 1.0 - shannon_entropy_bits(state.coeffs());
}

} // namespace qgrid
