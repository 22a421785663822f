#include "qgrid/validation/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace qgrid::validation {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd bell_projector(int z, int x) {
    VectorXcd v = VectorXcd::Zero(4);
    const double s = 1.0 / std::sqrt(2.0);
    if (x == 0) {
        v(0b00) = s;
        v(0b11) = z ? -s : s;
    } else {
        v(0b01) = s;
        v(0b10) = z ? -s : s;
    }
    return v * v.adjoint();
}

} // namespace

int DenseState::position_of(int qubit_id) const {
    for (int i = 0; i < num_qubits(); ++i)
        if (qubit_ids[i] == qubit_id) return i;
    throw std::invalid_argument("qubit id not in dense state");
}

DenseState werner_dense(double fidelity, int id_a, int id_b) {
    const double rest = (1.0 - fidelity) / 3.0;
    MatrixXcd rho = fidelity * bell_projector(0, 0);
    rho += rest * (bell_projector(0, 1) + bell_projector(1, 0) +
                   bell_projector(1, 1));
    return {{id_a, id_b}, std::move(rho)};
}

DenseState tensor(const DenseState& a, const DenseState& b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > kMaxOracleQubits)
        throw std::domain_error("dense oracle state too large");
    DenseState out;
    out.qubit_ids = a.qubit_ids;
    out.qubit_ids.insert(out.qubit_ids.end(), b.qubit_ids.begin(),
                         b.qubit_ids.end());
    const auto da = a.rho.rows(), db = b.rho.rows();
    out.rho.resize(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.rho.block(i * db, j * db, db, db) = a.rho(i, j) * b.rho;
    return out;
}

Eigen::VectorXcd ghz_basis_vector(int n, int z, std::uint32_t xbits) {
    const std::size_t dim = std::size_t{1} << n;
    VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    std::size_t idx = 0; // anchor bit (position 0) = 0
    for (int p = 1; p < n; ++p)
        if ((xbits >> (p - 1)) & 1) idx |= std::size_t{1} << (n - 1 - p);
    const double s = 1.0 / std::sqrt(2.0);
    v(static_cast<Eigen::Index>(idx)) = s;
    v(static_cast<Eigen::Index>((dim - 1) ^ idx)) = z ? -s : s;
    return v;
}

std::pair<DenseState, double> project(const DenseState& state,
                                      const std::vector<int>& positions,
                                      const Eigen::VectorXcd& vec) {
    const int n = state.num_qubits();
    const int k = static_cast<int>(positions.size());
    if (vec.size() != (Eigen::Index{1} << k))
        throw std::invalid_argument("projector dimension mismatch");
    std::vector<bool> keep(n, true);
    for (int p : positions) keep[p] = false;

    DenseState out;
    for (int p = 0; p < n; ++p)
        if (keep[p]) out.qubit_ids.push_back(state.qubit_ids[p]);
    const int nr = n - k;
    const std::size_t dim_out = std::size_t{1} << nr;

    // Bit of the full index corresponding to a qubit position.
    auto full_bit = [&](int pos) { return n - 1 - pos; };
    std::vector<int> rem_positions;
    for (int p = 0; p < n; ++p)
        if (keep[p]) rem_positions.push_back(p);

    auto full_index = [&](std::size_t rem, std::size_t sub) {
        std::size_t idx = 0;
        for (int i = 0; i < nr; ++i)
            if ((rem >> (nr - 1 - i)) & 1)
                idx |= std::size_t{1} << full_bit(rem_positions[i]);
        for (int i = 0; i < k; ++i)
            if ((sub >> (k - 1 - i)) & 1)
                idx |= std::size_t{1} << full_bit(positions[i]);
        return idx;
    };

    std::vector<Eigen::Index> nz;
    for (Eigen::Index s = 0; s < vec.size(); ++s)
        if (std::abs(vec(s)) > 0.0) nz.push_back(s);

    out.rho = MatrixXcd::Zero(static_cast<Eigen::Index>(dim_out),
                              static_cast<Eigen::Index>(dim_out));
    for (std::size_t oi = 0; oi < dim_out; ++oi) {
        for (std::size_t oj = 0; oj < dim_out; ++oj) {
            std::complex<double> acc = 0.0;
            for (Eigen::Index s : nz)
                for (Eigen::Index t : nz)
                    acc += std::conj(vec(s)) * vec(t) *
                           state.rho(
                               static_cast<Eigen::Index>(full_index(oi, s)),
                               static_cast<Eigen::Index>(full_index(oj, t)));
            out.rho(static_cast<Eigen::Index>(oi),
                    static_cast<Eigen::Index>(oj)) = acc;
        }
    }
    double prob = out.rho.trace().real();
    if (prob > 0.0) out.rho /= prob;
    return {std::move(out), prob};
}

std::vector<double> ghz_diag_coeffs(const DenseState& state,
                                    double* max_offdiag) {
    const int n = state.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<VectorXcd> basis;
    basis.reserve(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        int z = static_cast<int>(idx >> (n - 1));
        std::uint32_t x =
            static_cast<std::uint32_t>(idx) & ((1u << (n - 1)) - 1);
        basis.push_back(ghz_basis_vector(n, z, x));
    }
    std::vector<double> coeffs(dim);
    for (std::size_t i = 0; i < dim; ++i)
        coeffs[i] = (basis[i].adjoint() * state.rho * basis[i])(0, 0).real();
    if (max_offdiag) {
        *max_offdiag = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) {
                double v = std::abs(
                    (basis[i].adjoint() * state.rho * basis[j])(0, 0));
                *max_offdiag = std::max(*max_offdiag, v);
            }
    }
    return coeffs;
}

DenseState DenseBackend::make_link(const PlannedLink& l) {
    return werner_dense(werner_from_weight(l.weight).fidelity, l.mem_a,
                        l.mem_b);
}

DenseState DenseBackend::fuse(const std::vector<const State*>& parts,
                              const std::vector<int>& positions) {
    DenseState combined = *parts[0];
    std::vector<int> measured{positions[0]};
    for (std::size_t s = 1; s < parts.size(); ++s) {
        int offset = combined.num_qubits();
        combined = tensor(combined, *parts[s]);
        measured.push_back(offset + positions[s]);
    }
    const int m = static_cast<int>(measured.size());
    auto [post, prob] = project(combined, measured,
                                ghz_basis_vector(m, 0, 0));
    if (prob <= 0.0)
        throw std::logic_error("dense fuse outcome has zero probability");
    return std::move(post);
}

DenseState DenseBackend::x_measure(const State& s, int pos) {
    VectorXcd plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto [post, prob] = project(s, {pos}, plus);
    if (prob <= 0.0)
        throw std::logic_error("dense X measurement has zero probability");
    return std::move(post);
}

GHZDiagonalState DenseBackend::finish(const State& s) const {
    return GHZDiagonalState(s.qubit_ids, ghz_diag_coeffs(s));
}

} // namespace qgrid::validation
