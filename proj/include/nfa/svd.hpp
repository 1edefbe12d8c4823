#pragma once

#include <vector>

#include "nfa/matrix.hpp"
#include "nfa/parallel.hpp"

namespace nfa {

struct SvdOptions {
    // Convergence threshold on the normalized off-diagonal mass
    // max |w_p . w_q| / (|w_p| |w_q|) over column pairs.
    double tolerance = 1e-10;
    int max_sweeps = 100;
    ExecMode mode = default_exec_mode();
};

// Thin factorization a = u * diag(sigma) * v^T with r = min(rows, cols):
// u is rows x r, v is cols x r, both with orthonormal columns; sigma is
// non-negative and non-increasing. Columns belonging to the null space are
// completed to an orthonormal basis and get sigma = 0.
struct SvdResult {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
    int sweeps = 0;

    Matrix reconstruct() const;
    // Number of singular values above the numerical-rank cutoff.
    int numerical_rank() const;
};

// One-sided Jacobi (Hestenes) SVD. Column pairs follow a fixed round-robin
// schedule whose rounds consist of disjoint pairs, so the OpenMP mode
// rotates pairs of a round concurrently and still produces bit-identical
// factors to the serial mode. Throws ConvergenceFailure when the sweep cap
// is exhausted.
SvdResult svd_decompose(const Matrix& a, const SvdOptions& options = {});

// Round-robin tournament: pairs_by_round(n)[r] lists disjoint (p, q) column
// pairs, p < q; every unordered pair appears in exactly one round.
std::vector<std::vector<std::pair<int, int>>> pairs_by_round(int n);

} // namespace nfa
