#include "nfa/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "nfa/errors.hpp"

namespace nfa {

std::vector<std::vector<std::pair<int, int>>> pairs_by_round(int n) {
    std::vector<std::vector<std::pair<int, int>>> rounds;
    if (n < 2) {
        return rounds;
    }
    // Circle method: one fixed seat, the rest rotate; every round pairs
    // disjoint columns and every unordered pair shows up exactly once.
    int slots = (n % 2 == 0) ? n : n + 1;
    std::vector<int> seat(slots);
    std::iota(seat.begin(), seat.end(), 0);
    rounds.reserve(static_cast<std::size_t>(slots - 1));
    for (int r = 0; r < slots - 1; ++r) {
        std::vector<std::pair<int, int>> round;
        round.reserve(static_cast<std::size_t>(slots / 2));
        for (int i = 0; i < slots / 2; ++i) {
            int a = seat[i];
            int b = seat[slots - 1 - i];
            if (a < n && b < n) { // the padded seat (odd n) is a bye
                round.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
        std::sort(round.begin(), round.end());
        rounds.push_back(std::move(round));
        // Rotate seats 1..slots-1 one step.
        int last = seat[slots - 1];
        for (int i = slots - 1; i > 1; --i) {
            seat[i] = seat[i - 1];
        }
        seat[1] = last;
    }
    return rounds;
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void rotate_rows(double* p, double* q, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        double vp = p[i];
        double vq = q[i];
        p[i] = c * vp - s * vq;
        q[i] = s * vp + c * vq;
    }
}

// Orthogonalizes the columns of b (m x n, m >= n) in place. Work matrices
// are stored transposed so each column is a contiguous row.
struct JacobiState {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<double> w;  // n rows of length m: column j of the working matrix
    std::vector<double> vt; // n rows of length n: column j of V
    double zero_norm = 0.0; // columns at or below this norm count as zero
    int sweeps = 0;
};

JacobiState run_jacobi(const Matrix& b, const SvdOptions& options) {
    JacobiState st;
    st.m = b.rows();
    st.n = b.cols();
    st.w.assign(st.n * st.m, 0.0);
    st.vt.assign(st.n * st.n, 0.0);
    for (std::size_t j = 0; j < st.n; ++j) {
        for (std::size_t i = 0; i < st.m; ++i) {
            st.w[j * st.m + i] = b(i, j);
        }
        st.vt[j * st.n + j] = 1.0;
    }
    // Columns whose mass drops to rounding noise carry no direction
    // information; pairs touching them are treated as orthogonal, otherwise
    // the relative convergence test would chase noise forever.
    st.zero_norm = 10.0 * static_cast<double>(std::max(st.m, st.n)) *
                   std::numeric_limits<double>::epsilon() * frobenius_norm(b);
    if (st.n < 2) {
        return st;
    }
    const double zero_norm_sq = st.zero_norm * st.zero_norm;

    const auto rounds = pairs_by_round(static_cast<int>(st.n));
    std::vector<double> pair_off;
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double max_off = 0.0;
        for (const auto& round : rounds) {
            pair_off.assign(round.size(), 0.0);
            parallel_for(round.size(), options.mode, [&](std::size_t idx) {
                auto [p, q] = round[idx];
                double* wp = st.w.data() + static_cast<std::size_t>(p) * st.m;
                double* wq = st.w.data() + static_cast<std::size_t>(q) * st.m;
                double alpha = dot(wp, wp, st.m);
                double beta = dot(wq, wq, st.m);
                if (alpha <= zero_norm_sq || beta <= zero_norm_sq) {
                    return;
                }
                double gamma = dot(wp, wq, st.m);
                double off = std::abs(gamma) / (std::sqrt(alpha) * std::sqrt(beta));
                pair_off[idx] = off;
                if (off <= options.tolerance) {
                    return;
                }
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                rotate_rows(wp, wq, st.m, c, s);
                rotate_rows(st.vt.data() + static_cast<std::size_t>(p) * st.n,
                            st.vt.data() + static_cast<std::size_t>(q) * st.n, st.n, c, s);
            });
            for (double off : pair_off) {
                max_off = std::max(max_off, off);
            }
        }
        st.sweeps = sweep;
        if (max_off <= options.tolerance) {
            return st;
        }
    }
    raise(ErrorKind::convergence_failure,
          "one-sided Jacobi did not converge within " + std::to_string(options.max_sweeps) + " sweeps");
}

// Fills column `col` with an orthonormal direction so the left factor keeps
// orthonormal columns for zero singular values. Against orthonormal columns
// the residual mass of a unit vector e_i is 1 - row_mass[i], so the freest
// row is the best seed; two Gram-Schmidt passes settle the orthogonality.
void complete_column(Matrix& u, std::size_t col) {
    std::size_t m = u.rows();
    std::size_t best_row = 0;
    double best_mass = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        double mass = 0.0;
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (j != col) {
                mass += u(i, j) * u(i, j);
            }
        }
        if (mass < best_mass) {
            best_mass = mass;
            best_row = i;
        }
    }
    std::vector<double> vec(m, 0.0);
    vec[best_row] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (j == col) {
                continue;
            }
            double proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                proj += vec[i] * u(i, j);
            }
            if (proj != 0.0) {
                for (std::size_t i = 0; i < m; ++i) {
                    vec[i] -= proj * u(i, j);
                }
            }
        }
        double norm_sq = 0.0;
        for (double x : vec) {
            norm_sq += x * x;
        }
        if (norm_sq <= 0.0) {
            raise(ErrorKind::convergence_failure, "failed to complete an orthonormal basis");
        }
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : vec) {
            x *= inv;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        u(i, col) = vec[i];
    }
}

// Flips each singular pair so the largest-magnitude entry of the left
// column is positive. Makes factor signs deterministic across runs.
void canonicalize_signs(Matrix& u, Matrix& v) {
    for (std::size_t j = 0; j < u.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            double mag = std::abs(u(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (u(arg, j) < 0.0) {
            for (std::size_t i = 0; i < u.rows(); ++i) {
                u(i, j) = -u(i, j);
            }
            for (std::size_t i = 0; i < v.rows(); ++i) {
                v(i, j) = -v(i, j);
            }
        }
    }
}

SvdResult factor_tall(const Matrix& b, const SvdOptions& options) {
    JacobiState st = run_jacobi(b, options);
    std::size_t m = st.m;
    std::size_t n = st.n;

    std::vector<double> norms(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = std::sqrt(dot(st.w.data() + j * m, st.w.data() + j * m, m));
        norms[j] = norm <= st.zero_norm ? 0.0 : norm;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b2) { return norms[a] > norms[b2]; });

    SvdResult out;
    out.sweeps = st.sweeps;
    out.sigma.resize(n);
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        std::size_t src = order[jj];
        double sigma = norms[src];
        out.sigma[jj] = sigma;
        const double* wcol = st.w.data() + src * m;
        const double* vcol = st.vt.data() + src * n;
        for (std::size_t i = 0; i < n; ++i) {
            out.v(i, jj) = vcol[i];
        }
        if (sigma > 0.0) {
            double inv = 1.0 / sigma;
            for (std::size_t i = 0; i < m; ++i) {
                out.u(i, jj) = wcol[i] * inv;
            }
        }
    }
    for (std::size_t jj = 0; jj < n; ++jj) {
        if (out.sigma[jj] == 0.0) {
            complete_column(out.u, jj);
        }
    }
    canonicalize_signs(out.u, out.v);
    return out;
}

} // namespace

SvdResult svd_decompose(const Matrix& a, const SvdOptions& options) {
    if (a.rows() == 0 || a.cols() == 0) {
        raise(ErrorKind::domain_error, "cannot decompose an empty matrix");
    }
    for (double x : a.data()) {
        if (!std::isfinite(x)) {
            raise(ErrorKind::domain_error, "matrix entries must be finite");
        }
    }
    if (a.rows() >= a.cols()) {
        return factor_tall(a, options);
    }
    SvdResult t = factor_tall(a.transposed(), options);
    SvdResult out;
    out.sigma = std::move(t.sigma);
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    out.sweeps = t.sweeps;
    return out;
}

Matrix SvdResult::reconstruct() const {
    Matrix out(u.rows(), v.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        for (std::size_t k = 0; k < sigma.size(); ++k) {
            double scale = u(i, k) * sigma[k];
            if (scale == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < v.rows(); ++j) {
                out(i, j) += scale * v(j, k);
            }
        }
    }
    return out;
}

int SvdResult::numerical_rank() const {
    if (sigma.empty() || sigma[0] == 0.0) {
        return 0;
    }
    double cutoff = static_cast<double>(std::max(u.rows(), v.rows())) *
                    std::numeric_limits<double>::epsilon() * sigma[0];
    int rank = 0;
    for (double s : sigma) {
        if (s > cutoff) {
            ++rank;
        }
    }
    return rank;
}

} // namespace nfa
