#include "nfa/matrix.hpp"

#include <cmath>

#include "nfa/errors.hpp"

namespace nfa {

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        raise(ErrorKind::domain_error, "matrix product dimension mismatch");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        raise(ErrorKind::domain_error, "frobenius_distance dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        double d = a.data()[i] - b.data()[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (double v : a.data()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

double column_norm(const Matrix& a, std::size_t col) {
    double sum = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        sum += a(r, col) * a(r, col);
    }
    return std::sqrt(sum);
}

double row_norm(const Matrix& a, std::size_t row) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        sum += a(row, c) * a(row, c);
    }
    return std::sqrt(sum);
}

} // namespace nfa
