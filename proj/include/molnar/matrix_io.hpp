#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "molnar/errors.hpp"

namespace molnar {

// Matrix text format: a header line `dim n`, then n rows of n entries in
// row-major order, each entry a `re,im` pair, entries separated by spaces.

inline void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
    os << "dim " << m.rows() << "\n";
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
            os << (j ? " " : "") << buf;
        }
        os << "\n";
    }
}

inline Eigen::MatrixXcd read_matrix(std::istream& is) {
    std::string tag;
    long n = 0;
    if (!(is >> tag >> n) || tag != "dim" || n <= 0)
        throw domain_error("read_matrix: expected header line 'dim n'");
    Eigen::MatrixXcd m(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            std::string cell;
            if (!(is >> cell))
                throw domain_error("read_matrix: truncated input at row " + std::to_string(i));
            const auto comma = cell.find(',');
            if (comma == std::string::npos)
                throw domain_error("read_matrix: entry '" + cell + "' is not a re,im pair");
            try {
                m(i, j) = std::complex<double>(std::stod(cell.substr(0, comma)),
                                               std::stod(cell.substr(comma + 1)));
            } catch (const std::exception&) {
                throw domain_error("read_matrix: cannot parse entry '" + cell + "'");
            }
        }
    return m;
}

} // namespace molnar
