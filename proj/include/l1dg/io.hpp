#pragma once

#include <Eigen/Sparse>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "l1dg/errors.hpp"

namespace l1dg {

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

/// Coordinate (row col value) text format.
inline std::string sparse_to_coo(const Eigen::SparseMatrix<double>& M) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
  for (int k = 0; k < M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
  return os.str();
}

inline std::string vector_to_text(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << v[i] << "\n";
  return os.str();
}

inline std::string error_report_csv(const ErrorReport& report) {
  std::ostringstream os;
  os << "N,l2,order_l2,h1,order_h1,h2,order_h2,q_l2,order_q,linf,residual2,iterations,converged\n";
  os << std::setprecision(10);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    auto order = [&](double ErrorRow::* field) -> std::string {
      if (i == 0) return "";
      const double prev = report.rows[i - 1].*field;
      std::ostringstream o;
      o << std::setprecision(4) << std::log2(prev / (r.*field));
      return o.str();
    };
    os << r.N << "," << r.l2 << "," << order(&ErrorRow::l2) << "," << r.h1 << ","
       << order(&ErrorRow::h1) << "," << r.h2 << "," << order(&ErrorRow::h2) << "," << r.q_l2 << ","
       << order(&ErrorRow::q_l2) << "," << r.linf << "," << r.residual2 << "," << r.iterations << ","
       << (r.converged ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace l1dg
