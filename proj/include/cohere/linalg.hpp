#ifndef COHERE_LINALG_HPP
#define COHERE_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace cohere {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Zero-pads a vector to dimension d (d >= v.size()).
inline CVector zero_padded(const CVector& v, Eigen::Index d) {
  CVector out = CVector::Zero(d);
  out.head(v.size()) = v;
  return out;
}

}  // namespace cohere

#endif  // COHERE_LINALG_HPP
