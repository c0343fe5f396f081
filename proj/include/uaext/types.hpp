#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace uaext {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

using IndexList = std::vector<std::size_t>;

inline constexpr double kDefaultMergeTol = 1e-8;
inline constexpr double kSupportTol = 1e-12;
inline constexpr double kProbabilityTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-9;

}  // namespace uaext
