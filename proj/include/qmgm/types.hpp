#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qmgm {

using Index = Eigen::Index;

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;
using RowMatX = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not produce a usable result (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmgm
