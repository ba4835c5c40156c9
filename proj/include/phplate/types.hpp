#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace phplate {

using Index = Eigen::Index;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

} // namespace phplate
