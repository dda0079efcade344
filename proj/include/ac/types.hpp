#pragma once

#include <Eigen/Dense>

namespace ac {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

}  // namespace ac
