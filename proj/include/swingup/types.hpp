#pragma once

#include <Eigen/Core>

namespace swingup {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace swingup
