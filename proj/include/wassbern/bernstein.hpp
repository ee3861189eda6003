#ifndef WASSBERN_BERNSTEIN_HPP
#define WASSBERN_BERNSTEIN_HPP

#include <vector>

#include <Eigen/Dense>

#include "wassbern/errors.hpp"
#include "wassbern/linalg.hpp"

namespace wassbern::bernstein {

// Binomials overflow 64-bit above this degree.
inline constexpr int kMaxDegree = 60;

// b_{i,N}(t) = C(N,i) (1-t)^{N-i} t^i for i = 0..N.
// The weights are nonnegative and sum to 1 on [0,1].
Eigen::VectorXd basis_eval(int degree, double t);

// Bezier curve value: sum_i b_{i,N}(t) * controls[i].
Eigen::VectorXd mean_at(const std::vector<Eigen::VectorXd>& controls, double t);

// Convex combination of SPD control matrices; the result stays SPD.
linalg::SpdMatrix cov_at(const std::vector<linalg::SpdMatrix>& controls,
                         double t);

}  // namespace wassbern::bernstein

#endif
