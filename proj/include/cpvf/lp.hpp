#pragma once

#include <optional>
#include <vector>

namespace cpvf {

// maximize c.x subject to A x <= b, x >= 0 (dense simplex, Bland's rule).
struct LinearProgram {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpSolution solve_lp(const LinearProgram& lp);

}  // namespace cpvf
