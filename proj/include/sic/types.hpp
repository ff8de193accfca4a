#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sic {

// Raised for malformed inputs: bad files, invalid distributions, dimension
// mismatches, contract violations on user-supplied data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a constrained solve has no feasible point.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense row-major matrix. Small alphabets only; no linear algebra beyond
// what the solvers need.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  bool empty() const { return v.empty(); }
};

// One evaluation of a rate/distortion/perception objective. `total` is the
// weighted sum the evaluating operation defines; `constraint` carries any
// additive constraint terms (zero for plain solver objectives).
struct LossBreakdown {
  double rate_bits = 0.0;
  double distortion = 0.0;
  double perception = 0.0;
  double constraint = 0.0;
  double total = 0.0;
};

}  // namespace sic
