#pragma once
#include <cstddef>
#include <vector>

namespace ep {

// Cell-centered radial grid avoiding r = 0: r_j = (j + 1/2) dr.
struct RadialGrid {
  std::size_t num_cells = 0;
  double r_max = 0.0;

  double dr() const { return r_max / static_cast<double>(num_cells); }
  double r(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dr(); }
  std::vector<double> centers() const;
  void validate() const; // throws ConfigError
};

// Parity of a profile about the r = 0 cell face: density-like fields are even,
// velocity/field-like fields are odd.
enum class Parity : int { even = 1, odd = -1 };

// 4th-order central first derivative with two parity ghost cells through the
// origin face and two far-field ghost cells pinned to `far`.
void deriv4(const std::vector<double>& f, Parity parity, double far, double dr,
            std::vector<double>& out);
std::vector<double> deriv4(const std::vector<double>& f, Parity parity, double far, double dr);

// max_j |d/dr f| via deriv4.
double max_abs_deriv4(const std::vector<double>& f, Parity parity, double far, double dr);

// Order-6 undivided-difference dissipation: adds coef * D6(f)/64 to `accum`,
// where D6 is the centered 7-point 6th difference with three parity ghost
// cells at the origin and far ghosts pinned to `far`. The Fourier symbol of
// D6/64 is -sin^6(k dr / 2), so the term damps grid-scale modes at O(dr^5)
// while leaving smooth profiles essentially untouched.
void add_dissipation6(const std::vector<double>& f, Parity parity, double far,
                      double coef, std::vector<double>& accum);

// Order-8 exponential damping of the top third of cosine/sine modes of the
// profile (relative to `base`), implemented via the parity extension of the
// profile to a length-2N periodic array. Near-identity on smooth profiles;
// preserves parity exactly.
class ProfileFilter {
 public:
  explicit ProfileFilter(std::size_t n);
  ~ProfileFilter();
  ProfileFilter(const ProfileFilter&) = delete;
  ProfileFilter& operator=(const ProfileFilter&) = delete;

  void apply(std::vector<double>& f, Parity parity, double base = 0.0) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  void* plan_fwd_ = nullptr; // fftw plans, opaque here to keep fftw3.h out of the header
  void* plan_bwd_ = nullptr;
  double* real_buf_ = nullptr;
  void* cplx_buf_ = nullptr;
};

} // namespace ep
