#include "fscmt/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fscmt {

struct Dft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans();
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const Dft::Plans> plans_for(int n) {
  std::mutex& m = planner_mutex();
  static std::map<int, std::shared_ptr<const Dft::Plans>> cache;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<fftw_complex> a(n), b(n);
  auto plans = std::make_shared<Dft::Plans>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans->fwd = fftw_plan_dft_1d(n, a.data(), b.data(), FFTW_FORWARD, flags);
  plans->inv = fftw_plan_dft_1d(n, a.data(), b.data(), FFTW_BACKWARD, flags);
  if (!plans->fwd || !plans->inv) throw std::runtime_error("Dft: FFTW planning failed");
  cache.emplace(n, plans);
  return plans;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

// Plans are out-of-place; aliased buffers go through a copy.
void execute(fftw_plan plan, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  if (in.data() == out.data()) {
    std::vector<std::complex<double>> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, as_fftw(tmp.data()), as_fftw(out.data()));
    return;
  }
  fftw_execute_dft(plan, as_fftw(const_cast<std::complex<double>*>(in.data())),
                   as_fftw(out.data()));
}

}  // namespace

Dft::Plans::~Plans() {
  std::lock_guard lock(planner_mutex());
  if (fwd) fftw_destroy_plan(fwd);
  if (inv) fftw_destroy_plan(inv);
}

Dft::Dft(int size) : size_(size) {
  if (size <= 0) throw std::invalid_argument("Dft: size must be positive");
  plans_ = plans_for(size);
}

void Dft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
  if (static_cast<int>(in.size()) != size_ || static_cast<int>(out.size()) != size_)
    throw std::invalid_argument("Dft::forward: size mismatch");
  execute(plans_->fwd, in, out);
}

void Dft::inverse(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
  if (static_cast<int>(in.size()) != size_ || static_cast<int>(out.size()) != size_)
    throw std::invalid_argument("Dft::inverse: size mismatch");
  execute(plans_->inv, in, out);
  const double scale = 1.0 / size_;
  for (auto& v : out) v *= scale;
}

}  // namespace fscmt
