#include "burim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace burim::fft {

namespace {

std::mutex g_plan_mutex;

using PlanKey = std::tuple<int, int, int, int, int>;  // rank, n0, n1, n2, sign
std::map<PlanKey, fftw_plan>& plan_cache() {
  static std::map<PlanKey, fftw_plan> cache;
  return cache;
}

fftw_plan get_plan(int rank, int n0, int n1, int n2, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  PlanKey key{rank, n0, n1, n2, sign};
  auto it = plan_cache().find(key);
  if (it != plan_cache().end()) return it->second;

  std::size_t total = std::size_t(n0) * (rank >= 2 ? n1 : 1) * (rank >= 3 ? n2 : 1);
  std::vector<std::complex<double>> a(total), b(total);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = rank == 2 ? fftw_plan_dft_2d(n0, n1, pa, pb, sign, flags)
                             : fftw_plan_dft_3d(n0, n1, n2, pa, pb, sign, flags);
  plan_cache().emplace(key, plan);
  return plan;
}

}  // namespace

void dft_2d(int n_slow, int n_fast, const std::complex<double>* in, std::complex<double>* out,
            bool forward) {
  int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = get_plan(2, n_slow, n_fast, 0, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void dft_3d(int n_slow, int n_mid, int n_fast, const std::complex<double>* in,
            std::complex<double>* out, bool forward) {
  int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = get_plan(3, n_slow, n_mid, n_fast, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace burim::fft
