#include "magweyl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace magweyl {
namespace {

// Plans are cached per geometry and reused via fftw_execute_dft.
// FFTW_UNALIGNED keeps the plan valid for arbitrary buffers; plan
// creation is serialized (FFTW requirement), execution is thread-safe.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<long, long, int>, fftw_plan> plans;

  fftw_plan get(long n, long post, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, post, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<cplx> dummy(size_t(n) * post);
    int nn = int(n);
    fftw_plan p = fftw_plan_many_dft(
        1, &nn, int(post), reinterpret_cast<fftw_complex*>(dummy.data()), nullptr,
        int(post), 1, reinterpret_cast<fftw_complex*>(dummy.data()), nullptr,
        int(post), 1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans[key] = p;
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_axis(cplx* data, long pre, long n, long post, int sign) {
  fftw_plan p = cache().get(n, post, sign);
  for (long b = 0; b < pre; ++b) {
    fftw_complex* ptr = reinterpret_cast<fftw_complex*>(data + b * n * post);
    fftw_execute_dft(p, ptr, ptr);
  }
}

void fft_axis_fwd(cplx* data, long pre, long n, long post) {
  fft_axis(data, pre, n, post, -1);
}

void fft_axis_inv(cplx* data, long pre, long n, long post) {
  fft_axis(data, pre, n, post, +1);
  const double s = 1.0 / double(n);
  const long total = pre * n * post;
  for (long i = 0; i < total; ++i) data[i] *= s;
}

}  // namespace magweyl
