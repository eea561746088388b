#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "nlslab/error.hpp"

namespace nlslab::fft {

namespace {

// (dims, howmany, sign, in-place, threads)
using PlanKey = std::tuple<std::vector<int>, int, int, bool, int>;

struct Registry {
    std::mutex mutex;
    std::map<PlanKey, fftw_plan> plans;
    int nthreads = 0;
    bool initialized = false;

    ~Registry() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    void init_locked() {
        if (initialized) return;
        fftw_init_threads();
        nthreads = 1;
        if (const char* env = std::getenv("NLSLAB_THREADS")) {
            const int n = std::atoi(env);
            if (n >= 1) nthreads = n;
        }
        initialized = true;
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

fftw_plan acquire(const std::vector<int>& dims, int howmany, int sign, bool in_place) {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    reg.init_locked();
    PlanKey key{dims, howmany, sign, in_place, reg.nthreads};
    if (auto it = reg.plans.find(key); it != reg.plans.end()) return it->second;

    std::size_t total = std::size_t(howmany);
    for (int n : dims) total *= std::size_t(n);
    // FFTW_ESTIMATE never touches the arrays while planning.
    auto* a = fftw_alloc_complex(total);
    auto* b = in_place ? a : fftw_alloc_complex(total);
    int dist = 1;
    for (int n : dims) dist *= n;
    fftw_plan_with_nthreads(reg.nthreads);
    fftw_plan plan = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, a,
                                        nullptr, 1, dist, b, nullptr, 1, dist, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (b != a) fftw_free(b);
    fftw_free(a);
    if (plan == nullptr) throw InvalidInput("FFTW could not create a plan");
    reg.plans.emplace(std::move(key), plan);
    return plan;
}

void run(const std::vector<int>& dims, int howmany, Direction dir, const cplx* in, cplx* out) {
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const bool in_place = in == out;
    fftw_plan plan = acquire(dims, howmany, sign, in_place);
    // The new-array execute interface never writes to `in` for out-of-place plans.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in));
    fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void transform(const std::vector<int>& dims, Direction dir, const cplx* in, cplx* out) {
    run(dims, 1, dir, in, out);
}

void transform_lines(int n, int howmany, Direction dir, const cplx* in, cplx* out) {
    run({n}, howmany, dir, in, out);
}

int threads() {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    reg.init_locked();
    return reg.nthreads;
}

void set_threads(int n) {
    if (n < 1) throw InvalidInput("thread count must be >= 1");
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    reg.init_locked();
    reg.nthreads = n;
}

}  // namespace nlslab::fft
