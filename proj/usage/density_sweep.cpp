// Density lower bound against C1 for a small modulus 2^m - 1 with a flat
// S-table, next to the m = 24 values.

#include <cstdio>
#include <cstdlib>

#include "powerslab/romanov.hpp"

int main(int argc, char** argv) {
    using namespace powerslab;
    const int m = argc > 1 ? std::atoi(argv[1]) : 12;
    const Interval C0 = compute_C0(1'000'000);
    std::map<int, double> flat;
    for (int d : divisors_of(m)) flat[d] = 1.0;
    for (double C1 : {2.0, 3.02, 4.0, 6.7814, 8.0}) {
        const RomanovConfig small = make_romanov_config(m, C1, C0, flat, kDefaultC3);
        const RomanovConfig ref = make_romanov_config(kDefaultRomanovM, C1, C0);
        DensityOptions opts;
        opts.workers = default_workers();
        std::printf("C1 = %-7.4f  m = %2d: %.5f   m = 24: %.5f\n", C1, m, density_lower_bound(small, opts).d_lower,
                    density_lower_bound(ref, opts).d_lower);
    }
}
