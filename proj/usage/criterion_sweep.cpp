// Left side of the criterion for K = 2..8 over a grid of C1.

#include <cstdio>

#include "powerslab/linnik.hpp"

int main() {
    using namespace powerslab;
    const LinnikConstants c = LinnikConstants::with_prime_limit(1'000'000);
    std::printf("%6s", "C1");
    for (int K = 2; K <= kMaxLinnikK; ++K) std::printf("   K=%d  ", K);
    std::printf("\n");
    for (double C1 = 2.0; C1 <= 14.0; C1 += 1.0) {
        std::printf("%6.2f", C1);
        for (int K = 2; K <= kMaxLinnikK; ++K) {
            const CriterionResult r = criterion_lhs(K, C1, true, c);
            std::printf(" %7.4f%c", r.lhs, r.satisfied ? ' ' : '*');
        }
        std::printf("\n");
    }
    std::printf("* criterion fails (GRH cutoff)\n");
}
