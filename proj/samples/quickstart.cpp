// Equalization probability of a few urns, computed four ways.

#include "polya/polya.hpp"

#include <cstdio>

int main()
{
    using namespace polya;
    for (const UrnConfig config : {UrnConfig(2, 1), UrnConfig(3, 2), UrnConfig(10, 4)}) {
        const ExactProbability exact = equalization_probability(config);
        const DPTable dp = first_passage_dp(config, 0, 200);
        const EstimateWithCI mc = definetti_estimator(config, 200000, RngSeed{42, 0});
        const ApproxResult normal = normal_approximation(config);
        std::printf("b=%lld w=%lld  exact %s = %s  dp(200) %.6f  de Finetti %.6f +- %.6f  normal %.6f\n",
                    static_cast<long long>(config.black()), static_cast<long long>(config.white()),
                    exact.fraction().c_str(), exact.decimal().c_str(), dp.cumulative.to_double(), mc.p_hat,
                    mc.std_err, normal.value);
    }
}
