// Straightens every PBW monomial of one sector and checks the result in the
// lattice model.
//
//   straighten_demo [rank] [module] [degree]

#include <cstdlib>
#include <iostream>

#include <fsbasis/straightening.hpp>
#include <fsbasis/voa_oracle.hpp>

int main(int argc, char** argv)
{
    const int rank = argc > 1 ? std::atoi(argv[1]) : 2;
    const int module = argc > 2 ? std::atoi(argv[2]) : 0;
    const int degree = argc > 3 ? std::atoi(argv[3]) : 4;
    const fsbasis::setup s(rank, module);
    fsbasis::voa::lattice_module mod(rank);

    int bad = 0;
    for (const auto& w : fsbasis::pbw_weights(rank, degree)) {
        for (const auto& b : fsbasis::enumerate_pbw(w, degree)) {
            const auto normal = fsbasis::straighten_by_rewriting(fsbasis::lin_comb(b), s);
            fsbasis::voa::fock_vector rhs;
            for (const auto& [m, c] : normal.terms()) {
                rhs.add(mod.apply_monomial(m, module), c);
            }
            const bool same = rhs == mod.apply_monomial(b, module);
            bad += same ? 0 : 1;
            std::cout << b << "  ->  " << normal.str() << (same ? "" : "   [oracle mismatch]") << '\n';
        }
    }
    return bad == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
