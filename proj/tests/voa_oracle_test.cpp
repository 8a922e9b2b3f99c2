#include <algorithm>
#include <cstdio>
#include <set>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <fsbasis/qseries.hpp>
#include <fsbasis/voa_oracle.hpp>

#include "brute_force.hpp"

using namespace fsbasis;
using namespace fsbasis::voa;

namespace {

fock_state vacuum_at(const lattice_point& mu) { return {{}, mu}; }

std::set<int> degrees_of(const fock_vector& v)
{
    std::set<int> out;
    for (const auto& [s, c] : v.terms()) {
        out.insert(s.degree());
    }
    return out;
}

}  // namespace

TEST(Lattice, Pairing)
{
    const root_data a1(1);
    EXPECT_EQ(a1.pairing({1}, a1.omega(1)), 1);
    const root_data a2(2);
    EXPECT_EQ(a2.pairing(a2.gamma(1), {a2.gamma(2), 0}), 1);
    EXPECT_EQ(a2.pairing(a2.gamma(2), a2.omega(1)), 0);
    const root_data a3(3);
    for (int i = 1; i <= 3; ++i) {
        for (int r = 0; r <= 3; ++r) {
            EXPECT_EQ(a3.pairing(a3.gamma(i), a3.omega(r)), i <= r && r > 0 ? 1 : 0);
        }
    }
}

TEST(Lattice, OmegaSums)
{
    for (int l = 1; l <= 4; ++l) {
        const root_data roots(l);
        for (int r = 0; r <= l; ++r) {
            for (int j = 0; j <= l; ++j) {
                const auto [s, offset] = roots.omega_sum(r, j);
                EXPECT_EQ(s, (r + j) % (l + 1));
                // Compare <alpha_k, .> on both sides.
                for (int k = 1; k <= l; ++k) {
                    std::vector<int> ak(static_cast<std::size_t>(l), 0);
                    ak[static_cast<std::size_t>(k - 1)] = 1;
                    const int lhs = (k == r ? 1 : 0) + (k == j ? 1 : 0);
                    EXPECT_EQ(roots.pairing(ak, {offset, s}), lhs);
                }
            }
        }
    }
}

TEST(Cocycle, Values)
{
    const root_data roots(3);
    const auto eps = cocycle_table::standard(roots);
    EXPECT_EQ(eps({1, 0, 0}, {1, 0, 0}), 1);
    EXPECT_EQ(eps({0, 1, 0}, {1, 0, 0}), -1);
    EXPECT_EQ(eps({1, 0, 0}, {0, 1, 0}), 1);
    for (int r = 0; r <= 3; ++r) {
        EXPECT_EQ(eps(roots.gamma(1), roots.omega(r)), 1);
    }
}

TEST(Cocycle, CommutatorConstraint)
{
    const root_data roots(3);
    const auto eps = cocycle_table::standard(roots);
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> coord(-3, 3);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> a{coord(gen), coord(gen), coord(gen)};
        std::vector<int> b{coord(gen), coord(gen), coord(gen)};
        const int parity = ((roots.pairing_q(a, b) % 2) + 2) % 2;
        ASSERT_EQ(eps(a, b) * eps(b, a), parity == 0 ? 1 : -1);
    }
}

TEST(VertexOperator, VacuumExamples)
{
    lattice_module mod(1);
    const fock_state vac = vacuum_at(mod.roots().omega(0));
    const lattice_point g1{{1}, 0};
    EXPECT_EQ(mod.apply_x(1, -1, vac), fock_vector(fock_state{{}, g1}));
    for (int m = 0; m <= 6; ++m) {
        EXPECT_TRUE(mod.apply_x(1, m, vac).is_zero()) << m;
    }
    EXPECT_EQ(mod.apply_x(1, -2, vac), fock_vector(fock_state{{{1, 1}}, g1}));

    lattice_module mod2(2);
    const lattice_point g = {{1, 1}, 0};
    fock_vector expect;
    expect.add(fock_state{{{1, 1}}, g}, 1);
    expect.add(fock_state{{{2, 1}}, g}, 1);
    EXPECT_EQ(mod2.apply_x(1, -2, fock_state{{}, mod2.roots().omega(0)}), expect);
}

// [z^K] exp(sum a(-n) z^n / n) on the vacuum, against the sum over partitions
// with weights 1/z_lambda.
TEST(VertexOperator, CreationSeriesMatchesPartitionSum)
{
    lattice_module mod(1);
    const fock_state vac{{}, mod.roots().omega(0)};
    for (int k = 0; k <= 8; ++k) {
        fock_vector expect;
        for (const auto& lambda : brute::partitions(k)) {
            heis_monomial h;
            for (const auto& [part, mult] : lambda) {
                for (int i = 0; i < mult; ++i) {
                    h.push_back({1, part});
                }
            }
            std::sort(h.begin(), h.end());
            expect.add(fock_state{h, {{1}, 0}}, rational(1, brute::z_lambda(lambda)));
        }
        EXPECT_EQ(mod.apply_x(1, -1 - k, vac), expect) << k;
    }
}

TEST(VertexOperator, HighestWeightAnnihilation)
{
    for (int l = 1; l <= 3; ++l) {
        lattice_module mod(l);
        for (int r = 0; r <= l; ++r) {
            const setup s(l, r);
            const auto v = mod.highest_weight_vector(r);
            for (int i = 1; i <= l; ++i) {
                for (int m = -s.delta(i); m <= 5; ++m) {
                    EXPECT_TRUE(mod.apply_x(i, m, v).is_zero());
                }
                EXPECT_FALSE(mod.apply_x(i, -s.delta(i) - 1, v).is_zero());
            }
        }
    }
}

TEST(VertexOperator, MonomialExamples)
{
    for (int l = 1; l <= 3; ++l) {
        lattice_module mod(l);
        for (int r = 0; r <= l; ++r) {
            EXPECT_EQ(mod.apply_monomial(monomial{}, r), mod.highest_weight_vector(r));
        }
    }
    lattice_module mod1(1);
    EXPECT_TRUE(mod1.apply_monomial(monomial::parse("x1(-1) x1(-1)"), 0).is_zero());

    // x_2(-1) acts on e^{gamma_1} with <gamma_2, gamma_1> = 1, which absorbs
    // the extra unit of depth: the result has Fock degree 0.
    lattice_module mod2(2);
    const auto v = mod2.apply_monomial(monomial::parse("x2(-2) x1(-1)"), 0);
    ASSERT_FALSE(v.is_zero());
    for (const auto& [s, c] : v.terms()) {
        EXPECT_EQ(s.lattice, (lattice_point{{1, 2}, 0}));
    }
    EXPECT_EQ(degrees_of(v), std::set<int>{0});
}

// Fock degree of b v_r depends only on the sector (weight, degree).
TEST(VertexOperator, FockDegreeIsUniformPerSector)
{
    for (int l = 1; l <= 2; ++l) {
        lattice_module mod(l);
        for (int r = 0; r <= l; ++r) {
            for (int d = 0; d <= 6; ++d) {
                for (const auto& w : pbw_weights(l, d)) {
                    std::set<int> seen;
                    for (const auto& b : enumerate_pbw(w, d)) {
                        const auto ds = degrees_of(mod.apply_monomial(b, r));
                        seen.insert(ds.begin(), ds.end());
                    }
                    EXPECT_LE(seen.size(), 1u) << "l=" << l << " r=" << r << " w=" << w.key() << " d=" << d;
                }
            }
        }
    }
}

TEST(VertexOperator, Commutativity)
{
    for (int l = 1; l <= 3; ++l) {
        lattice_module mod(l);
        const auto states = voa::detail::test_states(mod, l == 3 ? 3 : 4, true);
        for (const auto& w : states) {
            const int deg = mod.heis_degree(w.terms.front().first);
            for (int i = 1; i <= l; ++i) {
                for (int j = 1; j <= l; ++j) {
                    for (int m = -4; m <= mod.max_live_mode(i, deg, w.lattice); ++m) {
                        for (int n = -4; n <= mod.max_live_mode(j, deg, w.lattice); ++n) {
                            ASSERT_EQ(mod.apply_x(i, m, mod.apply_x(j, n, w)), mod.apply_x(j, n, mod.apply_x(i, m, w)));
                        }
                    }
                }
            }
        }
    }
}

TEST(VertexOperator, MemoDoesNotChangeResults)
{
    lattice_module warm(2);
    const auto states = voa::detail::test_states(warm, 3, false);
    for (const auto& w : states) {
        (void)warm.apply_x(1, -3, warm.apply_x(2, -2, w));
    }
    for (std::size_t k = 0; k < states.size(); k += 7) {
        lattice_module cold(2);
        const auto w = cold.to_graded(warm.to_fock(states[k]).terms().begin()->first);
        EXPECT_EQ(cold.to_fock(cold.apply_x(2, -4, w)), warm.to_fock(warm.apply_x(2, -4, states[k])));
    }
}

TEST(SimpleCurrent, Shift)
{
    lattice_module mod(2);
    for (int j = 1; j <= 2; ++j) {
        EXPECT_EQ(mod.simple_current(j, mod.highest_weight_vector(0)), mod.highest_weight_vector(j));
        for (int i = 1; i <= 2; ++i) {
            EXPECT_EQ(mod.current_sign(i, j, 0), 1);
        }
    }
}

TEST(SimpleCurrent, CommutationLawRankOne)
{
    lattice_module mod(1);
    const int c = mod.current_sign(1, 1, 0);
    for (const auto& h : heis_basis(1, 4)) {
        for (const auto& mu : {lattice_point{{0}, 0}, lattice_point{{1}, 0}, lattice_point{{-1}, 0}}) {
            const fock_vector w(fock_state{h, mu});
            const auto lhs = mod.apply_x(1, -1, mod.simple_current(1, w));
            fock_vector rhs;
            rhs.add(mod.simple_current(1, mod.apply_x(1, 0, w)), c);
            EXPECT_EQ(lhs, rhs);
        }
    }
}

TEST(SimpleCurrent, InitTwoConstant)
{
    lattice_module mod(2);
    const auto lhs = mod.apply_x(2, -1, mod.highest_weight_vector(1));
    const auto rhs = mod.simple_current(2, mod.highest_weight_vector(2));
    const auto c = proportionality(lhs, rhs);
    ASSERT_TRUE(c.has_value());
    EXPECT_FALSE(c->is_zero());
}

TEST(HeisBasis, CountsColoredPartitions)
{
    // Number of l-colored partitions of each size: coefficients of 1/(q)_inf^l.
    const std::vector<std::vector<std::size_t>> expected{{1, 1, 2, 3, 5, 7}, {1, 2, 5, 10, 20, 36}, {1, 3, 9, 22, 51, 108}};
    for (int l = 1; l <= 3; ++l) {
        std::vector<std::size_t> counts(6, 0);
        for (const auto& h : heis_basis(l, 5)) {
            EXPECT_TRUE(std::is_sorted(h.begin(), h.end()));
            int d = 0;
            for (const auto& f : h) {
                d += f.mode;
            }
            ++counts[static_cast<std::size_t>(d)];
        }
        EXPECT_EQ(counts, expected[static_cast<std::size_t>(l - 1)]);
    }
}

TEST(GradedRank, Examples)
{
    EXPECT_EQ(graded_rank(setup(1, 0), 4), (rank_triple{2, 2, 2}));
    EXPECT_EQ(graded_rank(setup(1, 0), 0), (rank_triple{1, 1, 1}));
    EXPECT_EQ(graded_rank(setup(2, 0), 2, weight_vector({1, 1})), (rank_triple{0, 0, 0}));
}

TEST(GradedRank, MatchesCharacterCoefficients)
{
    for (int l = 1; l <= 2; ++l) {
        for (int r = 0; r <= l; ++r) {
            const setup s(l, r);
            const auto chi = full_character(s, 6).first;
            for (int d = 0; d <= 6; ++d) {
                const auto t = graded_rank(s, d);
                EXPECT_TRUE(t.all_equal()) << "l=" << l << " r=" << r << " d=" << d;
                EXPECT_EQ(static_cast<qseries::coeff_type>(t.rank_admissible), chi[d]);
            }
        }
    }
}

TEST(SectorCache, RoundTripIsBitIdentical)
{
    const auto path = (std::filesystem::temp_directory_path() / "fsbasis_cache_test.json").string();
    std::remove(path.c_str());
    EXPECT_EQ(sector_cache::load(path).size(), 0u);

    const setup s(2, 1);
    sector_cache cache;
    const auto fresh = graded_rank(s, 5, std::nullopt, &cache);
    EXPECT_GT(cache.size(), 0u);
    cache.save(path);

    auto loaded = sector_cache::load(path);
    EXPECT_EQ(loaded.to_json().dump(), cache.to_json().dump());
    EXPECT_EQ(graded_rank(s, 5, std::nullopt, &loaded), fresh);

    lattice_module mod(2);
    for (const auto& w : pbw_weights(2, 5)) {
        const auto hit = loaded.lookup(s, w, 5);
        ASSERT_TRUE(hit.has_value());
        const auto again = sector_graded_rank(mod, s, w, 5);
        EXPECT_EQ(hit->ranks, again.ranks);
        EXPECT_EQ(hit->admissible, again.admissible);
        EXPECT_EQ(hit->states, again.states);
    }
    std::remove(path.c_str());

    auto bad = cache.to_json();
    bad["version"] = 99;
    EXPECT_THROW(sector_cache::from_json(bad), std::runtime_error);
}

TEST(RelationSuite, SmallRanksPass)
{
    relation_options opt;
    opt.max_total_depth = 6;
    opt.max_fock_degree = 4;
    opt.include_negative_shifts = true;
    for (int l = 1; l <= 2; ++l) {
        const auto rep = verify_relations(l, opt);
        EXPECT_TRUE(rep.passed) << rep.failed_check << ": " << rep.counterexample;
        EXPECT_EQ(rep.init2_constants.size(), static_cast<std::size_t>(l));
        for (const auto& [r, c] : rep.init2_constants) {
            EXPECT_FALSE(c.is_zero());
        }
    }
}

TEST(RelationSuite, CorruptedCocycleFails)
{
    relation_options opt;
    opt.max_total_depth = 6;
    opt.max_fock_degree = 2;
    opt.cocycle = cocycle_table::standard(root_data(2)).with_sign(2, 1, 1);
    const auto rep = verify_relations(2, opt);
    EXPECT_FALSE(rep.passed);
    EXPECT_EQ(rep.failed_check, "x_i(z) x_j(z) = 0");
    EXPECT_NE(rep.counterexample.find("i=1 j=2"), std::string::npos);
}
