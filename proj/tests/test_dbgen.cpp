#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <formred/formred.hpp>

#include "oracles.hpp"

using namespace formred;

namespace {

/* shift from an exact fraction num/den: half-even to 1/100, then half-up */
long oracle_shift(long num, long den)
{
    if (den < 0) num = -num, den = -den;
    // Q = round_half_even(100 num / den)
    long a = 100 * num;
    long q = a >= 0 ? a / den : -((-a + den - 1) / den); // floor
    long r2 = 2 * (a - q * den);                          // 2 * remainder in [0, 2 den)
    if (r2 > den || (r2 == den && (q & 1))) ++q;
    // floor(Q / 100 + 1/2)
    long b = q + 50;
    return b >= 0 ? b / 100 : -((-b + 99) / 100);
}

compare_stats compare_by_oracle(std::vector<lattice_point> const & pts, int k)
{
    compare_stats s;
    std::vector<int> idx(k);
    for_each_combination(static_cast<int>(pts.size()), k, [&](std::span<int const> ix) {
        std::vector<lattice_point> roots;
        for (int i : ix)
            roots.push_back(pts[i]);
        long sx = 0, num = 0, den = 0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            sx += roots[i].x;
            long p = 1;
            for (std::size_t j = 0; j < roots.size(); ++j)
                if (j != i) p *= roots[j].y;
            num += p * roots[i].x;
            den += p;
        }
        auto f = from_upper_roots(roots);
        auto hc = height(shift(f, oracle_shift(sx, k)));
        auto hh = height(shift(f, oracle_shift(num, den)));
        ++s.total;
        if (hh < hc) ++s.hyperbolic_wins;
        else if (hc < hh) ++s.julia_wins;
        else ++s.same;
        return true;
    });
    return s;
}

} // namespace

TEST(lattice_points, examples)
{
    EXPECT_EQ(lattice_points(2), (std::vector<lattice_point>{{-1, 1}, {0, 2}, {1, 1}}));
    EXPECT_EQ(lattice_points(4).size(), 19u);
    EXPECT_EQ(lattice_points(7).size(), 66u);
    EXPECT_THROW(lattice_points(1), std::invalid_argument);
}

TEST(lattice_points, brute_force_counts)
{
    for (int r = 2; r <= 20; ++r) {
        auto pts = lattice_points(r);
        ASSERT_EQ(static_cast<int>(pts.size()), oracle::brute_lattice_count(r)) << r;
        ASSERT_TRUE(std::is_sorted(pts.begin(), pts.end()));
    }
    std::vector<std::pair<int, std::size_t>> want{{4, 19}, {5, 34}, {7, 66}, {10, 147}, {20, 607}};
    for (auto [r, n] : want)
        EXPECT_EQ(lattice_points(r).size(), n);
}

TEST(lattice_points, right_halfdisc)
{
    auto pts = lattice_points(4, lattice_region::right_halfdisc);
    for (auto const & p : pts)
        EXPECT_GT(p.x, 0);
    EXPECT_EQ(pts.size(), 8u);
    EXPECT_EQ(parse_region("right-halfdisc"), lattice_region::right_halfdisc);
    EXPECT_EQ(to_string(lattice_region::halfdisc_exclude_i), "halfdisc-exclude-i");
    EXPECT_THROW(parse_region("disc"), std::invalid_argument);
}

TEST(lattice_config, guards)
{
    lattice_config c{65, 3};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.allow_large = true;
    EXPECT_NO_THROW(c.validate());
    EXPECT_THROW((lattice_config{1, 3}.validate()), std::invalid_argument);
}

TEST(gauss_estimate, examples)
{
    EXPECT_NEAR(gauss_estimate(1, 20), 1253.4954687823274, 1e-9);
    EXPECT_EQ(gauss_estimate(3, 3), 0);
    EXPECT_DOUBLE_EQ(gauss_estimate(0, 1), std::numbers::pi);
    EXPECT_THROW(gauss_estimate(2, 1), std::invalid_argument);
}

TEST(combinations, counts_and_order)
{
    for (auto [r, k, total] : std::vector<std::tuple<int, int, long>>{
             {4, 5, 11628}, {5, 5, 278256}, {10, 3, 518665}}) {
        int n = static_cast<int>(lattice_points(r).size());
        long count = 0;
        std::vector<int> prev;
        bool ordered = true;
        for_each_combination(n, k, [&](std::span<int const> idx) {
            std::vector<int> cur(idx.begin(), idx.end());
            ordered = ordered && std::is_sorted(cur.begin(), cur.end())
                      && std::adjacent_find(cur.begin(), cur.end()) == cur.end()
                      && (prev.empty() || prev < cur);
            prev = std::move(cur);
            ++count;
            return true;
        });
        EXPECT_EQ(count, total);
        EXPECT_EQ(mpz_class(count), binomial(n, k));
        EXPECT_TRUE(ordered);
    }
    long one = 0;
    for_each_combination(3, 3, [&](std::span<int const>) { return ++one, true; });
    EXPECT_EQ(one, 1);
    EXPECT_EQ(binomial(607, 3), 37090735);
    EXPECT_EQ(binomial(66, 5), 8936928);
}

TEST(combinations, partition_by_first_index_is_exact)
{
    int n = 19, k = 4;
    std::vector<std::vector<int>> whole, parts;
    for_each_combination(n, k, [&](std::span<int const> idx) {
        whole.emplace_back(idx.begin(), idx.end());
        return true;
    });
    for (int b = 0; b < n; b += 3)
        for_each_combination(n, k, b, b + 3, [&](std::span<int const> idx) {
            parts.emplace_back(idx.begin(), idx.end());
            return true;
        });
    EXPECT_EQ(whole, parts);
}

TEST(combinations, early_stop)
{
    int seen = 0;
    for_each_combination(10, 2, [&](std::span<int const>) { return ++seen < 5; });
    EXPECT_EQ(seen, 5);
}

TEST(run_ordered, preserves_order_and_propagates_errors)
{
    std::vector<std::size_t> got;
    run_ordered<std::size_t>(
        200, 4, [](std::size_t b) { return b * b; }, [&](std::size_t v) { got.push_back(v); });
    ASSERT_EQ(got.size(), 200u);
    for (std::size_t b = 0; b < 200; ++b)
        EXPECT_EQ(got[b], b * b);
    EXPECT_THROW(run_ordered<int>(
                     50, 3,
                     [](std::size_t b) -> int {
                         if (b == 17) throw numeric_error("boom");
                         return 0;
                     },
                     [](int) {}),
                 numeric_error);
}

TEST(build_record, examples)
{
    auto r = build_record(std::vector<lattice_point>{{19, 1}, {1, 19}, {2, 19}});
    EXPECT_EQ(r.roots, (std::vector<lattice_point>{{1, 19}, {2, 19}, {19, 1}}));
    EXPECT_EQ(binary_form(r.coeffs), make_form({1, -44, 1325, -32280, 480964, -5809376, 47831060}));
    EXPECT_NEAR(r.com.t, 7.333333333, 1e-8);
    EXPECT_NEAR(r.com.u, 13, 1e-12);
    EXPECT_NEAR(r.hyp.t, 17.333333333, 1e-8);
    EXPECT_NEAR(r.hyp.u, 7.854833715516370, 1e-10);

    auto q = build_record(std::vector<lattice_point>{{2, 3}});
    EXPECT_EQ(q.coeffs.size(), 3u);
    EXPECT_EQ(q.hyp, (uhp_point{2, 3}));

    auto p = build_record(std::vector<lattice_point>{{1, 5}, {1, 6}, {2, 6}, {3, 3}, {6, 1}});
    EXPECT_EQ(p.coeffs.back(), 25627680);
}

TEST(jsonl, triangle_line_matches_schema)
{
    auto r = build_record(std::vector<lattice_point>{{1, 19}, {2, 19}, {19, 1}});
    auto line = format_record(r);
    EXPECT_EQ(line.rfind("{\"roots\":[[1,19],[2,19],[19,1]],\"coeffs\":[\"1\",\"-44\",\"1325\","
                         "\"-32280\",\"480964\",\"-5809376\",\"47831060\"],\"com\":[7.333333,13.000000],"
                         "\"hyp\":[17.333333,7.854834]}",
                         0),
              0u)
        << line;
}

TEST(jsonl, round_trip)
{
    std::vector<ngon_record> none;
    std::stringstream empty;
    write_db(none, empty);
    EXPECT_EQ(empty.str(), "");
    EXPECT_TRUE(read_db(empty).empty());

    auto pts = lattice_points(5);
    std::vector<ngon_record> recs;
    for_each_combination(static_cast<int>(pts.size()), 3, [&](std::span<int const> idx) {
        recs.push_back(build_record(detail::gather(pts, idx)));
        return recs.size() < 500;
    });
    std::stringstream ss;
    write_db(recs, ss);
    auto back = read_db(ss);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(back[i].roots, recs[i].roots);
        EXPECT_EQ(back[i].coeffs, recs[i].coeffs);
        EXPECT_NEAR(back[i].com.t, recs[i].com.t, 5e-7);
        EXPECT_NEAR(back[i].com.u, recs[i].com.u, 5e-7);
        EXPECT_NEAR(back[i].hyp.t, recs[i].hyp.t, 5e-7);
        EXPECT_NEAR(back[i].hyp.u, recs[i].hyp.u, 5e-7);
        EXPECT_EQ(format_record(back[i]), format_record(recs[i]));
        // persisted coefficients regenerate from the roots
        EXPECT_EQ(from_upper_roots(back[i].roots).coeffs(), back[i].coeffs);
    }
}

TEST(jsonl, file_round_trip)
{
    auto path = (std::filesystem::temp_directory_path() / "formred_test_db.jsonl").string();
    std::vector<ngon_record> recs{build_record(std::vector<lattice_point>{{1, 19}, {2, 19}, {19, 1}})};
    write_db(recs, path);
    auto back = read_db(path);
    std::remove(path.c_str());
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].coeffs, recs[0].coeffs);
    EXPECT_THROW(read_db(std::string("/nonexistent/dir/db.jsonl")), std::runtime_error);
}

TEST(jsonl, corrupted_line_is_reported)
{
    auto good = format_record(build_record(std::vector<lattice_point>{{0, 2}}));
    std::vector<std::string> bad_lines{
        "{\"roots\":[[0,2]],\"coeffs\":[\"1\",\"0\",\"4\"],\"com\":[0.0,2.0]", // truncated
        "{\"roots\":[[0,2]],\"coeffs\":[\"1\",\"x\",\"4\"],\"com\":[0,2],\"hyp\":[0,2]}",
        "{\"roots\":[[0]],\"coeffs\":[\"1\",\"0\",\"4\"],\"com\":[0,2],\"hyp\":[0,2]}",
        "{\"coeffs\":[\"1\",\"0\",\"4\"],\"com\":[0,2],\"hyp\":[0,2]}",
    };
    for (auto const & bad : bad_lines) {
        std::stringstream ss;
        ss << good << '\n' << good << '\n' << bad << '\n' << good << '\n';
        try {
            read_db(ss);
            FAIL() << "accepted: " << bad;
        } catch (std::runtime_error const & e) {
            EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
        }
    }
}

TEST(generate, parallel_output_is_identical)
{
    lattice_config cfg{5, 3};
    std::string one, many;
    auto s1 = generate(cfg, 1, [&](std::string const & s) { one += s; });
    auto s4 = generate(cfg, 4, [&](std::string const & s) { many += s; });
    EXPECT_EQ(one, many);
    EXPECT_EQ(s1.records, 5984u); // C(34, 3)
    EXPECT_EQ(s1.records, s4.records);
    EXPECT_EQ(s1.checksum, s4.checksum);
    auto s0 = generate(cfg, 3, nullptr);
    EXPECT_EQ(s0.records, s1.records);
    EXPECT_EQ(s0.checksum, s1.checksum);
    std::stringstream ss(one);
    auto recs = read_db(ss);
    ASSERT_EQ(recs.size(), 5984u);
    EXPECT_EQ(recs.front().roots, (std::vector<lattice_point>{{-4, 1}, {-4, 2}, {-4, 3}}));
}

TEST(max_distance, small_cases)
{
    // a configuration with exactly one k-gon returns it
    lattice_config cfg{2, 3};
    auto r = max_distance(cfg);
    EXPECT_EQ(r.examined, 1u);
    EXPECT_EQ(r.record.roots, (std::vector<lattice_point>{{-1, 1}, {0, 2}, {1, 1}}));

    // brute force over the stored records agrees, both metrics
    for (auto metric : {distance_metric::euclidean, distance_metric::hyperbolic})
        for (auto rule : {hyp_height_rule::centroid, hyp_height_rule::harmonic}) {
            lattice_config c{6, 3, lattice_region::right_halfdisc};
            max_distance_options opt{metric, rule, 1};
            auto got = max_distance(c, opt);
            auto pts = lattice_points(6, lattice_region::right_halfdisc);
            double best = -1;
            std::vector<lattice_point> arg;
            for_each_combination(static_cast<int>(pts.size()), 3, [&](std::span<int const> idx) {
                auto roots = detail::gather(pts, idx);
                auto z = to_uhp(roots);
                auto com = center_of_mass(z);
                auto hc = hyperbolic_centroid(z).point;
                double inv = 0;
                for (auto const & p : z)
                    inv += 1 / p.u;
                uhp_point hyp{hc.t, rule == hyp_height_rule::centroid ? hc.u : 3 / inv};
                double d = metric == distance_metric::euclidean
                               ? std::hypot(com.t - hyp.t, com.u - hyp.u)
                               : dist_h(com, hyp);
                if (d > best + 1e-12) {
                    best = d;
                    arg = roots;
                }
                return true;
            });
            EXPECT_EQ(got.record.roots, arg);
            EXPECT_NEAR(got.distance, best, 1e-9);
            opt.workers = 3;
            EXPECT_EQ(max_distance(c, opt).record.roots, got.record.roots);
        }
}

TEST(compare_stats, single_triangle_by_hand)
{
    // (-1,1), (0,2), (1,1): both centres have real part 0, so the shifts agree
    auto s = run_compare({2, 3});
    EXPECT_EQ(s.total, 1u);
    EXPECT_EQ(s.same, 1u);
    EXPECT_EQ(s.hyperbolic_wins + s.julia_wins, 0u);
}

TEST(compare_stats, matches_independent_oracle)
{
    for (auto [r, k] : std::vector<std::pair<int, int>>{{4, 3}, {5, 3}, {4, 4}}) {
        auto got = run_compare({r, k});
        auto want = compare_by_oracle(lattice_points(r), k);
        EXPECT_EQ(got, want) << r << " " << k;
        EXPECT_EQ(got.total, got.hyperbolic_wins + got.julia_wins + got.same);
    }
}

TEST(compare_stats, reference_decimic_counts)
{
    auto s = run_compare({4, 5});
    EXPECT_EQ(s.total, 11628u);
    EXPECT_EQ(s.hyperbolic_wins, 2367u);
    EXPECT_EQ(s.julia_wins, 797u);
    EXPECT_EQ(s.same, 8464u);
    compare_options par;
    par.workers = 4;
    EXPECT_EQ(run_compare({4, 5}, par), s);
}

TEST(compare_stats, same_rule_and_tie_variants_keep_sums)
{
    for (auto tie : {tie_rule::even, tie_rule::zero, tie_rule::up})
        for (auto same : {same_rule::height, same_rule::shift}) {
            compare_options opt;
            opt.rounding.tie = tie;
            opt.same = same;
            auto s = run_compare({4, 4}, opt);
            EXPECT_EQ(s.total, 3876u);
            EXPECT_EQ(s.total, s.hyperbolic_wins + s.julia_wins + s.same);
        }
}

TEST(rounding, centering_shift)
{
    EXPECT_EQ(centering_shift(mpq_class(52, 3)), 17);
    EXPECT_EQ(centering_shift(mpq_class(22, 3)), 7);
    EXPECT_EQ(centering_shift(mpq_class(33, 8)), 4);  // 4.125 -> 4.12 -> 4
    EXPECT_EQ(centering_shift(mpq_class(5, 2)), 3);   // half-up
    EXPECT_EQ(centering_shift(mpq_class(-5, 2)), -2); // half-up
    EXPECT_EQ(centering_shift(mpq_class(2497, 1000)), 3); // 2.497 -> 2.50 -> 3
    shift_rounding away{-1, tie_rule::zero};
    EXPECT_EQ(centering_shift(mpq_class(-5, 2), away), -3);
    shift_rounding even{-1, tie_rule::even};
    EXPECT_EQ(centering_shift(mpq_class(5, 2), even), 2);
    EXPECT_EQ(centering_shift(mpq_class(7, 2), even), 4);
    EXPECT_EQ(parse_tie_rule("even"), tie_rule::even);
    EXPECT_THROW(parse_tie_rule("banker"), std::invalid_argument);
}

TEST(rounding, oracle_agreement)
{
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<long> dn(-100000, 100000), dd(1, 2000);
    for (int it = 0; it < 100000; ++it) {
        long n = dn(rng), d = dd(rng);
        mpq_class q(n, d);
        q.canonicalize();
        ASSERT_EQ(centering_shift(q), oracle_shift(n, d)) << n << "/" << d;
    }
}
