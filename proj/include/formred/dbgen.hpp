#ifndef FORMRED_DBGEN_HPP
#define FORMRED_DBGEN_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "binary_form.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "rounding.hpp"

namespace formred {

/*
 * Which Gaussian integers are candidate roots, always with y >= 1 and
 * 1 < x^2 + y^2 <= r2^2:
 *   halfdisc_exclude_i  all such points (the standard n-gon counts),
 *   right_halfdisc      additionally x > 0 (the max-distance searches).
 */
enum class lattice_region { halfdisc_exclude_i, right_halfdisc };

inline std::string_view to_string(lattice_region r)
{
    return r == lattice_region::halfdisc_exclude_i ? "halfdisc-exclude-i" : "right-halfdisc";
}

inline lattice_region parse_region(std::string_view s)
{
    if (s == "halfdisc-exclude-i") return lattice_region::halfdisc_exclude_i;
    if (s == "right-halfdisc") return lattice_region::right_halfdisc;
    throw std::invalid_argument("unknown region: " + std::string(s));
}

struct lattice_config {
    int r2 = 4;
    int k = 3;
    lattice_region region = lattice_region::halfdisc_exclude_i;
    bool allow_large = false;

    void validate() const
    {
        if (r2 < 2) throw std::invalid_argument("r2 must be >= 2");
        if (r2 > 64 && !allow_large) throw std::invalid_argument("r2 > 64 needs an explicit override");
        if (k < 1) throw std::invalid_argument("k must be >= 1");
    }
};

/* sorted by (x, y) */
inline std::vector<lattice_point> lattice_points(int r2,
                                                 lattice_region region = lattice_region::halfdisc_exclude_i)
{
    if (r2 < 2) throw std::invalid_argument("lattice_points: r2 must be >= 2");
    std::vector<lattice_point> pts;
    long R = r2;
    for (long x = -R; x <= R; ++x) {
        if (region == lattice_region::right_halfdisc && x <= 0) continue;
        for (long y = 1; y <= R; ++y) {
            long n2 = x * x + y * y;
            if (n2 > 1 && n2 <= R * R) pts.push_back({x, y});
        }
    }
    return pts;
}

/* rough lattice point count between the radii, pi (r2^2 - r1^2) */
inline double gauss_estimate(double r1, double r2)
{
    if (r1 < 0 || r2 < r1) throw std::invalid_argument("gauss_estimate: need 0 <= r1 <= r2");
    return std::numbers::pi * (r2 * r2 - r1 * r1);
}

inline mpz_class binomial(unsigned long n, unsigned long k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/*
 * Visit the k-subsets of {0..n-1} in lexicographic order whose first
 * element lies in [first_begin, first_end). fn receives the sorted
 * index set; returning false stops the walk.
 */
template <class Fn>
void for_each_combination(int n, int k, int first_begin, int first_end, Fn && fn)
{
    if (k < 1 || k > n) return;
    first_end = std::min(first_end, n - k + 1);
    if (first_begin >= first_end) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = first_begin + i;
    for (;;) {
        if (!fn(std::span<int const>(idx))) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        if (i == 0 && idx[0] >= first_end) return;
        for (int j = i + 1; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

template <class Fn>
void for_each_combination(int n, int k, Fn && fn)
{
    for_each_combination(n, k, 0, n, std::forward<Fn>(fn));
}

/*
 * Run produce(block) for blocks 0..nblocks-1 on `workers` threads and
 * hand the results to consume() in block order. At most a bounded
 * number of finished blocks wait to be consumed.
 */
template <class T, class Produce, class Consume>
void run_ordered(std::size_t nblocks, unsigned workers, Produce && produce, Consume && consume)
{
    if (workers <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            consume(produce(b));
        return;
    }
    std::vector<std::optional<T>> slots(nblocks);
    std::mutex mu;
    std::condition_variable cv;
    std::size_t next = 0, consumed = 0;
    std::size_t const window = 4 * workers;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t b;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return failure || next >= nblocks || next < consumed + window; });
                if (failure || next >= nblocks) return;
                b = next++;
            }
            try {
                T r = produce(b);
                std::lock_guard lk(mu);
                slots[b] = std::move(r);
            } catch (...) {
                std::lock_guard lk(mu);
                if (!failure) failure = std::current_exception();
            }
            cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    try {
        for (std::size_t b = 0; b < nblocks; ++b) {
            T r;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return failure || slots[b].has_value(); });
                if (failure) break;
                r = std::move(*slots[b]);
                slots[b].reset();
                consumed = b + 1;
            }
            cv.notify_all();
            consume(std::move(r));
        }
    } catch (...) {
        std::lock_guard lk(mu);
        if (!failure) failure = std::current_exception();
    }
    cv.notify_all();
    for (auto & t : pool)
        t.join();
    if (failure) std::rethrow_exception(failure);
}

/*
 * Database row: sorted roots, coefficients of the totally complex form
 * (descending x power), centre of mass and hyperbolic centroid.
 */
struct ngon_record {
    std::vector<lattice_point> roots;
    std::vector<mpz_class> coeffs;
    uhp_point com;
    uhp_point hyp;

    friend bool operator==(ngon_record const &, ngon_record const &) = default;
};

inline std::vector<uhp_point> to_uhp(std::span<lattice_point const> pts)
{
    std::vector<uhp_point> out;
    for (auto const & p : pts)
        out.push_back({double(p.x), double(p.y)});
    return out;
}

inline ngon_record build_record(std::span<lattice_point const> roots)
{
    ngon_record r;
    r.roots.assign(roots.begin(), roots.end());
    std::sort(r.roots.begin(), r.roots.end());
    r.coeffs = from_upper_roots<mpz_class>(r.roots).coeffs();
    auto z = to_uhp(r.roots);
    r.com = center_of_mass(z);
    r.hyp = hyperbolic_centroid(z).point;
    return r;
}

/* ---- JSONL persistence ---- */

inline std::string format_record(ngon_record const & r)
{
    std::string s = "{\"roots\":[";
    for (std::size_t i = 0; i < r.roots.size(); ++i)
        s += fmt::format("{}[{},{}]", i ? "," : "", r.roots[i].x, r.roots[i].y);
    s += "],\"coeffs\":[";
    for (std::size_t i = 0; i < r.coeffs.size(); ++i)
        s += fmt::format("{}\"{}\"", i ? "," : "", r.coeffs[i].get_str());
    s += fmt::format("],\"com\":[{:.6f},{:.6f}],\"hyp\":[{:.6f},{:.6f}]}}", r.com.t, r.com.u,
                     r.hyp.t, r.hyp.u);
    return s;
}

inline ngon_record parse_record(std::string_view line)
{
    auto j = nlohmann::json::parse(line);
    ngon_record r;
    for (auto const & p : j.at("roots")) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("root must be [x, y]");
        r.roots.push_back({p.at(0).get<long>(), p.at(1).get<long>()});
    }
    for (auto const & c : j.at("coeffs")) {
        mpz_class z;
        if (z.set_str(c.get<std::string>(), 10) != 0)
            throw std::invalid_argument("coefficient is not a decimal integer");
        r.coeffs.push_back(z);
    }
    auto pair = [&](char const * key) {
        auto const & a = j.at(key);
        if (!a.is_array() || a.size() != 2) throw std::invalid_argument(std::string(key) + " must be [t, u]");
        return uhp_point{a.at(0).get<double>(), a.at(1).get<double>()};
    };
    r.com = pair("com");
    r.hyp = pair("hyp");
    return r;
}

inline void write_db(std::span<ngon_record const> records, std::ostream & out)
{
    for (auto const & r : records)
        out << format_record(r) << '\n';
}

inline void write_db(std::span<ngon_record const> records, std::string const & path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_db(records, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ngon_record> read_db(std::istream & in)
{
    std::vector<ngon_record> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(parse_record(line));
        } catch (std::exception const & e) {
            throw std::runtime_error(fmt::format("line {}: malformed record: {}", lineno, e.what()));
        }
    }
    return out;
}

inline std::vector<ngon_record> read_db(std::string const & path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_db(in);
}

/* ---- experiments ---- */

namespace detail {

/* coefficient bound for prod (x^2 - 2 a x + |alpha|^2) */
inline bool fits_int64(std::span<lattice_point const> roots, long shift)
{
    double b = 1;
    for (auto const & p : roots) {
        double x = double(p.x - shift), y = double(p.y);
        b *= 1 + 2 * std::fabs(x) + x * x + y * y;
    }
    return b < 4e18;
}

/* height of the form with the given roots translated by -shift (monic, so primitive) */
inline mpz_class shifted_height(std::span<lattice_point const> roots, long shift)
{
    std::vector<lattice_point> moved(roots.begin(), roots.end());
    for (auto & p : moved)
        p.x -= shift;
    if (fits_int64(roots, shift)) {
        auto f = from_upper_roots<std::int64_t>(moved);
        std::int64_t m = 0;
        for (auto c : f.coeffs())
            m = std::max(m, c < 0 ? -c : c);
        return mpz_class(static_cast<long>(m));
    }
    return height(from_upper_roots<mpz_class>(moved));
}

inline std::vector<lattice_point> gather(std::span<lattice_point const> pts, std::span<int const> idx)
{
    std::vector<lattice_point> out;
    out.reserve(idx.size());
    for (int i : idx)
        out.push_back(pts[i]);
    return out;
}

} // namespace detail

enum class distance_metric { euclidean, hyperbolic };

inline distance_metric parse_metric(std::string_view s)
{
    if (s == "euclidean") return distance_metric::euclidean;
    if (s == "hyperbolic") return distance_metric::hyperbolic;
    throw std::invalid_argument("unknown metric: " + std::string(s));
}

/*
 * Height coordinate of the hyperbolic centre in the max-distance
 * search: the centroid's u, or the 1/y-weighted mean of the root
 * heights psi(y, y) (the centres the triangle witness is stated with).
 */
enum class hyp_height_rule { centroid, harmonic };

inline hyp_height_rule parse_hyp_height(std::string_view s)
{
    if (s == "centroid") return hyp_height_rule::centroid;
    if (s == "harmonic") return hyp_height_rule::harmonic;
    throw std::invalid_argument("unknown hyperbolic height rule: " + std::string(s));
}

struct max_distance_options {
    distance_metric metric = distance_metric::euclidean;
    hyp_height_rule hyp_height = hyp_height_rule::harmonic;
    unsigned workers = 1;
};

struct max_distance_result {
    ngon_record record;
    double distance = -1;
    std::uint64_t examined = 0;
};

/*
 * Over all k-gons of the configured lattice, the one whose centre of
 * mass and hyperbolic centre are farthest apart. Ties go to the
 * lexicographically smallest root set.
 */
inline max_distance_result max_distance(lattice_config const & cfg, max_distance_options const & opt = {})
{
    cfg.validate();
    auto pts = lattice_points(cfg.r2, cfg.region);
    int n = static_cast<int>(pts.size());
    if (cfg.k > n) throw std::invalid_argument("max_distance: k exceeds the number of lattice points");
    std::vector<double> xs, ys, inv;
    for (auto const & p : pts) {
        xs.push_back(double(p.x));
        ys.push_back(double(p.y));
        inv.push_back(1.0 / double(p.y));
    }
    int k = cfg.k;
    struct best_t {
        double d = -1;
        std::vector<int> idx;
        std::uint64_t count = 0;
    };
    auto produce = [&](std::size_t block) {
        best_t best;
        int first = static_cast<int>(block);
        for_each_combination(n, k, first, first + 1, [&](std::span<int const> idx) {
            double sx = 0, sy = 0, w = 0, wx = 0, wy = 0, wn = 0;
            for (int i : idx) {
                sx += xs[i];
                sy += ys[i];
                w += inv[i];
                wx += inv[i] * xs[i];
                wy += inv[i] * ys[i];
                wn += inv[i] * (xs[i] * xs[i] + ys[i] * ys[i]);
            }
            double ct = sx / k, cu = sy / k;
            double ht = wx / w;
            double hu = opt.hyp_height == hyp_height_rule::centroid ? std::sqrt(wn / w - ht * ht)
                                                                    : double(k) / w;
            double d = opt.metric == distance_metric::euclidean
                           ? std::hypot(ct - ht, cu - hu)
                           : dist_h({ct, cu}, {ht, hu});
            ++best.count;
            if (d > best.d) {
                best.d = d;
                best.idx.assign(idx.begin(), idx.end());
            }
            return true;
        });
        return best;
    };
    best_t overall;
    std::size_t nblocks = static_cast<std::size_t>(std::max(0, n - k + 1));
    run_ordered<best_t>(nblocks, opt.workers, produce, [&](best_t b) {
        overall.count += b.count;
        if (b.d > overall.d) {
            overall.d = b.d;
            overall.idx = std::move(b.idx);
        }
    });
    max_distance_result res;
    res.distance = overall.d;
    res.examined = overall.count;
    if (!overall.idx.empty()) res.record = build_record(detail::gather(pts, overall.idx));
    return res;
}

enum class same_rule { height, shift };

inline same_rule parse_same_rule(std::string_view s)
{
    if (s == "height") return same_rule::height;
    if (s == "shift") return same_rule::shift;
    throw std::invalid_argument("unknown same-result rule: " + std::string(s));
}

struct compare_stats {
    std::uint64_t total = 0;
    std::uint64_t hyperbolic_wins = 0;
    std::uint64_t julia_wins = 0;
    std::uint64_t same = 0;

    compare_stats & operator+=(compare_stats const & o)
    {
        total += o.total;
        hyperbolic_wins += o.hyperbolic_wins;
        julia_wins += o.julia_wins;
        same += o.same;
        return *this;
    }
    friend bool operator==(compare_stats const &, compare_stats const &) = default;
};

struct compare_options {
    shift_rounding rounding;
    same_rule same = same_rule::height;
    unsigned workers = 1;
};

/*
 * Per k-gon: height after shifting by the rounded centre of mass
 * (labelled "Julia" in the comparison statistics) against height after shifting
 * by the rounded hyperbolic centroid; the strictly smaller one wins.
 */
inline compare_stats compare_one(std::span<lattice_point const> roots, compare_options const & opt,
                                 compare_stats acc = {})
{
    mpz_class sc = centering_shift(center_of_mass_real_part_exact(roots), opt.rounding);
    mpz_class sh = centering_shift(centroid_real_part_exact(roots), opt.rounding);
    ++acc.total;
    if (sc == sh && opt.same == same_rule::shift) {
        ++acc.same;
        return acc;
    }
    mpz_class hc = detail::shifted_height(roots, sc.get_si());
    mpz_class hh = sc == sh ? hc : detail::shifted_height(roots, sh.get_si());
    if (hh < hc)
        ++acc.hyperbolic_wins;
    else if (hc < hh)
        ++acc.julia_wins;
    else
        ++acc.same;
    return acc;
}

inline compare_stats run_compare(lattice_config const & cfg, compare_options const & opt = {})
{
    cfg.validate();
    auto pts = lattice_points(cfg.r2, cfg.region);
    int n = static_cast<int>(pts.size());
    int k = cfg.k;
    auto produce = [&](std::size_t block) {
        compare_stats s;
        std::vector<lattice_point> roots(k);
        int first = static_cast<int>(block);
        for_each_combination(n, k, first, first + 1, [&](std::span<int const> idx) {
            for (int i = 0; i < k; ++i)
                roots[i] = pts[idx[i]];
            s = compare_one(roots, opt, s);
            return true;
        });
        return s;
    };
    compare_stats total;
    std::size_t nblocks = static_cast<std::size_t>(std::max(0, n - k + 1));
    run_ordered<compare_stats>(nblocks, opt.workers, produce, [&](compare_stats s) { total += s; });
    return total;
}

struct generate_summary {
    std::uint64_t records = 0;
    std::uint64_t checksum = 0; // sum of constant coefficients mod 2^64
};

/*
 * Stream every k-gon record of the configuration, in canonical order,
 * to sink (a null sink only computes the summary).
 */
inline generate_summary generate(lattice_config const & cfg, unsigned workers,
                                 std::function<void(std::string const &)> const & sink)
{
    cfg.validate();
    auto pts = lattice_points(cfg.r2, cfg.region);
    int n = static_cast<int>(pts.size());
    int k = cfg.k;
    struct chunk {
        generate_summary s;
        std::string text;
    };
    bool store = static_cast<bool>(sink);
    auto produce = [&](std::size_t block) {
        chunk c;
        std::vector<lattice_point> roots(k);
        int first = static_cast<int>(block);
        for_each_combination(n, k, first, first + 1, [&](std::span<int const> idx) {
            for (int i = 0; i < k; ++i)
                roots[i] = pts[idx[i]];
            ++c.s.records;
            if (store) {
                auto r = build_record(roots);
                c.s.checksum += static_cast<std::uint64_t>(mpz_class(r.coeffs.back()).get_ui());
                c.text += format_record(r);
                c.text += '\n';
            } else if (detail::fits_int64(roots, 0)) {
                auto f = from_upper_roots<std::int64_t>(roots);
                auto z = to_uhp(roots);
                auto com = center_of_mass(z);
                auto hyp = hyperbolic_centroid(z);
                c.s.checksum += static_cast<std::uint64_t>(f.coeffs().back());
                // keep the centre computations observable
                if (!(com.u > 0) || !(hyp.point.u > 0)) throw numeric_error("invalid centre");
            } else {
                auto r = build_record(roots);
                c.s.checksum += static_cast<std::uint64_t>(mpz_class(r.coeffs.back()).get_ui());
            }
            return true;
        });
        return c;
    };
    generate_summary total;
    std::size_t nblocks = static_cast<std::size_t>(std::max(0, n - k + 1));
    run_ordered<chunk>(nblocks, workers, produce, [&](chunk c) {
        total.records += c.s.records;
        total.checksum += c.s.checksum;
        if (store && !c.text.empty()) sink(c.text);
    });
    return total;
}

} // namespace formred

#endif
