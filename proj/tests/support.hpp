#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <array>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toricqc/toricqc.hpp"

#ifndef TORICQC_DATA_DIR
#define TORICQC_DATA_DIR "data"
#endif

namespace tq_test {

using namespace toricqc;

inline std::string data_path(const std::string& name) { return std::string(TORICQC_DATA_DIR) + "/" + name; }

inline const Config& cubic_config() {
    static const Config cfg = load_config(data_path("p1112_cubic.json"));
    return cfg;
}

inline const Config& quintic_config() {
    static const Config cfg = load_config(data_path("quintic.json"));
    return cfg;
}

inline SeriesKey key_lk(const SeriesContext& ctx, long l, long k) {
    return SeriesKey{ctx.chart.degree_of({Q(l), Q(k)}), TIndex(ctx.num_t(), 0)};
}

inline SectorId half_sector() { return SectorId{QVector{Q(1, 2), Q(0)}}; }

// ---------------------------------------------------------------------------
// Cubic oracle. Elements are Laurent polynomials in z whose coefficients are
// polynomials in p truncated at p^3 (untwisted) or at p^1 (twisted, p -> 0),
// built directly from the product formula of the hypersurface I-function
// with nothing shared with the library's ring or series code.

struct PZ {
    int pcap = 3;                        // p^pcap = 0
    std::map<std::pair<int, int>, Q> c;  // (z exponent, p exponent) -> coefficient

    static PZ one(int pcap) {
        PZ r;
        r.pcap = pcap;
        r.c[{0, 0}] = 1;
        return r;
    }
    void add(int ze, int pe, const Q& v) {
        if (pe >= pcap || v == 0) return;
        Q& slot = c[{ze, pe}];
        slot += v;
        if (slot == 0) c.erase({ze, pe});
    }
    PZ operator*(const PZ& o) const {
        PZ r;
        r.pcap = pcap;
        for (const auto& [a, va] : c)
            for (const auto& [b, vb] : o.c) r.add(a.first + b.first, a.second + b.second, va * vb);
        return r;
    }
    PZ scaled(const Q& s) const {
        PZ r;
        r.pcap = pcap;
        for (const auto& [a, v] : c) r.add(a.first, a.second, v * s);
        return r;
    }
};

/// a p + b z
inline PZ linear(int pcap, const Q& a, const Q& b) {
    PZ r;
    r.pcap = pcap;
    r.add(0, 1, a);
    r.add(1, 0, b);
    return r;
}

/// 1/(a p + b z) = sum_j (-a)^j p^j / (b^{j+1} z^{j+1}), b != 0
inline PZ inverse_linear(int pcap, const Q& a, const Q& b) {
    PZ r;
    r.pcap = pcap;
    Q coef = Q(1) / b;
    for (int j = 0; j < pcap; ++j) {
        r.add(-(j + 1), j, coef);
        coef *= -a / b;
    }
    return r;
}

inline Q fact(long n) {
    Q r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

struct OracleCoefficient {
    bool twisted = false;
    PZ value;
};

/// Coefficient of q^l x^k of the cubic I-function.
inline OracleCoefficient cubic_oracle(long l, long k) {
    const Q v(Q(l - k) / 2), w(Q(3 * l - k) / 2);
    const bool twisted = ((k - l) % 2) != 0;
    const bool w_negative_integral = w < 0 && w.get_den() == 1;
    const int pcap = twisted ? 1 : 3;
    PZ f;
    f.pcap = pcap;
    f.add(-static_cast<int>(k), 0, Q(1) / fact(k));  // 1/(z^k k!)

    auto ints_between = [](const Q& lo, bool lo_incl, const Q& hi) {
        std::vector<long> out;  // integers i with lo <(=) i < hi
        for (long i = floor_q(lo).get_si() - 1; Q(i) < hi; ++i)
            if (lo_incl ? Q(i) >= lo : Q(i) > lo) out.push_back(i);
        return out;
    };

    // rho_1..rho_3: prod_{i<0} / prod_{i<v} of (p + (v-i) z)^3; the range is
    // inclusive at v when 3l - k >= 0 and strict otherwise
    if (v >= 0) {
        for (long i : ints_between(Q(0), true, v))
            for (int r = 0; r < 3; ++r) f = f * inverse_linear(pcap, 1, v - i);
    } else {
        for (long i : ints_between(v, w >= 0, Q(0)))
            for (int r = 0; r < 3; ++r) f = f * linear(pcap, 1, v - i);
    }
    // 1 / prod_{0<=i<l} (2p + (l-i) z)
    for (long i = 0; i < l; ++i) f = f * inverse_linear(pcap, 2, Q(l - i));
    if (w >= 0) {
        for (long i : ints_between(Q(0), true, w)) f = f * linear(pcap, 3, w - i);
    } else {
        for (long i : ints_between(w, false, Q(0))) f = f * inverse_linear(pcap, 3, w - i);
    }
    if (w_negative_integral) {
        PZ third;
        third.pcap = pcap;
        third.add(0, 2, Q(1, 3));
        f = f * third;
    }
    return {twisted, f};
}

/// The oracle value as a library ZLaurent (for comparison only).
inline ZLaurent to_zlaurent(const OracleCoefficient& o) {
    const std::size_t k = 2;
    SectorId s = o.twisted ? half_sector() : SectorId::identity(k);
    ZLaurent out;
    for (const auto& [a, v] : o.value.c) {
        Monomial m{a.second, 0};
        CRClass c;
        c.add(s, Poly::monomial(m, v));
        out.add(a.first, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quintic oracle: prod_{i=1}^{5d} (5H + i z) / prod_{i=1}^{d} (H + i z)^5 with
// z = 1 and H^4 = 0, as a dense coefficient array.

using Dense4 = std::array<Q, 4>;

inline Dense4 dense_mul(const Dense4& a, const Dense4& b) {
    Dense4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; i + j < 4; ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline Dense4 quintic_oracle(long d) {
    Dense4 acc{Q(1), Q(0), Q(0), Q(0)};
    for (long i = 1; i <= 5 * d; ++i) acc = dense_mul(acc, Dense4{Q(i), Q(5), Q(0), Q(0)});
    for (long i = 1; i <= d; ++i) {
        // 1/(i + H) = sum_j (-1)^j H^j / i^{j+1}
        Dense4 inv{};
        Q c = Q(1) / Q(i);
        for (int j = 0; j < 4; ++j) {
            inv[j] = c;
            c *= Q(-1) / Q(i);
        }
        for (int r = 0; r < 5; ++r) acc = dense_mul(acc, inv);
    }
    return acc;
}

inline Z quintic_unit_closed_form(long d) {
    Z num, den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(5 * d));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(d));
    Z den5 = den * den * den * den * den;
    return num / den5;
}

// ---------------------------------------------------------------------------
// Random data for property suites.

struct RandomModel {
    ContextPtr ctx;
    TruncationSpec trunc;
    std::vector<Degree> effective;
};

inline std::vector<std::string> gen_names(std::size_t k) {
    std::vector<std::string> n;
    for (std::size_t j = 0; j < k; ++j) n.push_back("H" + std::to_string(j + 1));
    return n;
}

/// Random presentation with k <= 3 and n <= 6; theta is a positive
/// combination of some rho_i so the semistable locus is nonempty. May throw
/// a validation error for degenerate draws; callers redraw.
inline GitPresentation random_presentation(std::mt19937& rng, std::size_t max_k = 3, std::size_t max_n = 6) {
    std::uniform_int_distribution<std::size_t> kd(1, max_k);
    const std::size_t k = kd(rng);
    std::uniform_int_distribution<std::size_t> nd(k + 1, std::max(k + 1, max_n));
    const std::size_t n = nd(rng);
    std::uniform_int_distribution<long> ed(-1, 2);
    std::vector<Character> rho(n, Character{std::vector<long>(k, 0)});
    for (auto& r : rho)
        for (auto& c : r.coords) c = ed(rng);
    for (std::size_t j = 0; j < k && j < n; ++j) rho[j].coords[j] = std::max<long>(rho[j].coords[j], 1);
    Character theta{std::vector<long>(k, 0)};
    std::uniform_int_distribution<long> wd(0, 2);
    for (std::size_t i = 0; i < n; ++i) {
        long w = wd(rng);
        for (std::size_t j = 0; j < k; ++j) theta.coords[j] += w * rho[i].coords[j];
    }
    if (theta.is_zero()) theta = rho[0];
    std::vector<Character> tau;
    if (rng() % 2) {
        Character t{std::vector<long>(k, 0)};
        for (auto& c : t.coords) c = ed(rng);
        tau.push_back(t);
    }
    return GitPresentation(k, rho, theta, tau, "random");
}

/// Degrees with Z^ss_beta nonempty: integer values on a basis inside a
/// minimal semistable support, solved back to beta.
inline std::vector<Degree> random_effective_degrees(std::mt19937& rng, const GitPresentation& p, std::size_t count) {
    std::vector<Degree> out;
    auto supports = semistable_supports(p);
    if (supports.empty()) return out;
    std::uniform_int_distribution<long> vd(0, 2);
    for (std::size_t tries = 0; out.size() < count && tries < 20 * count; ++tries) {
        const IndexSet& s = supports[rng() % supports.size()];
        // pick k independent members of s
        std::vector<QVector> rows;
        std::vector<std::size_t> idx;
        for (auto i : s) {
            auto trial = rows;
            trial.push_back(p.rho[i].as_q());
            if (rank_of_vectors(trial) > rows.size()) {
                rows = trial;
                idx.push_back(i);
            }
        }
        if (rows.size() != p.rank) continue;
        // beta . rho_i = v_i for i in idx
        QVector target;
        for (std::size_t r = 0; r < idx.size(); ++r) target.push_back(Q(vd(rng)));
        std::vector<QVector> cols(p.rank, QVector(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t j = 0; j < p.rank; ++j) cols[j][r] = rows[r][j];
        auto sol = solve_unique(cols, target);
        if (!sol) continue;
        Degree b{*sol};
        if (support_profile(p, b).zss_nonempty) out.push_back(b);
    }
    return out;
}

inline Poly random_poly(std::mt19937& rng, std::size_t nvars, int max_deg, bool allow_constant) {
    std::uniform_int_distribution<long> cd(-3, 3);
    Poly p(nvars);
    Monomial m(nvars, 0);
    const int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
        int left = max_deg;
        for (auto& e : m) {
            e = left > 0 ? static_cast<int>(rng() % (left + 1)) : 0;
            left -= e;
        }
        if (!allow_constant && total_degree(m) == 0) continue;
        p += Poly::monomial(m, make_q(cd(rng), 1 + static_cast<long>(rng() % 2)));
    }
    return p;
}

}  // namespace tq_test
