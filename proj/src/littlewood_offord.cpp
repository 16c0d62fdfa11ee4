#include "bsp/littlewood_offord.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "json.hpp"

#include "bsp/errors.hpp"
#include "bsp/spectral.hpp"

namespace bsp {

double GAP::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < rank; ++i) {
        v *= static_cast<double>(upper[i] - lower[i] + 1);
    }
    return v;
}

void GAP::validate() const {
    if (generators.size() != rank || lower.size() != rank || upper.size() != rank) {
        throw DimensionError("GAP: rank does not match generator/bound lengths");
    }
    for (std::size_t i = 0; i < rank; ++i) {
        if (lower[i] > upper[i]) throw ConstraintError("GAP: lower bound above upper bound");
    }
    if (symmetric) {
        if (std::abs(g0) != 0.0) throw ConstraintError("GAP: symmetric requires g0 = 0");
        for (std::size_t i = 0; i < rank; ++i) {
            if (lower[i] != -upper[i]) {
                throw ConstraintError("GAP: symmetric requires lower = -upper");
            }
        }
    }
}

std::string GAP::to_json() const {
    nlohmann::json j;
    j["rank"] = rank;
    j["g0"] = {g0.real(), g0.imag()};
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : generators) gens.push_back({g.real(), g.imag()});
    j["generators"] = gens;
    j["lower"] = lower;
    j["upper"] = upper;
    j["symmetric"] = symmetric;
    if (rational_bound) j["rational_bound"] = *rational_bound;
    return j.dump();
}

GAP GAP::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("GAP: bad JSON: ") + e.what());
    }
    GAP q;
    try {
        q.rank = j.at("rank").get<std::size_t>();
        const auto& g0 = j.at("g0");
        q.g0 = {g0.at(0).get<double>(), g0.at(1).get<double>()};
        for (const auto& g : j.at("generators")) {
            q.generators.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
        }
        q.lower = j.at("lower").get<std::vector<long long>>();
        q.upper = j.at("upper").get<std::vector<long long>>();
        q.symmetric = j.at("symmetric").get<bool>();
        if (j.contains("rational_bound")) q.rational_bound = j["rational_bound"].get<long long>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("GAP: missing or malformed field: ") + e.what());
    }
    q.validate();
    return q;
}

GapEnumeration gap_enumerate(const GAP& q, std::size_t cap) {
    q.validate();
    const double vol = q.volume();
    if (vol > static_cast<double>(cap)) throw CapExceeded("gap_enumerate: volume above cap");
    const std::size_t count = static_cast<std::size_t>(vol);
    GapEnumeration out;
    out.elements.reserve(count);
    std::vector<long long> k(q.rank);
    for (std::size_t i = 0; i < q.rank; ++i) k[i] = q.lower[i];
    while (true) {
        std::complex<double> e = q.g0;
        for (std::size_t i = 0; i < q.rank; ++i) {
            e += static_cast<double>(k[i]) * q.generators[i];
        }
        out.elements.push_back(e);
        // Odometer increment.
        std::size_t i = 0;
        while (i < q.rank && k[i] == q.upper[i]) {
            k[i] = q.lower[i];
            ++i;
        }
        if (i == q.rank) break;
        ++k[i];
    }
    if (q.rank == 0) out.elements.assign(1, q.g0);

    std::vector<std::complex<double>> sorted = out.elements;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::size_t distinct = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (std::abs(sorted[i] - sorted[i - 1]) > 1e-12) ++distinct;
    }
    out.is_proper = (distinct == out.elements.size());
    return out;
}

double gap_distance(std::complex<double> point, const GAP& q, std::size_t cap) {
    const GapEnumeration e = gap_enumerate(q, cap);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& el : e.elements) best = std::min(best, std::abs(point - el));
    return best;
}

SmallBallResult small_ball_exact(const std::vector<double>& b, double beta, Atom atom) {
    const std::size_t n = b.size();
    if (n == 0) throw ConstraintError("small_ball_exact: empty coefficient vector");
    if (n > 24) throw TooLarge("small_ball_exact: more than 24 coefficients");
    if (beta < 0.0) throw ConstraintError("small_ball_exact: beta must be >= 0");
    std::vector<double> sums{0.0};
    sums.reserve(std::size_t{1} << n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sz = sums.size();
        sums.resize(2 * sz);
        const double lo = (atom == Atom::bernoulli_pm1) ? -b[i] : 0.0;
        const double hi = b[i];
        for (std::size_t k = 0; k < sz; ++k) {
            const double s = sums[k];
            sums[k] = s + lo;
            sums[sz + k] = s + hi;
        }
    }
    std::sort(sums.begin(), sums.end());
    // Best window of width 2*beta over the sorted atoms.
    std::size_t best = 0;
    std::size_t best_at = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (j < i) j = i;
        while (j < sums.size() && sums[j] <= sums[i] + 2.0 * beta) ++j;
        if (j - i > best) {
            best = j - i;
            best_at = i;
        }
    }
    SmallBallResult out;
    out.exact = true;
    out.trials_or_atoms = sums.size();
    out.rho = static_cast<double>(best) / static_cast<double>(sums.size());
    out.argmax_center = sums[best_at] + beta;
    return out;
}

SmallBallResult small_ball_mc(const std::vector<std::complex<double>>& b, double beta,
                              const std::function<double(RngStream&)>& draw, std::size_t trials,
                              RngStream& rng) {
    if (b.empty()) throw ConstraintError("small_ball_mc: empty coefficient vector");
    if (trials < 1000) throw ConstraintError("small_ball_mc: need at least 1000 trials");
    if (beta <= 0.0) throw ConstraintError("small_ball_mc: beta must be > 0");
    bool real_only = true;
    for (const auto& c : b) {
        if (c.imag() != 0.0) {
            real_only = false;
            break;
        }
    }
    SmallBallResult out;
    out.exact = false;
    out.trials_or_atoms = trials;
    if (real_only) {
        std::vector<double> sums(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            double s = 0.0;
            for (const auto& c : b) s += c.real() * draw(rng);
            sums[t] = s;
        }
        std::sort(sums.begin(), sums.end());
        std::size_t best = 0;
        std::size_t best_at = 0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            if (j < i) j = i;
            while (j < trials && sums[j] <= sums[i] + 2.0 * beta) ++j;
            if (j - i > best) {
                best = j - i;
                best_at = i;
            }
        }
        out.rho = static_cast<double>(best) / static_cast<double>(trials);
        out.argmax_center = sums[best_at] + beta;
    } else {
        // 2-D binning with bin width 2*beta per axis.
        const double w = 2.0 * beta;
        std::unordered_map<std::uint64_t, std::size_t> bins;
        std::unordered_map<std::uint64_t, std::complex<double>> reps;
        std::size_t best = 0;
        std::uint64_t best_key = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            std::complex<double> s(0.0, 0.0);
            for (const auto& c : b) s += c * draw(rng);
            const auto bx = static_cast<std::int64_t>(std::floor(s.real() / w));
            const auto by = static_cast<std::int64_t>(std::floor(s.imag() / w));
            const std::uint64_t key = (static_cast<std::uint64_t>(bx) << 32) ^
                                      (static_cast<std::uint64_t>(by) & 0xffffffffULL);
            const std::size_t cnt = ++bins[key];
            reps.emplace(key, s);
            if (cnt > best) {
                best = cnt;
                best_key = key;
            }
        }
        out.rho = static_cast<double>(best) / static_cast<double>(trials);
        out.argmax_center = reps[best_key];
    }
    out.std_error = std::sqrt(out.rho * (1.0 - out.rho) / static_cast<double>(trials));
    return out;
}

std::vector<std::complex<double>> cofactor_unit_vector(const ComplexMatrix& m, std::size_t row) {
    if (m.rows() != m.cols()) throw DimensionError("cofactor_unit_vector: matrix not square");
    const std::size_t n = m.rows();
    if (row >= n) throw DimensionError("cofactor_unit_vector: row out of range");
    const std::complex<double> det = complex_det(m);
    if (std::abs(det) < 1e-300) throw SingularInput("cofactor_unit_vector: determinant vanishes");
    const ComplexMatrix inv = complex_inverse(m);
    // Cofactor c_{row,j} = det(M) * (M^{-1})_{j,row}.
    std::vector<std::complex<double>> c(n);
    std::complex<double> csum(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = det * inv.at(j, row);
        csum += c[j];
    }
    std::vector<std::complex<double>> a(n);
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = c[j] + csum;
        norm_sq += std::norm(a[j]);
    }
    if (norm_sq <= 0.0) throw SingularInput("cofactor_unit_vector: zero linear form");
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (auto& v : a) v *= inv_norm;
    return a;
}

namespace {

struct Candidate {
    std::complex<double> g;
};

// Score a rank-1 generator against the coefficients: integer multiples of g
// must cover all but a few entries within delta, with a box no larger than
// size_cap.
std::optional<RankOneFit> score_generator(const std::vector<std::complex<double>>& coeffs,
                                          std::complex<double> g, double delta,
                                          std::size_t size_cap) {
    const double ga = std::abs(g);
    if (ga <= delta) return std::nullopt;
    long long kmin = 0;
    long long kmax = 0;
    std::size_t exceptional = 0;
    for (const auto& c : coeffs) {
        const double kr = (c * std::conj(g)).real() / (ga * ga);
        const double k = std::round(kr);
        if (std::abs(c - k * g) > delta || std::fabs(k) > 1e15) {
            ++exceptional;
            continue;
        }
        const auto ki = static_cast<long long>(k);
        kmin = std::min(kmin, ki);
        kmax = std::max(kmax, ki);
    }
    const double vol = static_cast<double>(kmax - kmin + 1);
    if (vol > static_cast<double>(size_cap)) return std::nullopt;
    RankOneFit fit;
    fit.exceptional = exceptional;
    fit.q.rank = 1;
    fit.q.generators = {g};
    fit.q.lower = {kmin};
    fit.q.upper = {kmax};
    fit.q.symmetric = false;
    return fit;
}

}  // namespace

std::optional<RankOneFit> fit_rank_one_gap(const std::vector<std::complex<double>>& coeffs,
                                           double delta, std::size_t size_cap) {
    if (size_cap > 10000) throw CapExceeded("fit_rank_one_gap: size_cap above 10^4");
    const std::size_t n = coeffs.size();
    if (n == 0) throw ConstraintError("fit_rank_one_gap: empty coefficient vector");
    const auto budget = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));

    // Candidate generators: small nonzero coefficients and pairwise
    // differences, plus fractional refinements g/q.
    std::vector<std::complex<double>> base;
    for (const auto& c : coeffs) {
        if (std::abs(c) > delta) base.push_back(c);
    }
    for (std::size_t i = 0; i < n && i < 64; ++i) {
        for (std::size_t j = i + 1; j < n && j < 64; ++j) {
            const std::complex<double> d = coeffs[i] - coeffs[j];
            if (std::abs(d) > delta) base.push_back(d);
        }
    }
    std::sort(base.begin(), base.end(),
              [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
    if (base.size() > 48) base.resize(48);

    std::optional<RankOneFit> best;
    auto consider = [&](std::complex<double> g) {
        auto fit = score_generator(coeffs, g, delta, size_cap);
        if (!fit || fit->exceptional > budget) return;
        if (!best || fit->exceptional < best->exceptional ||
            (fit->exceptional == best->exceptional && fit->q.volume() < best->q.volume())) {
            best = std::move(fit);
        }
    };
    for (const auto& g : base) {
        for (int q = 1; q <= 8; ++q) consider(g / static_cast<double>(q));
    }
    return best;
}

}  // namespace bsp
