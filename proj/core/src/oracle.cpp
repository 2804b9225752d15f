#include "cev/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace cev {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

// Pairs are grouped in fixed-size blocks; per-block sums are merged in block
// order so the result is independent of how blocks are spread over threads.
constexpr std::size_t block_pairs = 1024;

struct Step {
    double drift_dt;
    double vol_sqrt_dt;
};

// S^{β/2} with the common elasticities reduced to square roots.
template <int Quarter>
double diffusion_power(double s) {
    if constexpr (Quarter == 1) return std::sqrt(std::sqrt(s));
    if constexpr (Quarter == 2) return std::sqrt(s);
    if constexpr (Quarter == 3) return std::sqrt(s) * std::sqrt(std::sqrt(s));
    return s;
}

struct GeneralPower {
    double half_beta;
    double operator()(double s) const { return std::pow(s, half_beta); }
};

template <int Quarter>
struct QuarterPower {
    double operator()(double s) const { return diffusion_power<Quarter>(s); }
};

inline void advance(double& s, double z, const Step& st, auto&& power) {
    if (s > 0.0) {
        s += st.drift_dt * s + st.vol_sqrt_dt * power(s) * z;
        if (s <= 0.0) s = 0.0;
    }
}

// Simulates pairs [first, first + count), count <= lanes, writing two terminal
// prices per pair. Each pair owns its generator; stepping several pairs
// together only overlaps their dependency chains.
constexpr std::size_t lanes = 4;

template <class Power>
void simulate_pairs(std::uint64_t first, std::size_t count, double s0, std::size_t n_steps, const Step& st,
                    bool antithetic, std::uint64_t seed, Power power, double out[][2]) {
    boost::random::mt19937_64 gen[lanes];
    boost::random::normal_distribution<double> normal[lanes];
    double a[lanes];
    double b[lanes];
    for (std::size_t j = 0; j < count; ++j) {
        gen[j].seed(substream_seed(seed, first + j));
        a[j] = s0;
        b[j] = s0;
    }
    for (std::size_t i = 0; i < n_steps; ++i) {
        bool alive = false;
        for (std::size_t j = 0; j < count; ++j) {
            if (antithetic) {
                const double z = normal[j](gen[j]);
                advance(a[j], z, st, power);
                advance(b[j], -z, st, power);
            } else {
                advance(a[j], normal[j](gen[j]), st, power);
                advance(b[j], normal[j](gen[j]), st, power);
            }
            alive = alive || a[j] != 0.0 || b[j] != 0.0;
        }
        if (!alive) break;
    }
    for (std::size_t j = 0; j < count; ++j) {
        out[j][0] = a[j];
        out[j][1] = b[j];
    }
}

// Runs `per_block(first_pair, last_pair, block)` for every block, using up to
// `threads` workers.
template <class F>
void for_each_block(std::size_t n_pairs, unsigned threads, F per_block) {
    const std::size_t n_blocks = (n_pairs + block_pairs - 1) / block_pairs;
    auto run_range = [&](std::size_t worker, std::size_t stride) {
        for (std::size_t b = worker; b < n_blocks; b += stride) {
            per_block(b * block_pairs, std::min(n_pairs, (b + 1) * block_pairs), b);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n_blocks));
    if (workers == 1) {
        run_range(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(run_range, w, workers);
    }
    for (auto& t : pool) t.join();
}

template <class Visit>
void simulate(const CevParams& p, const SdeConfig& cfg, std::size_t n_pairs, Visit visit) {
    const double dt = p.tau / static_cast<double>(cfg.n_steps);
    const Step st{cfg.drift.value_or(p.rate) * dt, p.delta_vol * std::sqrt(dt)};
    auto dispatch = [&](auto power) {
        for_each_block(n_pairs, cfg.threads, [&](std::size_t first, std::size_t last, std::size_t block) {
            for (std::size_t i = first; i < last; i += lanes) {
                const std::size_t count = std::min(lanes, last - i);
                double out[lanes][2];
                simulate_pairs(i, count, p.spot, cfg.n_steps, st, cfg.antithetic, cfg.seed, power, out);
                for (std::size_t j = 0; j < count; ++j) visit(i + j, block, out[j]);
            }
        });
    };
    if (p.beta == 0.5) {
        dispatch(QuarterPower<1>{});
    } else if (p.beta == 1.0) {
        dispatch(QuarterPower<2>{});
    } else if (p.beta == 1.5) {
        dispatch(QuarterPower<3>{});
    } else {
        dispatch(GeneralPower{0.5 * p.beta});
    }
}

void check(const CevParams& p, const SdeConfig& cfg) {
    validate(p);
    if (cfg.n_paths < 1) throw std::invalid_argument("SdeConfig: n_paths must be >= 1");
    if (cfg.n_steps < 1) throw std::invalid_argument("SdeConfig: n_steps must be >= 1");
}

struct BlockSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t samples = 0;
    std::size_t absorbed = 0;
};

}  // namespace

McEstimate mc_price(const CevParams& p, OptionKind kind, const SdeConfig& cfg) {
    check(p, cfg);
    const double disc = std::exp(-p.rate * p.tau);
    auto payoff = [&](double s) {
        return kind == OptionKind::Call ? std::max(s - p.strike, 0.0) : std::max(p.strike - s, 0.0);
    };
    if (p.tau == 0.0) {
        return {payoff(p.spot), 0.0, 0.0};
    }

    // Without antithetics a "pair" is two independent paths, each its own sample.
    const std::size_t n_pairs = (cfg.n_paths + 1) / 2;
    const std::size_t n_blocks = (n_pairs + block_pairs - 1) / block_pairs;
    std::vector<BlockSums> blocks(n_blocks);
    simulate(p, cfg, n_pairs, [&](std::size_t i, std::size_t b, const double* s) {
        auto& acc = blocks[b];
        const bool second = 2 * i + 1 < cfg.n_paths;
        acc.absorbed += (s[0] == 0.0) + (second && s[1] == 0.0);
        if (cfg.antithetic) {
            const double v = second ? 0.5 * (payoff(s[0]) + payoff(s[1])) : payoff(s[0]);
            acc.sum += v;
            acc.sum_sq += v * v;
            acc.samples += 1;
        } else {
            for (int j = 0; j < (second ? 2 : 1); ++j) {
                const double v = payoff(s[j]);
                acc.sum += v;
                acc.sum_sq += v * v;
                acc.samples += 1;
            }
        }
    });

    BlockSums total;
    for (const auto& b : blocks) {
        total.sum += b.sum;
        total.sum_sq += b.sum_sq;
        total.samples += b.samples;
        total.absorbed += b.absorbed;
    }
    const double n = static_cast<double>(total.samples);
    const double mean = total.sum / n;
    const double var = total.samples > 1 ? std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {disc * mean, disc * std::sqrt(var / n),
            static_cast<double>(total.absorbed) / static_cast<double>(cfg.n_paths)};
}

std::vector<double> mc_terminal_prices(const CevParams& p, const SdeConfig& cfg) {
    check(p, cfg);
    if (p.tau == 0.0) {
        return std::vector<double>(cfg.n_paths, p.spot);
    }
    const std::size_t n_pairs = (cfg.n_paths + 1) / 2;
    std::vector<double> out(2 * n_pairs);
    simulate(p, cfg, n_pairs, [&](std::size_t i, std::size_t, const double* s) {
        out[2 * i] = s[0];
        out[2 * i + 1] = s[1];
    });
    out.resize(cfg.n_paths);
    return out;
}

double fd_derivative(const std::function<double(double)>& f, double x0, double h, int order) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("fd_derivative: h must be positive");
    }
    if (order == 1) {
        return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
    }
    if (order == 2) {
        return (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h);
    }
    throw std::invalid_argument("fd_derivative: order must be 1 or 2");
}

double nc_chi2_sf_bruteforce(const NcChi2Query& q, std::size_t n_terms) {
    if (!(q.df > 0.0)) {
        throw std::domain_error("nc_chi2_sf_bruteforce: df must be positive");
    }
    using ld = long double;
    const ld half_lambda = static_cast<ld>(q.noncentrality) / 2;
    const ld x = static_cast<ld>(q.w) / 2;
    const ld a0 = static_cast<ld>(q.df) / 2;
    if (x == 0) return 1.0;

    ld weight = std::exp(-half_lambda);
    ld g = boost::math::gamma_q(a0, x);
    // x^a e^{-x} / Γ(a+1): the increment G(a+1, x) - G(a, x).
    ld step = boost::math::gamma_p_derivative(a0 + 1, x);
    ld sum = 0;
    for (std::size_t j = 0; j < n_terms; ++j) {
        sum += weight * g;
        const ld a = a0 + static_cast<ld>(j);
        g += step;
        step *= x / (a + 1);
        weight *= half_lambda / static_cast<ld>(j + 1);
    }
    return static_cast<double>(std::min<ld>(1, sum));
}

double bs_reference(double spot, double strike, double rate, double vol, double tau) {
    const double disc = std::exp(-rate * tau);
    const double sd = vol * std::sqrt(tau);
    if (sd == 0.0) {
        return std::max(spot - strike * disc, 0.0);
    }
    const double d1 = (std::log(spot / strike) + rate * tau) / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    auto ncdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    return spot * ncdf(d1) - strike * disc * ncdf(d2);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    // exp_sinh copes with integrable endpoint singularities such as the df < 2 chi-squared pdf at 0.
    if (std::isinf(hi) && std::isfinite(lo)) {
        return boost::math::quadrature::exp_sinh<double>().integrate(f, lo, hi, rel_tol);
    }
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, rel_tol);
}

}  // namespace cev
