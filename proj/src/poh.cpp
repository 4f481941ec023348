#include "gabor/poh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gabor/errors.hpp"
#include "gabor/kernels.hpp"
#include "gabor/rng.hpp"

namespace gabor {

// ---------------------------------------------------------------------------
// Signal grids and CSV
// ---------------------------------------------------------------------------

SignalGrid read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open signal file: " + path);
    std::string line;
    std::vector<double> ts, vs;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("t,") == 0 || line.find("t ,") == 0) continue; // header
        }
        double t = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2)
            throw io_error("malformed CSV line in " + path + ": " + line);
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() < 2) throw io_error("signal file needs at least two samples: " + path);
    SignalGrid g;
    g.t0 = ts.front();
    g.dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    if (g.dt <= 0.0) throw io_error("signal times must increase: " + path);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double expect = g.t0 + g.dt * static_cast<double>(i);
        if (std::abs(ts[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw io_error("signal grid must be uniform: " + path);
    }
    g.samples = std::move(vs);
    return g;
}

void write_signal_csv(const SignalGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write signal file: " + path);
    out << "t,value\n";
    char buf[80];
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.time_at(i), g.samples[i]);
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path);
}

GridInterpolant::GridInterpolant(SignalGrid g) : grid_(std::move(g)) {
    if (grid_.size() < 2 || grid_.dt <= 0.0)
        throw usage_error("GridInterpolant: need at least two uniformly spaced samples");
}

double GridInterpolant::operator()(double t) const {
    const double pos = (t - grid_.t0) / grid_.dt;
    if (pos < 0.0 || pos > static_cast<double>(grid_.size() - 1))
        throw domain_error("signal evaluated outside its support (extrapolation)");
    const std::size_t i = std::min(static_cast<std::size_t>(pos), grid_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return grid_.samples[i] * (1.0 - frac) + grid_.samples[i + 1] * frac;
}

// ---------------------------------------------------------------------------
// Jitter realizations and sampling
// ---------------------------------------------------------------------------

JitterRealization JitterRealization::draw(double T, double bound, long n_lo, long n_hi,
                                          std::uint64_t seed, bool worst_case) {
    if (T <= 0.0) throw domain_error("JitterRealization: T must be positive");
    if (bound < 0.0) throw domain_error("JitterRealization: bound must be nonnegative");
    if (n_hi < n_lo) throw usage_error("JitterRealization: empty index range");
    JitterRealization j;
    j.T = T;
    j.bound = bound;
    j.seed = seed;
    Rng rng(seed);
    for (long n = n_lo; n <= n_hi; ++n) {
        double e;
        if (worst_case)
            e = ((n & 1) ? -bound : bound);
        else
            e = rng.uniform(-bound, bound);
        if (e != 0.0) j.epsilons[n] = e;
    }
    return j;
}

double JitterRealization::realized_sup() const {
    double sup = 0.0;
    for (const auto& [n, e] : epsilons) sup = std::max(sup, std::abs(e));
    return sup;
}

std::vector<PositionedSample> sample_with_jitter(const std::function<double(double)>& f,
                                                 const JitterRealization& jit, long n_lo,
                                                 long n_hi) {
    if (n_hi < n_lo) throw usage_error("sample_with_jitter: empty index range");
    std::vector<PositionedSample> out;
    out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n) {
        const double mu = jit.mu(n);
        out.push_back({mu * jit.T, f(jit.T * mu)});
    }
    return out;
}

SignalGrid hold_reconstruct(const std::vector<PositionedSample>& samples, int order,
                            double T, double t0, double dt, std::size_t length) {
    if (order < 1) throw domain_error("hold_reconstruct: order must be >= 1");
    if (T <= 0.0 || dt <= 0.0 || length == 0)
        throw domain_error("hold_reconstruct: bad grid");
    const BSplineWindow w(order);
    SignalGrid out;
    out.t0 = t0;
    out.dt = dt;
    out.samples.assign(length, 0.0);
    for (const auto& s : samples) {
        for (int i = 0; i < w.piece_count(); ++i) {
            const double left_t = s.position + T * w.piece_left(i);
            const double right_t = left_t + T;
            long i_lo = static_cast<long>(std::ceil((left_t - t0) / dt - 1e-9));
            long i_hi = static_cast<long>(
                std::floor((right_t - t0) / dt - (i == w.piece_count() - 1 ? -1e-9 : 1e-9)));
            i_lo = std::max(i_lo, 0L);
            i_hi = std::min(i_hi, static_cast<long>(length) - 1);
            if (i_hi < i_lo) continue;
            const double u0 = ((t0 + dt * static_cast<double>(i_lo)) - s.position) / T -
                              w.piece_left(i);
            kernels::poly_accum_range(w.piece(i).data(), w.piece(i).size(), u0, dt / T,
                                      s.value, out.samples.data() + i_lo,
                                      static_cast<std::size_t>(i_hi - i_lo + 1));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

const char* to_string(JitterModel m) {
    return m == JitterModel::total_l ? "total-L" : "single-row";
}

JitterModel jitter_model_from_string(const std::string& s) {
    if (s == "total-L" || s == "total-l" || s == "total_l") return JitterModel::total_l;
    if (s == "single-row" || s == "single_row") return JitterModel::single_row;
    throw usage_error("unknown jitter model: " + s + " (expected total-L or single-row)");
}

const char* to_string(BudgetTarget t) { return t == BudgetTarget::riesz ? "riesz" : "frame"; }

double jitter_budget(int order, double T, const LatticeParams& lat, BudgetTarget target,
                     JitterModel model) {
    if (T <= 0.0) throw domain_error("jitter_budget: T must be positive");
    (void)model; // both accountings certify the same summed budget
    translate_overlap_bounds(order, lat); // validate the lattice up front

    auto certified = [&](double L) {
        Certificate cert = (order == 1)
                               ? certify_rect(lat, JitterProfile::from_total(L))
                               : certify_bspline(order, lat, JitterProfile::from_total(L));
        return target == BudgetTarget::riesz ? cert.riesz : cert.satisfied;
    };
    if (!certified(0.0)) return 0.0;

    double lo = 0.0;
    double hi = 1.0 / (4.0 * lat.a * lat.b) + 1.0; // condition fails here for sure
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (certified(mid))
            lo = mid;
        else
            hi = mid;
    }
    return std::max(0.0, lo - 1e-9);
}

// ---------------------------------------------------------------------------
// Builtin signals
// ---------------------------------------------------------------------------

namespace {

std::function<double(double)> staircase_signal(double T, long n_lo, long n_hi, Rng rng) {
    auto levels = std::make_shared<std::map<long, double>>();
    for (long k = n_lo - 2; k <= n_hi + 2; ++k) (*levels)[k] = rng.uniform(-1.0, 1.0);
    return [levels, T](double t) {
        const long k = static_cast<long>(std::floor(t / T + 0.5));
        auto it = levels->find(k);
        return it == levels->end() ? 0.0 : it->second;
    };
}

std::function<double(double)> gauss_signal(double T, long n_lo, long n_hi) {
    const double c = 0.5 * T * static_cast<double>(n_lo + n_hi);
    const double sigma = T * static_cast<double>(n_hi - n_lo) / 8.0;
    return [c, sigma](double t) {
        const double z = (t - c) / sigma;
        return std::exp(-0.5 * z * z);
    };
}

std::function<double(double)> coschirp_signal(double T, long n_lo, long n_hi) {
    const double span = static_cast<double>(n_hi - n_lo);
    const double tau_lo = static_cast<double>(n_lo);
    return [T, tau_lo, span](double t) {
        const double tau = t / T;
        const double u = tau - tau_lo;
        // instantaneous frequency sweeps 0.1 -> 0.8 cycles per slot
        return std::cos(2.0 * M_PI * (0.1 * u + 0.35 * u * u / span));
    };
}

// In-span chirp: coefficients over the active family whose occupied frequency
// row sweeps upward along the window. Conjugate-symmetric, so the synthesized
// signal is real; the envelope vanishes at the ends, keeping it interior.
std::vector<cplx> chirp_coefficients(long rows_max, long n_lo, long n_hi, Rng rng) {
    const long cols = n_hi - n_lo + 1;
    const long rows = 2 * rows_max + 1;
    const long top = std::min(rows_max, 5L);
    std::vector<cplx> coef(static_cast<std::size_t>(rows * cols), cplx(0.0, 0.0));
    auto at = [&](long n, long k) -> cplx& {
        return coef[static_cast<std::size_t>((n + rows_max) * cols + (k - n_lo))];
    };
    for (long k = n_lo; k <= n_hi; ++k) {
        const double s =
            static_cast<double>(k - n_lo) / static_cast<double>(std::max(1L, cols - 1));
        const double env = std::pow(std::sin(M_PI * s), 2);
        const double amp = rng.uniform(0.7, 1.0);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const long n_t = static_cast<long>(std::lround(s * static_cast<double>(top)));
        if (env <= 1e-12) continue;
        if (n_t == 0) {
            at(0, k) = env * amp;
        } else {
            at(n_t, k) = 0.5 * env * amp * std::exp(cplx(0.0, phase));
            at(-n_t, k) = std::conj(at(n_t, k));
        }
    }
    return coef;
}

double windowed_rel_error(const SignalGrid& got, const SignalGrid& want, double lo,
                          double hi) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        const double t = want.time_at(i);
        if (t < lo || t > hi) continue;
        const double d = got.samples[i] - want.samples[i];
        num += d * d;
        den += want.samples[i] * want.samples[i];
    }
    if (den <= 0.0) return 0.0;
    return std::sqrt(num / den);
}

} // namespace

// ---------------------------------------------------------------------------
// Experiment
// ---------------------------------------------------------------------------

ExperimentReport reconstruction_experiment(const ExperimentConfig& cfg,
                                           const std::function<double(double)>* custom_signal) {
    if (cfg.order < 1) throw domain_error("experiment: order must be >= 1");
    if (cfg.T <= 0.0) throw domain_error("experiment: T must be positive");
    if (cfg.eps < 0.0) throw domain_error("experiment: eps must be nonnegative");
    if (cfg.n_hi - cfg.n_lo < 8) throw usage_error("experiment: sample range too small");
    if (cfg.grid_per_unit < 8) throw usage_error("experiment: grid_per_unit too small");
    if (cfg.iters < 1) throw usage_error("experiment: need at least one iteration");

    ExperimentReport rep;
    rep.config = cfg;
    Rng root(cfg.seed);

    const JitterRealization jit = JitterRealization::draw(
        cfg.T, cfg.eps, cfg.n_lo, cfg.n_hi, root.fork(1).next_u64(), cfg.worst_case_jitter);
    rep.realized_sup = jit.realized_sup();

    // frame family in rescaled time tau = t/T: lattice a = b = 1, sample row
    // jittered by the realized epsilons, other rows uniform
    auto window = std::make_shared<const BSplineWindow>(cfg.order);
    std::vector<AtomSpec> atoms;
    const long rows = 2 * cfg.rows_max + 1, cols = cfg.n_hi - cfg.n_lo + 1;
    atoms.reserve(static_cast<std::size_t>(rows * cols));
    for (long n = -cfg.rows_max; n <= cfg.rows_max; ++n)
        for (long k = cfg.n_lo; k <= cfg.n_hi; ++k) {
            const double shift = (n == 0) ? jit.mu(k) : static_cast<double>(k);
            atoms.push_back(AtomSpec{static_cast<double>(n), shift, window});
        }

    // signal selection
    std::function<double(double)> f;
    if (custom_signal) {
        f = *custom_signal;
    } else if (cfg.signal == "staircase") {
        f = staircase_signal(cfg.T, cfg.n_lo, cfg.n_hi, root.fork(2));
    } else if (cfg.signal == "ramp") {
        f = [](double t) { return t; };
    } else if (cfg.signal == "gauss") {
        f = gauss_signal(cfg.T, cfg.n_lo, cfg.n_hi);
    } else if (cfg.signal == "coschirp") {
        f = coschirp_signal(cfg.T, cfg.n_lo, cfg.n_hi);
    } else if (cfg.signal == "chirp") {
        auto coef = std::make_shared<std::vector<cplx>>(
            chirp_coefficients(cfg.rows_max, cfg.n_lo, cfg.n_hi, root.fork(3)));
        auto atoms_ptr = std::make_shared<std::vector<AtomSpec>>(atoms);
        const double T = cfg.T;
        f = [coef, atoms_ptr, T](double t) {
            const double tau = t / T;
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < atoms_ptr->size(); ++j) {
                const auto& a = (*atoms_ptr)[j];
                const double wv = a.window->eval(tau - a.shift);
                if (wv == 0.0) continue;
                acc += (*coef)[j] * std::polar(wv, 2.0 * M_PI * a.freq * tau);
            }
            return acc.real();
        };
    } else {
        throw usage_error("unknown builtin signal: " + cfg.signal);
    }

    // sampling + hold branch; the grid is padded past the sample hull so
    // every frame atom is sampled on its whole support (truncated edge atoms
    // would inject spurious near-null directions into the discrete span)
    const auto samples = sample_with_jitter(f, jit, cfg.n_lo, cfg.n_hi);
    const double dt = cfg.T / cfg.grid_per_unit;
    const long pad = static_cast<long>(std::ceil(0.5 * cfg.order + cfg.eps + 0.5));
    const double t0 = cfg.T * static_cast<double>(cfg.n_lo - pad) + 0.5 * dt;
    const auto length = static_cast<std::size_t>(
        (cfg.n_hi - cfg.n_lo + 2 * pad) * cfg.grid_per_unit);
    rep.hold = hold_reconstruct(samples, cfg.order, cfg.T, t0, dt, length);

    rep.reference.t0 = t0;
    rep.reference.dt = dt;
    rep.reference.samples.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
        // grid fill zero-extends past a table-backed signal's support; the
        // padded region lies outside the interior error window anyway
        try {
            rep.reference.samples[i] = f(rep.reference.time_at(i));
        } catch (const domain_error&) {
            rep.reference.samples[i] = 0.0;
        }
    }

    const double trim = (static_cast<double>(cfg.order) + cfg.eps) * cfg.T;
    rep.interior_lo = cfg.T * static_cast<double>(cfg.n_lo) + trim;
    rep.interior_hi = cfg.T * static_cast<double>(cfg.n_hi) - trim;
    rep.hold_rel_error =
        windowed_rel_error(rep.hold, rep.reference, rep.interior_lo, rep.interior_hi);

    // certificate + budget
    const LatticeParams unit{1.0, 1.0};
    rep.budget = jitter_budget(cfg.order, cfg.T, unit, BudgetTarget::frame, cfg.model);
    rep.over_budget = cfg.eps > rep.budget;
    if (!rep.over_budget) {
        rep.certificate = (cfg.order == 1)
                              ? certify_rect(unit, JitterProfile::from_total(cfg.eps))
                              : certify_bspline(cfg.order, unit, JitterProfile::from_total(cfg.eps));
    }

    // frame branch on the tau grid
    FrameBounds bounds;
    bool have_bounds = false;
    if (rep.certificate && rep.certificate->absolute) {
        bounds = *rep.certificate->absolute;
        have_bounds = true;
    } else {
        // no certificate covers this eps: estimate bounds from a central
        // subfamily spectrum and mark them as estimates
        std::vector<AtomSpec> central;
        for (long n = -cfg.rows_max; n <= cfg.rows_max; ++n)
            for (long k = std::max(cfg.n_lo, -8L); k <= std::min(cfg.n_hi, 8L); ++k) {
                const double shift = (n == 0) ? jit.mu(k) : static_cast<double>(k);
                central.push_back(AtomSpec{static_cast<double>(n), shift, window});
            }
        if (central.size() >= 2 && central.size() <= 512) {
            const auto [lo, hi] = gram_spectrum_extrema(build_gram(central));
            if (lo > 1e-6) {
                bounds = FrameBounds{lo, hi, BoundsKind::numerical_estimate};
                have_bounds = true;
                rep.frame_bounds_estimated = true;
            }
        }
    }

    if (have_bounds) {
        const DiscretizedFamily disc =
            discretize_family(atoms, t0 / cfg.T, dt / cfg.T, length);
        std::vector<cplx> fc(length);
        for (std::size_t i = 0; i < length; ++i) fc[i] = rep.reference.samples[i];
        const auto coeffs = analysis_coefficients(disc, fc);
        try {
            const auto res = frame_reconstruct(disc, coeffs, bounds, fc, cfg.iters);
            rep.frame_branch_ran = true;
            rep.frame_signal.t0 = t0;
            rep.frame_signal.dt = dt;
            rep.frame_signal.samples.resize(length);
            for (std::size_t i = 0; i < length; ++i)
                rep.frame_signal.samples[i] = res.signal[i].real();
            rep.frame_rel_error = windowed_rel_error(rep.frame_signal, rep.reference,
                                                     rep.interior_lo, rep.interior_hi);
            double tail = 0.0;
            const std::size_t nr = res.ratios.size();
            for (std::size_t i = (2 * nr) / 3; i < nr; ++i) {
                if (i + 1 < res.rel_errors.size() && res.rel_errors[i + 1] < 1e-13) break;
                tail = std::max(tail, res.ratios[i]);
            }
            rep.frame_ratio_tail = tail;
        } catch (const numeric_error&) {
            rep.frame_diverged = true;
        }
    }
    return rep;
}

} // namespace gabor
