#ifndef GABOR_POH_HPP
#define GABOR_POH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gabor/stability.hpp"
#include "gabor/verifier.hpp"

namespace gabor {

/// Uniformly sampled real signal.
struct SignalGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> samples;

    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    std::size_t size() const { return samples.size(); }
};

/// CSV format: header `t,value`, one sample per line, uniform spacing.
SignalGrid read_signal_csv(const std::string& path);
void write_signal_csv(const SignalGrid& g, const std::string& path);

/// Linear interpolation view of a grid. Evaluating outside the support is an
/// extrapolation error.
class GridInterpolant {
public:
    explicit GridInterpolant(SignalGrid g);
    double operator()(double t) const;

private:
    SignalGrid grid_;
};

/// A concrete draw of timing jitter: sample n lands at T(n + eps_n) with
/// |eps_n| <= bound.
struct JitterRealization {
    double T = 1.0;
    double bound = 0.0;
    std::uint64_t seed = 0;
    std::map<long, double> epsilons;

    double mu(long n) const {
        auto it = epsilons.find(n);
        return static_cast<double>(n) + (it == epsilons.end() ? 0.0 : it->second);
    }

    /// Uniform draws on [-bound, bound] for n in [n_lo, n_hi], deterministic
    /// per seed. worst_case = fixed +-bound with alternating signs instead.
    static JitterRealization draw(double T, double bound, long n_lo, long n_hi,
                                  std::uint64_t seed, bool worst_case = false);

    double realized_sup() const;
};

struct PositionedSample {
    double position = 0.0; // mu_n * T
    double value = 0.0;    // f(T(n + eps_n))
};

std::vector<PositionedSample> sample_with_jitter(const std::function<double(double)>& f,
                                                 const JitterRealization& jit, long n_lo,
                                                 long n_hi);

/// Hold reconstruction f(t) = sum_n q_n rect^(p)((t - mu_n T)/T) evaluated on
/// the requested grid. order 1 is the classical zero-order-hold staircase.
SignalGrid hold_reconstruct(const std::vector<PositionedSample>& samples, int order,
                            double T, double t0, double dt, std::size_t length);

/// How the jitter budget is accounted: summed across frequency rows, or
/// confined to the single time-sample row of the hold model. The certified
/// total is the same; reports carry the name.
enum class JitterModel { total_l, single_row };
const char* to_string(JitterModel m);
JitterModel jitter_model_from_string(const std::string& s);

enum class BudgetTarget { riesz, frame };
const char* to_string(BudgetTarget t);

/// Supremal certified jitter budget minus a 1e-9 guard, found by bisection on
/// the matching stability predicate. Returns 0 when no positive budget is
/// certifiable (e.g. riesz target off the critical density).
double jitter_budget(int order, double T, const LatticeParams& lat, BudgetTarget target,
                     JitterModel model = JitterModel::single_row);

struct ExperimentConfig {
    std::string signal = "chirp"; // staircase | ramp | gauss | coschirp | chirp
    int order = 1;
    double T = 1.0;
    double eps = 0.0;
    long n_lo = -24;
    long n_hi = 24;
    long rows_max = 8; // frequency rows used by the frame branch
    int grid_per_unit = 64;
    int iters = 150; // enough for the certified worst-case rate at eps near 0.1
    std::uint64_t seed = 1;
    JitterModel model = JitterModel::single_row;
    bool worst_case_jitter = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    double realized_sup = 0.0; // sup_n |eps_n| actually drawn
    double budget = 0.0;
    bool over_budget = false;
    std::optional<Certificate> certificate;

    double interior_lo = 0.0, interior_hi = 0.0;
    double hold_rel_error = 0.0;

    bool frame_branch_ran = false;
    bool frame_bounds_estimated = false; // true when no certificate covered eps
    double frame_rel_error = 0.0;        // on the interior window
    double frame_ratio_tail = 0.0;       // max step ratio over the last third
    bool frame_diverged = false;

    SignalGrid reference;
    SignalGrid hold;
    SignalGrid frame_signal;
};

/// Sample with jitter, reconstruct naively (hold) and through the certified
/// frame iteration, and measure relative L2 errors on an interior window
/// (p T + eps T trimmed from each end). Deterministic per seed.
/// custom_signal overrides the builtin named in the config.
ExperimentReport reconstruction_experiment(const ExperimentConfig& cfg,
                                           const std::function<double(double)>* custom_signal =
                                               nullptr);

} // namespace gabor

#endif
