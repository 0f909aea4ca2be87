#include "compclass/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "compclass/classifier.hpp"
#include "compclass/error_analysis.hpp"

namespace compclass {

double noise_db_to_variance(double db) { return std::pow(10.0, db / 10.0); }

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::noise_db ? "noise_db" : "measurements"; }

namespace {

int resolve_threads(int threads, long trials) {
    long n = threads > 0 ? threads : static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::clamp(n, 1L, std::max(1L, trials)));
}

double decay_exponent(const SourceModel& model, const Matrix& kernel, RankTolerance tol) {
    if (model.classes() < 2) return std::numeric_limits<double>::infinity();
    return exponent_report(model, kernel, tol).exponent;
}

SweepPoint make_point(double axis, const PeEstimate& est, double bound, double exponent) {
    SweepPoint p;
    p.axis = axis;
    p.pe = est.pe;
    p.se = est.errors == 0 ? 3.0 / static_cast<double>(est.trials) : est.se;
    p.bound = bound;
    p.exponent = exponent;
    return p;
}

} // namespace

PeEstimate estimate_pe(const SourceModel& model, const Matrix& kernel, double sigma2, long trials,
                       std::uint64_t seed, int threads, RankTolerance tol) {
    if (trials < 1) throw ValidationError("need at least one trial");
    const MapClassifier classifier(model, kernel, sigma2, tol);
    std::vector<Matrix> mixing; // Phi times the class square root
    for (int i = 0; i < model.classes(); ++i) mixing.push_back(kernel * model.square_root(i));
    const double sigma = std::sqrt(sigma2);
    const auto m = kernel.rows();

    auto run = [&](long begin, long end) {
        long errors = 0;
        std::discrete_distribution<int> pick(model.priors().begin(), model.priors().end());
        Vector z, y(m);
        for (long t = begin; t < end; ++t) {
            Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
            std::normal_distribution<double> normal;
            pick.reset();
            const int label = pick(rng);
            const Matrix& mix = mixing[static_cast<std::size_t>(label)];
            z.resize(mix.cols());
            for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
            for (Eigen::Index k = 0; k < m; ++k) y(k) = sigma * normal(rng);
            y.noalias() += mix * z;
            if (classifier.classify(y) != label) ++errors;
        }
        return errors;
    };

    const int workers = resolve_threads(threads, trials);
    std::vector<long> counts(static_cast<std::size_t>(workers), 0);
    if (workers == 1) {
        counts[0] = run(0, trials);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            const long begin = trials * w / workers;
            const long end = trials * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { counts[static_cast<std::size_t>(w)] = run(begin, end); });
        }
    }

    PeEstimate out;
    out.trials = trials;
    for (long c : counts) out.errors += c;
    out.pe = static_cast<double>(out.errors) / static_cast<double>(trials);
    out.se = std::sqrt(out.pe * (1.0 - out.pe) / static_cast<double>(trials));
    return out;
}

SweepResult sweep_noise(const SourceModel& model, const Matrix& kernel, std::span<const double> noise_db, long trials,
                        std::uint64_t seed, int threads, RankTolerance tol) {
    if (noise_db.empty()) throw ValidationError("noise grid is empty");
    std::vector<double> levels(noise_db.begin(), noise_db.end());
    for (double db : levels)
        if (!std::isfinite(db)) throw ValidationError("noise levels must be finite");
    std::sort(levels.begin(), levels.end());

    SweepResult out;
    out.axis = SweepAxis::noise_db;
    out.trials = trials;
    out.seed = seed;
    const double d = decay_exponent(model, kernel, tol);
    for (double db : levels) {
        const double sigma2 = noise_db_to_variance(db);
        const auto est = estimate_pe(model, kernel, sigma2, trials, seed, threads, tol);
        out.points.push_back(make_point(db, est, union_bhattacharyya_bound(model, kernel, sigma2, tol).value, d));
    }
    return out;
}

SweepResult sweep_measurements(const SourceModel& model, DesignTag design, std::span<const int> measurement_counts,
                               double sigma2, long trials, std::uint64_t seed, int threads, RankTolerance tol) {
    if (measurement_counts.empty()) throw ValidationError("measurement grid is empty");
    std::vector<int> counts(measurement_counts.begin(), measurement_counts.end());
    for (int m : counts)
        if (m < 1) throw ValidationError("measurement counts must be >= 1");
    std::sort(counts.begin(), counts.end());

    SweepResult out;
    out.axis = SweepAxis::measurements;
    out.trials = trials;
    out.seed = seed;
    for (int m : counts) {
        const auto kernel = make_kernel(model, design, m, mix_seed(seed, static_cast<std::uint64_t>(m)), tol);
        const auto est = estimate_pe(model, kernel.matrix, sigma2, trials, seed, threads, tol);
        out.points.push_back(make_point(m, est, union_bhattacharyya_bound(model, kernel.matrix, sigma2, tol).value,
                                        decay_exponent(model, kernel.matrix, tol)));
    }
    return out;
}

double empirical_slope(std::span<const double> sigma2, std::span<const double> values) {
    if (sigma2.size() != values.size()) throw ValidationError("slope needs matching abscissa and values");
    if (sigma2.size() < 2) throw ValidationError("slope needs at least two points");
    const auto n = static_cast<double>(sigma2.size());
    double sx = 0, sy = 0;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < sigma2.size(); ++k) {
        if (!(values[k] > 0.0) || !(sigma2[k] > 0.0))
            throw ValidationError("slope needs positive noise levels and values");
        xs.push_back(-std::log(sigma2[k]));
        ys.push_back(-std::log(values[k]));
        sx += xs.back();
        sy += ys.back();
    }
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - sx / n) * (xs[k] - sx / n);
        sxy += (xs[k] - sx / n) * (ys[k] - sy / n);
    }
    if (!(sxx > 0.0)) throw ValidationError("slope needs at least two distinct noise levels");
    return sxy / sxx + 0.0;
}

TransitionReport find_transition(const SourceModel& model, DesignTag design, int max_measurements,
                                 TransitionCriterion criterion, double sigma2, long trials, std::uint64_t seed,
                                 int threads, RankTolerance tol) {
    if (max_measurements < 1) throw ValidationError("M_max must be >= 1");
    if (model.classes() < 2) throw ValidationError("transition search needs at least two classes");
    const int top = design == DesignTag::prop5 ? std::min(max_measurements, model.classes()) : max_measurements;
    TransitionReport out;
    out.criterion = criterion;
    out.measurements = max_measurements;
    for (int m = 1; m <= top; ++m) {
        const auto kernel = make_kernel(model, design, m, mix_seed(seed, static_cast<std::uint64_t>(m)), tol);
        bool met = false;
        if (criterion.kind == TransitionCriterion::Kind::exponent_positive)
            met = exponent_report(model, kernel.matrix, tol).exponent > 0.0;
        else
            met = estimate_pe(model, kernel.matrix, sigma2, trials, seed, threads, tol).pe < criterion.threshold;
        if (met) {
            out.found = true;
            out.measurements = m;
            return out;
        }
    }
    return out;
}

} // namespace compclass
