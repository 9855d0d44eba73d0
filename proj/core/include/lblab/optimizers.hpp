#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lblab/instances.hpp"
#include "lblab/oracles.hpp"

namespace lblab {

// ------------------------------------------------------------ iteration shape

// One oracle answer contributing to a new iterate, read at the previous
// value of tracked point `source`.
struct Term {
    std::size_t source = 0;
    OracleQuery query;
    double weight = 1.0;
};

// New value of tracked point `target` as a sum of answers. Points without an
// update keep their value.
struct Update {
    std::size_t target = 0;
    std::vector<Term> terms;
};

using Step = std::vector<Update>;

// Counter-based stream: draw i of stream (seed, name) is a pure function of
// (seed, name, i), so runs are reproducible regardless of scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, const std::string& stream);

    std::uint64_t next();
    double uniform();                       // [0,1)
    std::size_t below(std::size_t bound);   // uniform in [0, bound)
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Oblivious generator: sees only the iteration index and its RNG stream.
using StepFn = std::function<Step(std::size_t k, CounterRng& rng)>;

// Access handed to non-oblivious policies. Every call is logged.
struct AdaptiveContext {
    const std::vector<std::vector<double>>& points;
    std::function<std::vector<double>(const std::vector<double>& at, const OracleQuery& q)> ask;
    std::size_t components = 1;
};
using AdaptiveFn = std::function<Step(std::size_t k, CounterRng& rng, AdaptiveContext& ctx)>;

enum class Sampling { with_replacement, without_replacement };

struct Schedule {
    std::string name;
    std::size_t tracked = 1;
    bool oblivious = true;
    OracleFamily family = OracleFamily::primal;
    // Fresh per-run generator; per-run state (e.g. a permutation) lives inside it.
    std::function<StepFn()> make_generator;
    std::function<AdaptiveFn()> make_adaptive;  // set only when !oblivious
};

struct OptimizerParams {
    std::optional<double> L, mu;
    std::optional<std::size_t> n;  // components (primal) or coordinates (dual)
    std::optional<std::size_t> d;  // dimension, for primal coordinate descent
    std::optional<double> lambda;
    std::optional<double> step;    // overrides the default step where one exists
    std::optional<std::size_t> epoch;
    std::size_t memory = 100;
    Sampling sampling = Sampling::with_replacement;
    OracleFamily family = OracleFamily::primal;
};

const std::vector<std::string>& optimizer_names();
Schedule make_optimizer(const std::string& name, const OptimizerParams& params);

// Parameters every optimizer needs, read off an instance.
OptimizerParams params_for(const QuadraticInstance& inst);

// ------------------------------------------------------------ execution

template <class T>
class CliExecutor {
public:
    CliExecutor(const QuadraticModel<T>& model, std::size_t tracked)
        : model_(model), points_(tracked, std::vector<T>(model.dim(), model.zero)), log_(model.n()) {}

    void apply(const Step& step) {
        std::vector<std::pair<std::size_t, std::vector<T>>> fresh;
        fresh.reserve(step.size());
        for (const auto& up : step) {
            if (up.target >= points_.size()) throw std::out_of_range("step targets an untracked point");
            if (up.terms.size() == 1 && up.terms[0].weight == 1.0) {
                const auto& term = up.terms[0];
                if (term.source >= points_.size()) throw std::out_of_range("step reads an untracked point");
                fresh.emplace_back(up.target, answer(model_, points_[term.source], term.query));
                log_.record(term.query);
                continue;
            }
            std::vector<T> acc(model_.dim(), model_.zero);
            for (const auto& term : up.terms) {
                if (term.source >= points_.size()) throw std::out_of_range("step reads an untracked point");
                const auto ans = answer(model_, points_[term.source], term.query);
                log_.record(term.query);
                if (term.weight == 1.0) {
                    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ans[i];
                } else {
                    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scaled(ans[i], term.weight);
                }
            }
            fresh.emplace_back(up.target, std::move(acc));
        }
        for (auto& [target, value] : fresh) points_[target] = std::move(value);
    }

    const std::vector<T>& point(std::size_t i) const { return points_.at(i); }
    const std::vector<std::vector<T>>& points() const { return points_; }
    CallLog& log() { return log_; }
    const QuadraticModel<T>& model() const { return model_; }

private:
    const QuadraticModel<T>& model_;
    std::vector<std::vector<T>> points_;
    CallLog log_;
};

struct RunRecord {
    std::vector<double> suboptimality;  // F(w₁) - F*, entry 0 at initialization
    std::vector<double> distance;       // ‖w₁ - w*‖
    std::uint64_t seed = 0;
    CallLog log;
    std::chrono::nanoseconds wall{0};
};

enum class ErrorMeasure { suboptimality, distance };

RunRecord run(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations, std::uint64_t seed);
// Records only the requested measure; the other vector stays empty.
RunRecord run(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations, std::uint64_t seed,
              ErrorMeasure only);
RunRecord run(const Schedule& schedule, const RlmInstance& instance, std::size_t iterations, std::uint64_t seed);

// Replays the schedule against an oracle that answers zero everywhere and
// compares the query stream with a real run. Equal streams mean the
// parameters did not depend on answers.
bool audit_obliviousness(const Schedule& schedule, const QuadraticInstance& instance, std::size_t iterations,
                         std::uint64_t seed);

// Query stream as printable text, one line per query.
std::vector<std::string> query_stream(const Schedule& schedule, const QuadraticInstance& instance,
                                      std::size_t iterations, std::uint64_t seed);

struct CurvePoint {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t worst_index = 0;  // grid point attaining the max
};

struct ErrorCurve {
    std::vector<CurvePoint> points;             // per iteration, max over the grid
    std::vector<std::vector<double>> per_grid;  // per grid point, per iteration mean
    std::vector<std::vector<double>> per_grid_stderr;
};

// Monte-Carlo mean error per iteration for every grid instance, and the max
// over the grid. Seeds are 0..seeds-1. Work fans out over grid points; each
// grid point accumulates its seeds in order so results do not depend on the
// thread count.
ErrorCurve expected_error_curve(const Schedule& schedule, const FamilySpec& family, const std::vector<GridPoint>& grid,
                                std::size_t iterations, std::size_t seeds,
                                ErrorMeasure measure = ErrorMeasure::suboptimality);

// Worker count: LBLAB_THREADS if set, else hardware concurrency.
std::size_t worker_count();

}  // namespace lblab
