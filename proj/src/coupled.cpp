#include "hawkes/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

ShiftPath finalize_shift(const Kernel& kernel, const MarkDistribution& marks, double t,
                         double T, std::vector<double> times, std::vector<double> marks_out,
                         std::vector<double> intensity_pre) {
    ShiftPath shift;
    shift.shift_time = t;
    shift.horizon = T;
    shift.hat_event_times = std::move(times);
    shift.hat_marks = std::move(marks_out);
    shift.hat_intensity_pre = std::move(intensity_pre);
    // \int_t^T hat-lambda = \int Phi(u-t) du + sum_j \int Phi(u-T_j) du,
    // with exact antiderivatives.
    double comp = kernel.phi_integral(T - t);
    for (double tj : shift.hat_event_times) comp += kernel.phi_integral(T - tj);
    shift.hat_compensator = comp;
    double hat_x = 0.0;
    for (double y : shift.hat_marks) hat_x += y;
    shift.terminal_martingale = hat_x - marks.mean() * comp;
    return shift;
}

// Lazily realized Poisson atoms above the base band, organized in
// horizontal layers of height lambda0: layer l holds a rate-lambda0
// homogeneous Poisson process on (0, T] whose atoms carry heights uniform
// in (l*lambda0, (l+1)*lambda0] and marks drawn from nu. All shifts of one
// base path read the same layers, so two shifts accept the same atom
// whenever it falls under both of their intensities.
class LayerStore {
  public:
    struct Layer {
        std::vector<double> times;
        std::vector<double> heights;
        std::vector<double> marks;
    };

    LayerStore(double T, double lambda0, const MarkDistribution& marks, RandomState rs)
        : T_(T), lambda0_(lambda0), marks_(marks), rs_(rs) {}

    double lambda0() const { return lambda0_; }

    const Layer& layer(std::size_t l) {
        while (layers_.size() <= l) {
            const std::size_t idx = layers_.size();
            if (idx >= 60000)
                throw std::logic_error("joint shifts: candidate layer count exploded");
            Rng rng(rs_.seed, rs_.stream + 1 + idx);
            Layer next;
            double s = 0.0;
            while (true) {
                s += rng.exponential(lambda0_);
                if (s > T_) break;
                next.times.push_back(s);
                next.heights.push_back(lambda0_ * (static_cast<double>(idx) + rng.uniform()));
                next.marks.push_back(marks_.sample(rng));
            }
            layers_.push_back(std::move(next));
        }
        return layers_[l];
    }

  private:
    double T_;
    double lambda0_;
    const MarkDistribution& marks_;
    RandomState rs_;
    std::vector<Layer> layers_;
};

// Cursor over the layers for one shift replay: yields atoms in time order
// from all layers below the current consult ceiling.
class LayerCursor {
  public:
    explicit LayerCursor(LayerStore& store) : store_(store) {}

    struct Atom {
        double time;
        double height;
        double mark;
        bool valid = false;
    };

    // Earliest atom with time in (after, until] among layers < count.
    Atom peek(std::size_t count, double after, double until) {
        Atom best;
        for (std::size_t l = 0; l < count; ++l) {
            const auto& layer = store_.layer(l);
            if (ptr_.size() <= l) ptr_.resize(l + 1, 0);
            std::size_t& p = ptr_[l];
            // Skip atoms already passed (including ones skipped while this
            // layer was above the consult ceiling; those were unreachable
            // by construction).
            while (p < layer.times.size() && layer.times[p] <= after) ++p;
            if (p < layer.times.size() && layer.times[p] <= until &&
                (!best.valid || layer.times[p] < best.time)) {
                best = {layer.times[p], layer.heights[p], layer.marks[p], true};
                best_layer_ = l;
            }
        }
        return best;
    }

    void consume() { ++ptr_[best_layer_]; }

  private:
    LayerStore& store_;
    std::vector<std::size_t> ptr_;
    std::size_t best_layer_ = 0;
};

std::size_t layer_count(double cap, double lambda0) {
    if (!(cap > 0.0)) return 0;
    return static_cast<std::size_t>(std::ceil(cap / lambda0));
}

ShiftPath replay_exponential(const Kernel& kernel, const MarkDistribution& marks,
                             LayerStore& store, double t, double T) {
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    const double lambda0 = store.lambda0();
    LayerCursor cursor(store);
    std::vector<double> times, ms, pre;
    // hat-lambda = g with exponential decay; starts at Phi(0) = alpha.
    double g = alpha;
    double u = t;
    while (u < T && g >= 1e-300) {
        auto atom = cursor.peek(layer_count(g, lambda0), u, T);
        if (!atom.valid) break;
        g *= std::exp(-beta * (atom.time - u));
        u = atom.time;
        cursor.consume();
        if (atom.height <= g) {
            times.push_back(u);
            pre.push_back(g);
            ms.push_back(atom.mark);
            g += alpha;
        }
    }
    return finalize_shift(kernel, marks, t, T, std::move(times), std::move(ms),
                          std::move(pre));
}

ShiftPath replay_erlang(const Kernel& kernel, const MarkDistribution& marks,
                        LayerStore& store, double t, double T) {
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    const double lambda0 = store.lambda0();
    const double window = kernel.majorant_window();
    LayerCursor cursor(store);
    std::vector<double> times, ms, pre;
    // Markov pair: hat-lambda = z, dz = (xi - beta z) du; starts (0, alpha).
    double z = 0.0, xi = alpha;
    auto advance = [&](double dt) {
        const double decay = std::exp(-beta * dt);
        z = decay * (z + xi * dt);
        xi *= decay;
    };
    auto z_sup = [&](double dt) {
        double best = std::max(z, std::exp(-beta * dt) * (z + xi * dt));
        if (xi > 0.0) {
            const double w_star = (xi - beta * z) / (beta * xi);
            if (w_star > 0.0 && w_star < dt)
                best = std::max(best, std::exp(-beta * w_star) * (z + xi * w_star));
        }
        return best;
    };
    double u = t;
    double w_end = std::min(u + window, T);
    while (u < T) {
        const double cap = z_sup(w_end - u);
        if (cap < 1e-300) {
            advance(w_end - u);
            u = w_end;
            w_end = std::min(u + window, T);
            continue;
        }
        auto atom = cursor.peek(layer_count(cap, lambda0), u, w_end);
        if (!atom.valid) {
            advance(w_end - u);
            u = w_end;
            w_end = std::min(u + window, T);
            continue;
        }
        advance(atom.time - u);
        u = atom.time;
        cursor.consume();
        if (z > cap * (1.0 + 1e-9))
            throw std::logic_error("joint shifts: majorant violated (Erlang)");
        if (atom.height <= z) {
            times.push_back(u);
            pre.push_back(z);
            ms.push_back(atom.mark);
            xi += alpha;
        }
    }
    return finalize_shift(kernel, marks, t, T, std::move(times), std::move(ms),
                          std::move(pre));
}

ShiftPath replay_tabulated(const Kernel& kernel, const MarkDistribution& marks,
                           LayerStore& store, double t, double T) {
    const double lambda0 = store.lambda0();
    const double window = kernel.majorant_window();
    const double support = kernel.support_end();
    LayerCursor cursor(store);
    std::vector<double> times, ms, pre;
    std::vector<double> sources{t};
    std::size_t first_active = 0;
    auto lambda_at = [&](double s) {
        double v = 0.0;
        for (std::size_t j = first_active; j < sources.size(); ++j)
            v += kernel.phi(s - sources[j]);
        return v;
    };
    double u = t;
    double w_end = std::min(u + window, T);
    while (u < T) {
        while (first_active < sources.size() && u - sources[first_active] > support)
            ++first_active;
        if (first_active == sources.size()) break;
        double cap = 0.0;
        for (std::size_t j = first_active; j < sources.size(); ++j)
            cap += kernel.phi_sup(u - sources[j], w_end - sources[j]);
        auto atom = cap > 0.0 ? cursor.peek(layer_count(cap, lambda0), u, w_end)
                              : LayerCursor::Atom{};
        if (!atom.valid) {
            u = w_end;
            w_end = std::min(u + window, T);
            continue;
        }
        u = atom.time;
        cursor.consume();
        const double lambda = lambda_at(u);
        if (lambda > cap * (1.0 + 1e-9))
            throw std::logic_error("joint shifts: majorant violated (tabulated)");
        if (atom.height <= lambda) {
            times.push_back(u);
            pre.push_back(lambda);
            ms.push_back(atom.mark);
            sources.push_back(u);
        }
    }
    return finalize_shift(kernel, marks, t, T, std::move(times), std::move(ms),
                          std::move(pre));
}

double kernel_sup(const Kernel& kernel) {
    switch (kernel.type()) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return kernel.alpha();
        case KernelType::Erlang:
            return kernel.phi(1.0 / kernel.beta());
        case KernelType::Tabulated:
            return kernel.phi_sup(0.0, kernel.support_end());
    }
    return 0.0;
}

}  // namespace

ShiftPath simulate_shift(const HawkesPath& base, const Kernel& kernel, double mu,
                         const MarkDistribution& marks, double t, RandomState rs) {
    (void)mu;
    if (t < 0.0 || t > base.horizon)
        throw std::domain_error("simulate_shift: shift time outside [0,T]");
    Rng rng(rs);
    // Cascade with no baseline, seeded by the excitation Phi(. - t).
    auto cascade =
        detail::simulate_cascade(kernel, 0.0, true, t, base.horizon, marks, rng);
    return finalize_shift(kernel, marks, t, base.horizon, std::move(cascade.times),
                          std::move(cascade.marks), std::move(cascade.intensity_pre));
}

std::vector<ShiftPath> simulate_joint_shifts(const HawkesPath& base, const Kernel& kernel,
                                             double mu, const MarkDistribution& marks,
                                             std::span<const double> shift_times,
                                             RandomState rs) {
    (void)mu;
    for (std::size_t i = 0; i < shift_times.size(); ++i) {
        if (shift_times[i] < 0.0 || shift_times[i] > base.horizon)
            throw std::domain_error("simulate_joint_shifts: shift time outside [0,T]");
        if (i > 0 && shift_times[i] < shift_times[i - 1])
            throw std::invalid_argument("simulate_joint_shifts: shift times must be sorted");
    }
    const double T = base.horizon;
    std::vector<ShiftPath> shifts;
    shifts.reserve(shift_times.size());
    if (kernel.type() == KernelType::Zero) {
        for (double t : shift_times)
            shifts.push_back(finalize_shift(kernel, marks, t, T, {}, {}, {}));
        return shifts;
    }
    LayerStore store(T, kernel_sup(kernel), marks, rs);
    for (double t : shift_times) {
        switch (kernel.type()) {
            case KernelType::Exponential:
                shifts.push_back(replay_exponential(kernel, marks, store, t, T));
                break;
            case KernelType::Erlang:
                shifts.push_back(replay_erlang(kernel, marks, store, t, T));
                break;
            default:
                shifts.push_back(replay_tabulated(kernel, marks, store, t, T));
                break;
        }
    }
    return shifts;
}

double hat_intensity_at(const ShiftPath& shift, const Kernel& kernel, double s) {
    if (s < 0.0 || s > shift.horizon)
        throw std::domain_error("hat_intensity_at: s outside [0,T]");
    if (s <= shift.shift_time) return 0.0;
    double v = kernel.phi(s - shift.shift_time);
    for (double tj : shift.hat_event_times) {
        if (tj >= s) break;
        v += kernel.phi(s - tj);
    }
    return v;
}

double malliavin_derivative(const ShiftPath& shift, double x, double T) {
    return (x + shift.terminal_martingale) / std::sqrt(T);
}

CoupledRun simulate_coupled_run(const HawkesPath& base, const Kernel& kernel, double mu,
                                const MarkDistribution& marks, int K, RandomState rs) {
    if (K < 2) throw std::invalid_argument("coupled run: grid size K must be >= 2");
    CoupledRun run;
    run.base = base;
    run.grid_times.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        run.grid_times.push_back(base.horizon * static_cast<double>(k) /
                                 static_cast<double>(K - 1));
    run.shifts = simulate_joint_shifts(base, kernel, mu, marks, run.grid_times, rs);
    return run;
}

double lambda_hatM_integral(const HawkesPath& base, const Kernel& kernel, double mu,
                            const MarkDistribution& marks, int K, RandomState rs) {
    CoupledRun run = simulate_coupled_run(base, kernel, mu, marks, K, rs);
    const double T = base.horizon;
    const double h = T / static_cast<double>(K - 1);
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
        const double w = (k == 0 || k == K - 1) ? 0.5 * h : h;
        acc += w * intensity_at(base, kernel, mu, run.grid_times[static_cast<std::size_t>(k)]) *
               run.shifts[static_cast<std::size_t>(k)].terminal_martingale;
    }
    return acc;
}

}  // namespace hawkes
