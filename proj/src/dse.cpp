#include <cgra/dse.hpp>

#include <cgra/error.hpp>
#include <cgra/rsp_scheduler.hpp>

#include <algorithm>
#include <limits>
#include <tuple>

namespace cgra {

void SearchSpace::validate() const {
    if (resource_kinds.empty() || stage_options.empty() || shr_options.empty() || shc_options.empty())
        throw ConfigError("search space option sets must be nonempty");
    for (Opcode k : resource_kinds)
        if (!is_compute(k))
            throw ConfigError("resource kind '" + std::string(to_string(k)) + "' cannot be shared");
    for (int s : stage_options)
        if (s < 1) throw ConfigError("stage options must be >= 1");
    for (int v : shr_options)
        if (v < 0) throw ConfigError("shr options must be >= 0");
    for (int v : shc_options)
        if (v < 0) throw ConfigError("shc options must be >= 0");
    if (max_area && !(*max_area > 0.0)) throw ConfigError("max_area must be positive");
    if (!(max_total_et_factor > 0.0)) throw ConfigError("max_total_et_factor must be positive");
}

PerformanceFigures evaluate_performance(int cycles, double array_delay_ns, double base_et_ns) {
    if (cycles < 0) throw DomainError("cycle count must be nonnegative");
    if (!(array_delay_ns > 0.0)) throw DomainError("array delay must be positive");
    if (!(base_et_ns > 0.0)) throw DomainError("base execution time must be positive");
    PerformanceFigures f;
    f.et_ns = cycles * array_delay_ns;
    f.dr_percent = 100.0 * (base_et_ns - f.et_ns) / base_et_ns;
    return f;
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

auto param_key(const ArchParams& a) {
    if (!a.sharing) return std::tuple{0, -1, 0, 0, 0};
    const auto& s = *a.sharing;
    return std::tuple{1, static_cast<int>(s.resource_kind), s.stages, s.shr, s.shc};
}

double aggregate_et(const std::vector<KernelEval>& per_kernel, EtAggregate aggregate) {
    double total = 0.0;
    for (const auto& k : per_kernel)
        total = aggregate == EtAggregate::sum ? total + k.et_ns : std::max(total, k.et_ns);
    return total;
}

CandidateOutcome evaluate_one(const ArchParams& arch, const std::vector<KernelInput>& kernels,
                              const CostTable& costs, const std::vector<double>& base_et,
                              EtAggregate aggregate) {
    CandidateOutcome out{arch, std::nullopt, {}};
    try {
        out.eval = evaluate_candidate(arch, kernels, costs, base_et, aggregate);
    } catch (const Error& e) {
        out.skipped_reason = variant_key(arch).label() + " skipped: " + e.what();
    }
    return out;
}

} // namespace

std::vector<ArchParams> enumerate_candidates(const SearchSpace& space, const ArchParams& base_arch) {
    std::vector<ArchParams> out;
    ArchParams base = base_arch;
    base.sharing.reset();
    out.push_back(base);
    for (Opcode kind : sorted_unique(space.resource_kinds))
        for (int stages : sorted_unique(space.stage_options))
            for (int shr : sorted_unique(space.shr_options))
                for (int shc : sorted_unique(space.shc_options)) {
                    if (shr == 0 && shc == 0) continue;
                    ArchParams a = base;
                    a.sharing = SharedResource{kind, shr, shc, stages};
                    out.push_back(a);
                }
    return out;
}

std::vector<double> base_execution_times(const ArchParams& base_arch, const std::vector<KernelInput>& kernels,
                                         const CostTable& costs) {
    ArchParams base = base_arch;
    base.sharing.reset();
    const double delay = lookup_array_delay(base, costs);
    std::vector<double> out;
    out.reserve(kernels.size());
    for (const auto& k : kernels) out.push_back(estimate_cycles_upper_bound(k.context, base) * delay);
    return out;
}

CandidateEval evaluate_candidate(const ArchParams& arch, const std::vector<KernelInput>& kernels,
                                 const CostTable& costs, const std::vector<double>& base_et,
                                 EtAggregate aggregate) {
    if (kernels.empty()) throw DomainError("at least one kernel is required");
    if (base_et.size() != kernels.size()) throw DomainError("one base execution time per kernel is required");

    CandidateEval eval;
    eval.arch = arch;
    eval.area = estimate_hw_cost(arch, costs);
    eval.array_delay = lookup_array_delay(arch, costs);
    eval.per_kernel.reserve(kernels.size());
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const RearrangedContext r = rearrange(kernels[i].context, arch);
        const auto perf = evaluate_performance(r.total_cycles, eval.array_delay, base_et[i]);
        eval.per_kernel.push_back(KernelEval{kernels[i].name, r.total_cycles,
                                             r.rs_stall_count + r.rp_stall_count, r.rp_latency_extension,
                                             perf.et_ns, perf.dr_percent});
    }
    eval.total_et = aggregate_et(eval.per_kernel, aggregate);
    return eval;
}

CandidateEval evaluate_candidate(const ArchParams& arch, const std::vector<KernelInput>& kernels,
                                 const CostTable& costs) {
    return evaluate_candidate(arch, kernels, costs, base_execution_times(arch, kernels, costs));
}

std::vector<CandidateOutcome> evaluate_candidates_serial(const std::vector<ArchParams>& archs,
                                                         const std::vector<KernelInput>& kernels,
                                                         const CostTable& costs,
                                                         const std::vector<double>& base_et,
                                                         EtAggregate aggregate) {
    std::vector<CandidateOutcome> out;
    out.reserve(archs.size());
    for (const auto& a : archs) out.push_back(evaluate_one(a, kernels, costs, base_et, aggregate));
    return out;
}

std::vector<CandidateOutcome> evaluate_candidates(const std::vector<ArchParams>& archs,
                                                  const std::vector<KernelInput>& kernels,
                                                  const CostTable& costs, const std::vector<double>& base_et,
                                                  EtAggregate aggregate) {
    std::vector<CandidateOutcome> out(archs.size());
    const auto n = static_cast<std::ptrdiff_t>(archs.size());

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = evaluate_one(archs[k], kernels, costs, base_et, aggregate);
    }
    return out;
}

bool dominates(const Objectives& a, const Objectives& b) noexcept {
    return a.first <= b.first && a.second <= b.second && (a.first < b.first || a.second < b.second);
}

std::vector<std::size_t> pareto_indices(const std::vector<Objectives>& points) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            dominated = j != i && dominates(points[j], points[i]);
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

std::vector<CandidateEval> pareto_filter(const std::vector<CandidateEval>& evals) {
    std::vector<Objectives> points;
    points.reserve(evals.size());
    for (const auto& e : evals) points.push_back({e.area.estimated_slices, e.total_et});
    std::vector<CandidateEval> out;
    for (std::size_t i : pareto_indices(points)) out.push_back(evals[i]);
    return out;
}

CandidateEval select_optimal(const std::vector<CandidateEval>& pareto, const SelectionPolicy& policy) {
    if (pareto.empty()) throw InfeasibleError("no feasible design: the Pareto set is empty");

    double max_area = 0.0;
    double max_et = 0.0;
    for (const auto& c : pareto) {
        max_area = std::max(max_area, c.area.estimated_slices);
        max_et = std::max(max_et, c.total_et);
    }
    auto score = [&](const CandidateEval& c) {
        switch (policy.kind) {
        case SelectionPolicy::Kind::min_et: return c.total_et;
        case SelectionPolicy::Kind::min_area: return c.area.estimated_slices;
        case SelectionPolicy::Kind::weighted:
            return policy.w_area * (max_area > 0.0 ? c.area.estimated_slices / max_area : 0.0) +
                   policy.w_et * (max_et > 0.0 ? c.total_et / max_et : 0.0);
        }
        return c.total_et;
    };
    auto better = [&](const CandidateEval& a, const CandidateEval& b) {
        return std::tuple{score(a), a.total_et, a.area.estimated_slices, param_key(a.arch)} <
               std::tuple{score(b), b.total_et, b.area.estimated_slices, param_key(b.arch)};
    };
    return *std::min_element(pareto.begin(), pareto.end(), better);
}

ExplorationResult explore(const SearchSpace& space, const ArchParams& base_arch,
                          const std::vector<KernelInput>& kernels, const CostTable& costs,
                          const SelectionPolicy& policy, bool parallel) {
    space.validate();
    base_arch.validate();
    costs.validate();
    if (kernels.empty()) throw DomainError("at least one kernel is required");

    ExplorationResult result;
    for (const auto& k : kernels) result.kernel_names.push_back(k.name);

    const auto candidates = enumerate_candidates(space, base_arch);
    const auto base_et = base_execution_times(base_arch, kernels, costs);
    const auto outcomes = parallel
                              ? evaluate_candidates(candidates, kernels, costs, base_et, space.aggregate)
                              : evaluate_candidates_serial(candidates, kernels, costs, base_et, space.aggregate);

    double base_total = 0.0;
    for (double et : base_et)
        base_total = space.aggregate == EtAggregate::sum ? base_total + et : std::max(base_total, et);
    const double et_limit = space.max_total_et_factor * base_total;

    std::vector<CandidateEval> admitted;
    for (const auto& o : outcomes) {
        if (!o.eval) {
            result.warnings.push_back(o.skipped_reason);
            continue;
        }
        const CandidateEval& e = *o.eval;
        result.evaluated.push_back(e);
        const bool area_ok = space.max_area ? e.area.estimated_slices <= *space.max_area
                                            : check_cost_constraint(e.area);
        if (!area_ok) {
            result.rejected.push_back({e.label(), "hardware cost above the area bound"});
            continue;
        }
        if (e.total_et > et_limit) {
            result.rejected.push_back({e.label(), "execution time above the performance bound"});
            continue;
        }
        admitted.push_back(e);
    }

    result.pareto = pareto_filter(admitted);
    if (!result.pareto.empty()) result.optimal = select_optimal(result.pareto, policy);
    return result;
}

} // namespace cgra
