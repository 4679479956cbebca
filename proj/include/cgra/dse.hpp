#pragma once

#include <optional>
#include <string>
#include <vector>

#include <cgra/arch_model.hpp>
#include <cgra/kernel_ir.hpp>

namespace cgra {

/// How per-kernel execution times combine into one performance objective.
enum class EtAggregate { sum, max };

struct SearchSpace {
    std::vector<Opcode> resource_kinds{Opcode::mult};
    std::vector<int> stage_options{1, 2};
    std::vector<int> shr_options{1, 2};
    std::vector<int> shc_options{0, 1, 2};
    std::optional<double> max_area;     ///< unset: the strict n*m*pe_area bound
    double max_total_et_factor = 1.5;   ///< reject above factor * Base total ET
    EtAggregate aggregate = EtAggregate::sum;

    void validate() const;
};

struct KernelInput {
    std::string name;
    Context context;
};

struct KernelEval {
    std::string kernel_name;
    int cycles = 0;
    int stalls = 0;                 ///< RS + RP stall cycles
    int latency_extension = 0;
    double et_ns = 0.0;
    double dr_percent = 0.0;

    bool operator==(const KernelEval&) const = default;
};

struct CandidateEval {
    ArchParams arch;
    AreaEstimate area;
    double array_delay = 0.0;
    std::vector<KernelEval> per_kernel;
    double total_et = 0.0;

    std::string label() const { return variant_key(arch).label(); }

    bool operator==(const CandidateEval&) const = default;
};

struct PerformanceFigures {
    double et_ns = 0.0;
    double dr_percent = 0.0;
};

/// et = cycles * delay;  dr = 100 * (base_et - et) / base_et.  Unrounded.
PerformanceFigures evaluate_performance(int cycles, double array_delay_ns, double base_et_ns);

/// Base first, then every Shared combination in lexicographic
/// (kind, stages, shr, shc) order, skipping shr = shc = 0.
std::vector<ArchParams> enumerate_candidates(const SearchSpace& space, const ArchParams& base_arch);

/// Base-architecture ET of each kernel, the reference for DR.
std::vector<double> base_execution_times(const ArchParams& base_arch, const std::vector<KernelInput>& kernels,
                                         const CostTable& costs);

CandidateEval evaluate_candidate(const ArchParams& arch, const std::vector<KernelInput>& kernels,
                                 const CostTable& costs, const std::vector<double>& base_et,
                                 EtAggregate aggregate = EtAggregate::sum);

/// Convenience overload computing the Base reference itself.
CandidateEval evaluate_candidate(const ArchParams& arch, const std::vector<KernelInput>& kernels,
                                 const CostTable& costs);

/// Either an evaluation or the reason it was skipped.
struct CandidateOutcome {
    ArchParams arch;
    std::optional<CandidateEval> eval;
    std::string skipped_reason;
};

/// OpenMP fan-out over candidates; results keep the candidate order.
std::vector<CandidateOutcome> evaluate_candidates(const std::vector<ArchParams>& archs,
                                                  const std::vector<KernelInput>& kernels,
                                                  const CostTable& costs, const std::vector<double>& base_et,
                                                  EtAggregate aggregate = EtAggregate::sum);

/// Serial reference for evaluate_candidates.
std::vector<CandidateOutcome> evaluate_candidates_serial(const std::vector<ArchParams>& archs,
                                                         const std::vector<KernelInput>& kernels,
                                                         const CostTable& costs,
                                                         const std::vector<double>& base_et,
                                                         EtAggregate aggregate = EtAggregate::sum);

/// Two-objective minimisation point.
struct Objectives {
    double first = 0.0;
    double second = 0.0;
};

/// a dominates b iff a <= b on both objectives and < on at least one.
bool dominates(const Objectives& a, const Objectives& b) noexcept;

/// Indices of non-dominated points, in input order.  Equal vectors are all kept.
std::vector<std::size_t> pareto_indices(const std::vector<Objectives>& points);

/// Non-dominated candidates under (area.estimated_slices, total_et).
std::vector<CandidateEval> pareto_filter(const std::vector<CandidateEval>& evals);

struct SelectionPolicy {
    enum class Kind { min_et, min_area, weighted } kind = Kind::min_et;
    double w_area = 0.0;
    double w_et = 0.0;

    static SelectionPolicy min_et() { return {}; }
    static SelectionPolicy min_area() { return {Kind::min_area, 0.0, 0.0}; }
    static SelectionPolicy weighted(double w_area, double w_et) { return {Kind::weighted, w_area, w_et}; }
};

/// Picks one design from a Pareto set.  Ties fall back to smaller ET, then
/// smaller area, then lexicographic parameters.  Throws InfeasibleError on
/// an empty set.
CandidateEval select_optimal(const std::vector<CandidateEval>& pareto,
                             const SelectionPolicy& policy = SelectionPolicy::min_et());

struct Rejection {
    std::string label;
    std::string reason;
};

struct ExplorationResult {
    std::vector<CandidateEval> evaluated;   ///< every candidate with complete data
    std::vector<Rejection> rejected;        ///< threshold failures
    std::vector<std::string> warnings;      ///< skipped candidates
    std::vector<CandidateEval> pareto;
    std::optional<CandidateEval> optimal;
    std::vector<std::string> kernel_names;
};

/// Enumerate, evaluate, reject, Pareto-filter, select.
ExplorationResult explore(const SearchSpace& space, const ArchParams& base_arch,
                          const std::vector<KernelInput>& kernels, const CostTable& costs,
                          const SelectionPolicy& policy = SelectionPolicy::min_et(), bool parallel = true);

} // namespace cgra
