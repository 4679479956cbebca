// Acceptance run: one PASS/FAIL line per criterion.

#include <cgra/arch_model.hpp>
#include <cgra/dse.hpp>
#include <cgra/matmul.hpp>
#include <cgra/rsp_scheduler.hpp>
#include <cgra/simulator.hpp>

#include "oracles.hpp"
#include "random_context.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace cgra;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string mismatches;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            mismatches += " [mismatch: " + what + "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Area of the four shared designs.

void criterion_area(Outcome& o) {
    const CostTable costs = CostTable::defaults();
    const double base = estimate_hw_cost(ArchParams{}, costs).base_slices;
    o.expect(base == 58240.0, "base area");
    const std::vector<std::pair<int, int>> designs{{1, 0}, {2, 0}, {2, 1}, {2, 2}};
    const std::vector<double> stated{35264, 41536, 44864, 48960};
    o.detail << "base=" << base;
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto [shr, shc] = designs[i];
        const ArchParams arch = ArchParams::shared(8, 8, shr, shc, 1);
        const AreaEstimate est = estimate_hw_cost(arch, costs);
        const double expected = oracle::array_slices(8, 8, shr, shc, 1, costs.sh_pe_area, costs.reg_area,
                                                     costs.sw_area.at({shr, shc}), costs.sh_res_area);
        o.detail << " (" << shr << "," << shc << ")=" << est.estimated_slices;
        if (est.estimated_slices != stated[i]) o.detail << "{stated " << stated[i] << "}";
        o.expect(est.estimated_slices == expected, "area of (" + std::to_string(shr) + "," + std::to_string(shc) + ")");
        o.expect(est.satisfies_constraint && est.estimated_slices < 58240.0, "strict bound");
    }
}

// ---------------------------------------------------------------------------
// ET / DR reproduction of the kernel performance tables.

struct TableRow {
    std::string arch;
    std::vector<int> cycles;
    std::vector<double> et;
    std::vector<double> dr;
};

struct PerfTable {
    std::vector<std::string> kernels;
    std::vector<TableRow> rows;  // Base first
};

PerfTable livermore_table() {
    return {{"Hydro", "ICCG", "Tri-diagonal", "Inner product", "State"},
            {{"Base", {15, 18, 17, 21, 20}, {390, 468, 442, 546, 520}, {0, 0, 0, 0, 0}},
             {"RS#1", {19, 18, 17, 21, 35}, {510.15, 483.3, 456.45, 563.85, 939.75}, {-30.80, -3.26, -3.26, -3.26, -80.72}},
             {"RS#2", {15, 18, 17, 21, 20}, {419.55, 503.46, 475.49, 587.37, 559.4}, {-1.07, -7.58, -7.58, -7.58, -7.58}},
             {"RS#3", {15, 18, 17, 21, 20}, {433.35, 520.02, 491.13, 606.69, 577.8}, {-11.11, -11.11, -11.11, -11.11, -11.11}},
             {"RS#4", {15, 18, 17, 21, 20}, {453.45, 544.14, 513.91, 634.83, 604.6}, {-16.27, 16.27, -16.27, -16.27, -16.27}},
             {"RSP#1", {21, 19, 18, 22, 37}, {351.12, 317.68, 300.96, 367.84, 618.64}, {10, 32.12, 31.91, 32.64, -18.96}},
             {"RSP#2", {19, 19, 18, 22, 23}, {327.94, 327.94, 310.68, 379.72, 396.68}, {15.92, 29.93, 29.71, 30.45, 23.65}},
             {"RSP#3", {19, 19, 18, 22, 23}, {345.99, 345.99, 327.78, 400.62, 418.83}, {11.28, 26.07, 25.84, 26.62, 19.45}},
             {"RSP#4", {19, 19, 18, 22, 23}, {357.77, 357.77, 338.94, 414.26, 433.09}, {8.26, 23.55, 23.31, 24.12, 16.71}}}};
}

PerfTable application_table() {
    return {{"2D-FDCT", "SAD", "MVM", "FFT"},
            {{"Base", {32, 39, 19, 23}, {832, 1014, 494, 598}, {0, 0, 0, 0}},
             {"RS#1", {56, 39, 19, 37}, {1503.6, 1047.15, 510.15, 993.45}, {-80.72, -3.26, -3.26, -66.12}},
             {"RS#2", {38, 39, 19, 23}, {1062.86, 1090.83, 531.43, 643.31}, {-7.58, -7.58, -7.58, -7.58}},
             {"RS#3", {32, 39, 19, 23}, {924.48, 1126.7, 548.91, 664.47}, {-11.11, -11.11, -11.11, -11.11}},
             {"RS#4", {32, 39, 19, 23}, {967.36, 1178.97, 574.37, 695.29}, {-16.27, -16.27, -16.27, -16.27}},
             {"RSP#1", {64, 39, 20, 40}, {1070.08, 652.08, 334.4, 668.8}, {-28.61, 35.7, 32.31, -11.83}},
             {"RSP#2", {40, 39, 20, 27}, {690.4, 673.14, 345.2, 466.02}, {17.01, 33.61, 30.12, 22.07}},
             {"RSP#3", {40, 39, 20, 27}, {728.4, 710.19, 364.2, 491.67}, {12.45, 29.96, 26.27, 17.78}},
             {"RSP#4", {40, 39, 20, 27}, {753.2, 734.37, 376.6, 508.41}, {9.47, 27.57, 23.76, 14.98}}}};
}

ArchParams design(const std::string& name) {
    if (name == "Base") return ArchParams{};
    static const std::map<char, std::pair<int, int>> sharing{{'1', {1, 0}}, {'2', {2, 0}}, {'3', {2, 1}}, {'4', {2, 2}}};
    const auto [shr, shc] = sharing.at(name.back());
    return ArchParams::shared(8, 8, shr, shc, name.rfind("RSP", 0) == 0 ? 2 : 1);
}

// Printed cells that disagree with cycles x delay.  Each is pinned to the
// value the formula gives.
struct Misprint {
    std::string arch;
    std::string kernel;
    char field;  // 'e' = ET, 'd' = DR
    double printed;
    double computed;
};

const std::vector<Misprint>& misprints() {
    static const std::vector<Misprint> m{
        {"RS#2", "Hydro", 'd', -1.07, -7.58},     {"RS#4", "ICCG", 'd', 16.27, -16.27},
        {"RSP#1", "Hydro", 'd', 10.0, 9.97},      {"RSP#2", "State", 'e', 396.68, 396.98},
        {"RS#2", "2D-FDCT", 'd', -7.58, -27.75},  {"RS#3", "SAD", 'e', 1126.7, 1126.71},
    };
    return m;
}

const Misprint* find_misprint(const std::string& arch, const std::string& kernel, char field) {
    for (const auto& m : misprints())
        if (m.arch == arch && m.kernel == kernel && m.field == field) return &m;
    return nullptr;
}

void check_table(const PerfTable& table, const CostTable& costs, Outcome& o, int& cells, int& pinned) {
    const double base_delay = lookup_array_delay(ArchParams{}, costs);
    for (const auto& row : table.rows) {
        const double delay = lookup_array_delay(design(row.arch), costs);
        for (std::size_t k = 0; k < table.kernels.size(); ++k) {
            const double base_et = table.rows[0].cycles[k] * base_delay;
            const auto perf = evaluate_performance(row.cycles[k], delay, base_et);
            const std::string where = row.arch + " " + table.kernels[k];
            for (char field : {'e', 'd'}) {
                const double got = field == 'e' ? perf.et_ns : perf.dr_percent;
                const double printed = field == 'e' ? row.et[k] : row.dr[k];
                const double tol = field == 'e' ? 0.005 : 0.01;
                double want = printed;
                if (const Misprint* m = find_misprint(row.arch, table.kernels[k], field)) {
                    want = m->computed;
                    ++pinned;
                }
                ++cells;
                // A small allowance for the binary representation of the tolerance edge.
                o.expect(std::fabs(got - want) <= tol + 1e-9,
                         where + (field == 'e' ? " ET " : " DR ") + std::to_string(got) + " vs " + std::to_string(want));
            }
        }
    }
}

void criterion_perf(Outcome& o) {
    const CostTable costs = CostTable::defaults();
    int cells = 0;
    int pinned = 0;
    check_table(livermore_table(), costs, o, cells, pinned);
    check_table(application_table(), costs, o, cells, pinned);
    o.detail << cells << " ET/DR cells checked, " << pinned << " printed cells pinned to the formula";

    const double base_area = 55739.0;
    const std::vector<std::pair<std::string, std::pair<double, double>>> area_rows{
        {"RSP#1", {33249, 40.35}}, {"RSP#2", {38422, 31.07}}, {"RSP#3", {42987, 22.88}}, {"RSP#4", {47981, 13.92}},
        {"RS#1", {32446, 41.79}},  {"RS#2", {36816, 33.95}},  {"RS#3", {40577, 27.20}}};
    for (const auto& [name, v] : area_rows) {
        const double r = area_reduction_ratio(base_area, v.first);
        o.expect(std::fabs(r - v.second) <= 0.005 + 1e-9, name + " R(%) " + std::to_string(r));
    }
    o.detail << "; area R(%) RSP 40.35/31.07/22.88/13.92, RS 41.79/33.95/27.20 (printed 42.8/34.05/27.02)";
}

// ---------------------------------------------------------------------------

std::string column_one(const Context& ctx, int first, int last) {
    std::string s;
    for (const auto& sym : column_pattern(ctx, 0, first, last)) s += (s.empty() ? "" : ",") + sym;
    return s;
}

void criterion_patterns(Outcome& o) {
    const Context one = generate_matmul_context(4, 1);
    const Context two = generate_matmul_context(4, 2);
    const std::string p1 = column_one(one, 1, 12);
    const std::string p2 = column_one(two, 1, 8);
    o.expect(p1 == "Ld,*,+,+,*,St,Ld,*,+,+,*,St", "stages=1 column 1: " + p1);
    o.expect(p2 == "Ld,1*,2*,+,+,1*,2*,St", "stages=2 column 1: " + p2);
    o.expect(column_pattern(one, 1, 2, 7) == column_pattern(one, 0, 1, 6), "column shift");
    o.expect(column_pattern(two, 3, 4, 11) == column_pattern(two, 0, 1, 8), "column shift (stages=2)");
    const std::string dump = pattern_dump(one, 1, 6);
    o.expect(dump.find("col#1\tLd\t*\t+\t+\t*\tSt\n") != std::string::npos, "dump of stages=1");
    o.expect(pattern_dump(two, 1, 8).find("col#1\tLd\t1*\t2*\t+\t+\t1*\t2*\tSt\n") != std::string::npos,
             "dump of stages=2");
    o.detail << "col#1 " << p1 << " | " << p2;
}

// ---------------------------------------------------------------------------

void criterion_peak(Outcome& o) {
    const Context ctx = generate_matmul_context(4, 1);
    const int peak = max_critical_ops_per_cycle(ctx);
    o.expect(peak == 8 && oracle::max_critical_scan(ctx) == 8, "peak " + std::to_string(peak));
    const auto shr2 = rearrange(ctx, ArchParams::shared(4, 4, 2, 0, 1));
    const auto rsp1 = rearrange(ctx, ArchParams::shared(4, 4, 1, 0, 2));
    const auto rs1 = rearrange(ctx, ArchParams::shared(4, 4, 1, 0, 1));
    const int expected = oracle::greedy_replay_stalls(ctx, 1, 0);
    o.expect(shr2.rs_stall_count + shr2.rp_stall_count == 0, "shr=2 stalls");
    o.expect(rsp1.rs_stall_count + rsp1.rp_stall_count == 0, "shr=1 stages=2 stalls");
    o.expect(rs1.rs_stall_count > 0 && rs1.rs_stall_count == expected && rs1.rp_stall_count == 0,
             "shr=1 stages=1 stalls " + std::to_string(rs1.rs_stall_count));
    o.detail << "peak=" << peak << " stalls (2,0,s1)=" << shr2.rs_stall_count << " (1,0,s2)=" << rsp1.rs_stall_count
             << " (1,0,s1)=" << rs1.rs_stall_count << " oracle=" << expected;
}

// ---------------------------------------------------------------------------

void criterion_semantics(Outcome& o) {
    const auto t0 = Clock::now();
    const int n = 4;
    const int instances = 120;
    const MatmulLayout layout = MatmulLayout::packed(n);
    const Context ctx = generate_matmul_context(n, 1, layout);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> entry(0, 15);
    std::vector<MemoryImage> inputs;
    std::vector<IntMatrix> expected;
    for (int i = 0; i < instances; ++i) {
        IntMatrix x(n, n), y(n, n);
        for (auto& v : x.values) v = entry(rng);
        for (auto& v : y.values) v = entry(rng);
        const int c = entry(rng);
        inputs.push_back(make_matmul_memory(x, y, c, layout));
        expected.push_back(reference_matmul(x, y, c, n));
    }

    std::vector<ArchParams> archs{ArchParams::base(n, n)};
    for (int stages = 1; stages <= 2; ++stages)
        for (int shr = 0; shr <= 2; ++shr)
            for (int shc = 0; shc <= 2; ++shc)
                if (shr + shc > 0) archs.push_back(ArchParams::shared(n, n, shr, shc, stages));

    int runs = 0;
    for (const auto& arch : archs) {
        const auto r = rearrange(ctx, arch);
        const auto outputs = simulate_many(r, arch, inputs);
        for (int i = 0; i < instances; ++i) {
            ++runs;
            if (read_region(outputs[static_cast<std::size_t>(i)], "Z") != expected[static_cast<std::size_t>(i)]) {
                o.expect(false, variant_key(arch).label() + " instance " + std::to_string(i));
                break;
            }
        }
    }
    const double secs = seconds_since(t0);
    o.expect(secs < 30.0, "runtime");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d instances x %zu archs = %d runs, %.2f s", instances, archs.size(), runs, secs);
    o.detail << buf;
}

// ---------------------------------------------------------------------------

void criterion_properties(Outcome& o) {
    const auto t0 = Clock::now();
    const int contexts = 1000;
    std::mt19937_64 rng(6);

    int mono_checks = 0, mono_fail = 0;
    int relief_checks = 0, relief_fail = 0, relief_ctx_fail = 0;
    int acct_checks = 0, acct_fail = 0;
    int pareto_checks = 0, pareto_fail = 0;

    SearchSpace space;
    const CostTable costs = CostTable::defaults();

    for (int i = 0; i < contexts; ++i) {
        const Context ctx = testgen::random_context(rng);
        // stalls[stages][shr][shc], RS stalls only; RP stalls do not depend on sharing.
        int stalls[3][4][4] = {};
        bool ctx_relief_fail = false;
        for (int stages = 1; stages <= 2; ++stages)
            for (int shr = 0; shr <= 3; ++shr)
                for (int shc = 0; shc <= 3; ++shc) {
                    if (shr + shc == 0) continue;
                    const auto r = rearrange(ctx, ArchParams::shared(ctx.n_rows, ctx.m_cols, shr, shc, stages));
                    stalls[stages][shr][shc] = r.rs_stall_count;
                    ++acct_checks;
                    const bool ok = r.total_cycles == r.original_length + r.rp_latency_extension + r.rs_stall_count +
                                                          r.rp_stall_count &&
                                    static_cast<int>(r.stalls.size()) == r.rs_stall_count + r.rp_stall_count &&
                                    r.original_length == ctx.length_cycles() && r.makespan() <= r.total_cycles;
                    if (!ok) ++acct_fail;
                }
        for (int stages = 1; stages <= 2; ++stages)
            for (int shr = 0; shr <= 3; ++shr)
                for (int shc = 0; shc <= 3; ++shc) {
                    if (shr + shc == 0) continue;
                    if (shr < 3) {
                        ++mono_checks;
                        if (stalls[stages][shr + 1][shc] > stalls[stages][shr][shc]) ++mono_fail;
                    }
                    if (shc < 3) {
                        ++mono_checks;
                        if (stalls[stages][shr][shc + 1] > stalls[stages][shr][shc]) ++mono_fail;
                    }
                }
        for (int shr = 0; shr <= 3; ++shr)
            for (int shc = 0; shc <= 3; ++shc) {
                if (shr + shc == 0) continue;
                ++relief_checks;
                if (stalls[2][shr][shc] > stalls[1][shr][shc]) {
                    ++relief_fail;
                    ctx_relief_fail = true;
                }
            }
        if (ctx_relief_fail) ++relief_ctx_fail;

        // Pareto soundness and idempotence over the candidates evaluated on this context.
        const std::vector<KernelInput> kernels{{"k", ctx}};
        const auto archs = enumerate_candidates(space, ArchParams::base(ctx.n_rows, ctx.m_cols));
        const auto base_et = base_execution_times(ArchParams::base(ctx.n_rows, ctx.m_cols), kernels, costs);
        std::vector<CandidateEval> evals;
        for (const auto& outcome : evaluate_candidates_serial(archs, kernels, costs, base_et))
            if (outcome.eval) evals.push_back(*outcome.eval);
        std::vector<std::pair<double, double>> pts;
        for (const auto& e : evals) pts.emplace_back(e.area.estimated_slices, e.total_et);
        const auto front = pareto_filter(evals);
        std::set<std::size_t> got;
        for (const auto& f : front)
            for (std::size_t k = 0; k < evals.size(); ++k)
                if (evals[k] == f) got.insert(k);
        ++pareto_checks;
        if (got != oracle::non_dominated(pts) || pareto_filter(front) != front) ++pareto_fail;
    }
    const double secs = seconds_since(t0);

    o.expect(mono_fail == 0, "monotonicity");
    o.expect(relief_fail == 0, "pipelining relief");
    o.expect(acct_fail == 0, "accounting");
    o.expect(pareto_fail == 0, "pareto");
    o.expect(secs < 60.0, "runtime");
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%d contexts: monotonicity %d/%d ok; relief %d/%d ok (%d contexts with a violation); "
                  "accounting %d/%d ok; pareto %d/%d ok; %.2f s",
                  contexts, mono_checks - mono_fail, mono_checks, relief_checks - relief_fail, relief_checks,
                  relief_ctx_fail, acct_checks - acct_fail, acct_checks, pareto_checks - pareto_fail, pareto_checks,
                  secs);
    o.detail << buf;
}

// ---------------------------------------------------------------------------

void criterion_pareto(Outcome& o) {
    const std::vector<std::pair<std::string, std::pair<double, double>>> rows{
        {"RS#1", {32446, 26.85}},  {"RS#2", {36816, 27.97}},  {"RS#3", {40577, 28.89}},  {"RS#4", {44768, 30.23}},
        {"RSP#1", {33249, 16.72}}, {"RSP#2", {38422, 17.26}}, {"RSP#3", {42987, 18.21}}, {"RSP#4", {47981, 18.83}}};
    std::vector<CandidateEval> evals;
    std::map<std::string, std::string> names;
    for (const auto& [name, v] : rows) {
        CandidateEval e;
        e.arch = design(name);
        e.area.estimated_slices = v.first;
        e.array_delay = v.second;
        e.total_et = v.second;
        names[e.label()] = name;
        evals.push_back(e);
    }
    std::set<std::string> front;
    for (const auto& e : pareto_filter(evals)) front.insert(names.at(e.label()));
    o.expect(front == std::set<std::string>{"RS#1", "RSP#1"}, "pareto set");
    o.detail << "pareto = {";
    bool first = true;
    for (const auto& f : front) {
        o.detail << (first ? "" : ", ") << f;
        first = false;
    }
    o.detail << "}";
}

} // namespace

int main() {
    const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
        {1, criterion_area},      {2, criterion_perf},       {3, criterion_patterns}, {4, criterion_peak},
        {5, criterion_semantics}, {6, criterion_properties}, {7, criterion_pareto}};
    int failed = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.mismatches += std::string(" [exception: ") + e.what() + "]";
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail.str() << o.mismatches << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
