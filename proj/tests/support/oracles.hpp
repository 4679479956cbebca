#pragma once

// Independent reference computations used by the tests.  None of these call
// into the library code they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include <cgra/kernel_ir.hpp>

namespace oracle {

/// Array area written out term by term from the cost formula.
inline double array_slices(int n, int m, int shr, int shc, int stages, double sh_pe, double reg, double sw,
                           double sh_res) {
    double per_pe = sh_pe + sw;
    if (stages > 1) per_pe += reg;
    double total = 0.0;
    for (int i = 0; i < n * m; ++i) total += per_pe;
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < shr; ++k) total += sh_res;
    for (int c = 0; c < m; ++c)
        for (int k = 0; k < shc; ++k) total += sh_res;
    return total;
}

/// Stall count of the greedy sharing policy, replayed on issue cycles alone.
/// Per cycle the critical ops are served in rounds; each round every row
/// offers `shr` instances and every column `shc`, taken in
/// (iteration, row, col, id) order with rows preferred.  Every round past
/// the first is one inserted cycle.  Returns -1 when some op can never be
/// served.
inline int greedy_replay_stalls(const cgra::Context& ctx, int shr, int shc) {
    std::map<int, std::vector<std::tuple<int, int, int, int>>> by_cycle;
    for (const auto& op : ctx.ops)
        if (ctx.is_critical(op.opcode))
            by_cycle[op.cycle].emplace_back(op.iteration, op.pe.row, op.pe.col, op.id);
    if (!by_cycle.empty() && shr == 0 && shc == 0) return -1;

    int stalls = 0;
    for (auto& [cycle, pending] : by_cycle) {
        std::sort(pending.begin(), pending.end());
        int rounds = 0;
        while (!pending.empty()) {
            ++rounds;
            std::map<int, int> row_left;
            std::map<int, int> col_left;
            std::vector<std::tuple<int, int, int, int>> deferred;
            for (const auto& key : pending) {
                const int row = std::get<1>(key);
                const int col = std::get<2>(key);
                if (!row_left.count(row)) row_left[row] = shr;
                if (!col_left.count(col)) col_left[col] = shc;
                if (row_left[row] > 0) {
                    --row_left[row];
                } else if (col_left[col] > 0) {
                    --col_left[col];
                } else {
                    deferred.push_back(key);
                }
            }
            pending.swap(deferred);
        }
        stalls += rounds - 1;
    }
    return stalls;
}

/// Largest number of critical ops issued in any one cycle, counted by
/// scanning every cycle against every op.
inline int max_critical_scan(const cgra::Context& ctx) {
    int last = 0;
    for (const auto& op : ctx.ops) last = std::max(last, op.cycle);
    int best = 0;
    for (int t = 1; t <= last; ++t) {
        int count = 0;
        for (const auto& op : ctx.ops)
            if (op.cycle == t && ctx.critical_opcodes.count(op.opcode)) ++count;
        best = std::max(best, count);
    }
    return best;
}

/// Indices of the points no other point beats on both axes (minimisation).
inline std::set<std::size_t> non_dominated(const std::vector<std::pair<double, double>>& pts) {
    std::set<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool beaten = false;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            const bool no_worse = pts[j].first <= pts[i].first && pts[j].second <= pts[i].second;
            const bool differs = pts[j] != pts[i];
            if (no_worse && differs) beaten = true;
        }
        if (!beaten) out.insert(i);
    }
    return out;
}

} // namespace oracle
