#include <cgra/cli.hpp>

#include <cgra/arch_model.hpp>
#include <cgra/dse.hpp>
#include <cgra/error.hpp>
#include <cgra/io.hpp>
#include <cgra/matmul.hpp>
#include <cgra/report.hpp>
#include <cgra/rsp_scheduler.hpp>
#include <cgra/simulator.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

namespace cgra {

namespace {

struct Options {
    // genkernel matmul
    int n = 4;
    int stages = 1;
    std::string out_path;
    // shared
    std::string arch_path;
    std::string costs = "default";
    std::string context_path;
    // simulate
    std::string memory_path;
    bool check = false;
    // explore
    std::string space_path;
    std::vector<std::string> kernels;
    std::string report = "text";
    std::string policy = "min_et";
    std::vector<double> weights;
    bool serial = false;
};

// Re-raises parse errors with the file they came from.
template <typename F>
auto with_file(const std::string& path, F&& parse) {
    const std::string text = read_text_file(path);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void print_matrix(std::ostream& out, const std::string& name, const IntMatrix& m) {
    out << name << " (" << m.rows << "x" << m.cols << "):\n";
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) out << (c ? "\t" : "") << m.at(r, c);
        out << '\n';
    }
}

int cmd_genkernel(const Options& o, std::ostream& out) {
    const Context ctx = generate_matmul_context(o.n, o.stages);
    write_text_file(o.out_path, serialize_context(ctx));
    out << "wrote " << o.out_path << " (" << ctx.ops.size() << " ops, " << ctx.length_cycles() << " cycles)\n";
    out << pattern_dump(ctx);
    return exit_ok;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    const ArchParams arch = with_file(o.arch_path, parse_arch);
    const CostTable costs = load_cost_table(o.costs);
    const AreaEstimate est = estimate_hw_cost(arch, costs);
    out << "architecture: " << variant_key(arch).label() << " " << arch.n_rows << "x" << arch.m_cols << '\n';
    out << "estimated slices: " << format_fixed(est.estimated_slices) << '\n';
    out << "base slices: " << format_fixed(est.base_slices) << '\n';
    out << "area reduction R(%): "
        << format_fixed(area_reduction_ratio(est.base_slices, est.estimated_slices)) << '\n';
    out << "constraint (estimated < base): " << (est.satisfies_constraint ? "true" : "false") << '\n';
    if (auto it = costs.measured_array_delay.find(variant_key(arch)); it != costs.measured_array_delay.end())
        out << "array delay (ns): " << format_fixed(it->second) << '\n';
    return exit_ok;
}

void print_summary(std::ostream& out, const RearrangedContext& r) {
    out << "original length: " << r.original_length << '\n';
    out << "rp latency extension: " << r.rp_latency_extension << '\n';
    out << "rs stalls: " << r.rs_stall_count << '\n';
    out << "rp stalls: " << r.rp_stall_count << '\n';
    out << "total cycles: " << r.total_cycles << '\n';
}

int cmd_schedule(const Options& o, std::ostream& out) {
    const Context ctx = with_file(o.context_path, parse_context);
    const ArchParams arch = with_file(o.arch_path, parse_arch);
    const RearrangedContext r = rearrange(ctx, arch);
    if (!o.out_path.empty()) {
        write_text_file(o.out_path, serialize_rearranged_context(r));
        out << "wrote " << o.out_path << '\n';
    }
    out << "architecture: " << variant_key(arch).label() << '\n';
    print_summary(out, r);
    return exit_ok;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const std::string ctx_text = read_text_file(o.context_path);
    const ArchParams arch = with_file(o.arch_path, parse_arch);
    const MemoryImage mem = with_file(o.memory_path, parse_memory_image);

    RearrangedContext r;
    try {
        r = is_rearranged_document(ctx_text) ? parse_rearranged_context(ctx_text)
                                             : rearrange(parse_context(ctx_text), arch);
    } catch (const ParseError& e) {
        throw ParseError(o.context_path + ": " + e.what());
    }

    const MemoryImage result = simulate(r, arch, mem);
    if (!o.out_path.empty()) write_text_file(o.out_path, serialize_memory_image(result));
    out << "cycles: " << r.total_cycles << '\n';
    if (result.region("Z")) {
        print_matrix(out, "Z", read_region(result, "Z"));
    } else {
        for (const auto& reg : result.regions) print_matrix(out, reg.name, read_region(result, reg.name));
    }

    if (!o.check) return exit_ok;
    const IntMatrix x = read_region(mem, "X");
    const IntMatrix y = read_region(mem, "Y");
    auto c = mem.constants.find("C");
    if (c == mem.constants.end()) throw ConfigError(o.memory_path + ": constants.C is required for --check");
    if (x.rows != x.cols || y.rows != x.rows || y.cols != x.cols)
        throw ConfigError(o.memory_path + ": --check needs square X and Y of equal size");
    const IntMatrix expected = reference_matmul(x, y, c->second, x.rows, mem.width_bits);
    const bool pass = read_region(result, "Z") == expected;
    out << "check: " << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) print_matrix(out, "expected Z", expected);
    return pass ? exit_ok : exit_error;
}

int cmd_explore(const Options& o, std::ostream& out) {
    const SearchSpace space = with_file(o.space_path, parse_search_space);
    const CostTable costs = load_cost_table(o.costs);
    const ArchParams base = o.arch_path.empty() ? ArchParams{} : with_file(o.arch_path, parse_arch);

    std::vector<KernelInput> kernels;
    for (const auto& path : o.kernels)
        kernels.push_back({std::filesystem::path(path).stem().string(), with_file(path, parse_context)});

    SelectionPolicy policy;
    if (o.policy == "min_area") {
        policy = SelectionPolicy::min_area();
    } else if (o.policy == "weighted") {
        if (o.weights.size() != 2) throw ConfigError("--policy weighted needs --weights W_AREA,W_ET");
        policy = SelectionPolicy::weighted(o.weights[0], o.weights[1]);
    }

    const ExplorationResult result = explore(space, base, kernels, costs, policy, !o.serial);
    const std::string report = render_report(result, report_format_from_string(o.report));
    if (o.out_path.empty()) {
        out << report;
    } else {
        write_text_file(o.out_path, report);
        out << "wrote " << o.out_path << '\n';
        out << "Pareto set:";
        for (const auto& p : result.pareto) out << ' ' << p.label();
        out << "\nSelected: " << (result.optimal ? result.optimal->label() : std::string("none")) << '\n';
    }
    return exit_ok;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resource sharing and pipelining exploration for coarse-grained reconfigurable arrays",
                 args.empty() ? "cgra_rsp" : args[0]};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("genkernel", "Generate a configuration context");
    gen->require_subcommand(1);
    auto* mm = gen->add_subcommand("matmul", "Loop-pipelined Z = C*X*Y on an N x N array");
    mm->add_option("--n", o.n, "Array and matrix size (power of two)")->required();
    mm->add_option("--stages", o.stages, "Pipeline depth of the multiplier")->capture_default_str();
    mm->add_option("-o,--output", o.out_path, "Context file to write")->required();

    auto* est = app.add_subcommand("estimate", "Estimate array area and check the area constraint");
    est->add_option("--arch", o.arch_path, "Architecture file")->required();
    est->add_option("--costs", o.costs, "Cost table file or 'default'")->capture_default_str();

    auto* sch = app.add_subcommand("schedule", "Rearrange a context for an architecture");
    sch->add_option("--context", o.context_path, "Context file")->required();
    sch->add_option("--arch", o.arch_path, "Architecture file")->required();
    sch->add_option("-o,--output", o.out_path, "Rearranged context file to write");

    auto* sim = app.add_subcommand("simulate", "Execute a context on a memory image");
    sim->add_option("--context", o.context_path, "Context or rearranged context file")->required();
    sim->add_option("--arch", o.arch_path, "Architecture file")->required();
    sim->add_option("--memory", o.memory_path, "Memory image file")->required();
    sim->add_flag("--check", o.check, "Compare Z against C*X*Y");
    sim->add_option("-o,--output", o.out_path, "Final memory image file to write");

    auto* exp = app.add_subcommand("explore", "Explore sharing/pipelining designs");
    exp->add_option("--space", o.space_path, "Search-space file")->required();
    exp->add_option("--kernels", o.kernels, "Context files")->required()->delimiter(',');
    exp->add_option("--costs", o.costs, "Cost table file or 'default'")->capture_default_str();
    exp->add_option("--arch", o.arch_path, "Base architecture file (default 8x8)");
    exp->add_option("--report", o.report, "Report format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    exp->add_option("--policy", o.policy, "Selection policy")
        ->check(CLI::IsMember({"min_et", "min_area", "weighted"}))
        ->capture_default_str();
    exp->add_option("--weights", o.weights, "Weights for --policy weighted")->delimiter(',')->expected(2);
    exp->add_flag("--serial", o.serial, "Evaluate candidates without OpenMP");
    exp->add_option("-o,--output", o.out_path, "Report file to write");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("cgra_rsp");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (mm->parsed()) return cmd_genkernel(o, out);
        if (est->parsed()) return cmd_estimate(o, out);
        if (sch->parsed()) return cmd_schedule(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
        if (exp->parsed()) return cmd_explore(o, out);
    } catch (const SimulationFault& e) {
        err << "simulation fault: " << e.what() << '\n';
        return exit_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    err << app.help();
    return exit_usage;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

} // namespace cgra
