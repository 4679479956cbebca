#include "catch_amalgamated.hpp"

#include <cgra/kernel_ir.hpp>
#include <cgra/matmul.hpp>

#include "oracles.hpp"
#include "random_context.hpp"

using namespace cgra;

namespace {

Operation make(int id, Opcode code, int row, int col, int cycle, std::vector<int> deps = {},
               std::vector<Operand> operands = {}) {
    Operation op;
    op.id = id;
    op.opcode = code;
    op.pe = {row, col};
    op.cycle = cycle;
    op.deps = std::move(deps);
    op.operands = std::move(operands);
    return op;
}

Context two_by_two() {
    Context ctx;
    ctx.n_rows = 2;
    ctx.m_cols = 2;
    return ctx;
}

bool has(const std::vector<Violation>& v, ViolationKind k) {
    return std::any_of(v.begin(), v.end(), [k](const Violation& x) { return x.kind == k; });
}

} // namespace

TEST_CASE("Opcode names round-trip", "[ir]") {
    for (Opcode op : {Opcode::load, Opcode::store, Opcode::mult, Opcode::add, Opcode::sub, Opcode::shift,
                      Opcode::abs, Opcode::nop})
        CHECK(opcode_from_string(to_string(op)) == op);
    CHECK_FALSE(opcode_from_string("div").has_value());
}

TEST_CASE("validate_context accepts legal contexts", "[ir]") {
    Context ctx = two_by_two();
    ctx.ops = {make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}}),
               make(2, Opcode::mult, 0, 0, 2, {1}, {RegOperand{{0, 0}}, ImmOperand{3, {}}}),
               make(3, Opcode::store, 0, 1, 3, {2}, {RegOperand{{0, 0}}, MemOperand{9}})};
    CHECK(validate_context(ctx, ArchParams::base(2, 2)).empty());
    CHECK(validate_context(generate_matmul_context(4, 1), ArchParams::base(4, 4)).empty());
    CHECK(validate_context(generate_matmul_context(8, 1), ArchParams::base(8, 8)).empty());
}

TEST_CASE("validate_context reports each violation kind", "[ir]") {
    const ArchParams arch = ArchParams::base(2, 2);

    SECTION("out of bounds") {
        Context ctx = two_by_two();
        ctx.ops = {make(1, Opcode::load, 2, 0, 1, {}, {MemOperand{0}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::out_of_bounds));
    }
    SECTION("read bus") {
        Context ctx = two_by_two();
        ctx.m_cols = 3;
        ctx.ops = {make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}}),
                   make(2, Opcode::load, 0, 1, 1, {}, {MemOperand{1}}),
                   make(3, Opcode::load, 0, 2, 1, {}, {MemOperand{2}})};
        const auto v = validate_context(ctx, ArchParams::base(2, 3));
        REQUIRE(has(v, ViolationKind::read_bus));
        CHECK(v.front().row == 0);
        CHECK(v.front().cycle == 1);
    }
    SECTION("write bus") {
        Context ctx = two_by_two();
        ctx.ops = {make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}}),
                   make(2, Opcode::store, 0, 0, 2, {1}, {RegOperand{{0, 0}}, MemOperand{5}}),
                   make(3, Opcode::store, 0, 1, 2, {1}, {RegOperand{{0, 0}}, MemOperand{6}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::write_bus));
    }
    SECTION("dependence order") {
        Context ctx = two_by_two();
        ctx.ops = {make(1, Opcode::load, 0, 0, 2, {}, {MemOperand{0}}),
                   make(2, Opcode::abs, 1, 0, 2, {1}, {RegOperand{{0, 0}}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::dependence_order));
    }
    SECTION("pipelined producer not ready") {
        Context ctx = two_by_two();
        ctx.critical_stages = 2;
        ctx.ops = {make(1, Opcode::mult, 0, 0, 1, {}, {ImmOperand{1, {}}, ImmOperand{2, {}}}),
                   make(2, Opcode::abs, 1, 0, 2, {1}, {RegOperand{{0, 0}}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::dependence_order));
        ctx.ops[1].cycle = 3;
        CHECK(validate_context(ctx, arch).empty());
    }
    SECTION("missing producer") {
        Context ctx = two_by_two();
        ctx.ops = {make(2, Opcode::abs, 1, 0, 2, {7}, {RegOperand{{0, 0}}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::dependence_order));
    }
    SECTION("pe conflict") {
        Context ctx = two_by_two();
        ctx.critical_stages = 2;
        ctx.ops = {make(1, Opcode::mult, 0, 0, 1, {}, {ImmOperand{1, {}}, ImmOperand{2, {}}}),
                   make(2, Opcode::add, 0, 0, 2, {}, {ImmOperand{1, {}}, ImmOperand{2, {}}})};
        CHECK(has(validate_context(ctx, arch), ViolationKind::pe_conflict));
    }
    SECTION("iteration order") {
        Context ctx = two_by_two();
        auto a = make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}});
        a.iteration = 2;
        auto b = make(2, Opcode::abs, 0, 1, 2, {1}, {RegOperand{{0, 0}}});
        b.iteration = 1;
        ctx.ops = {a, b};
        CHECK(has(validate_context(ctx, arch), ViolationKind::iteration_order));
    }
}

TEST_CASE("Random generated contexts are legal on the Base array", "[ir][property]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const Context ctx = testgen::random_context(rng);
        const auto v = validate_context(ctx, ArchParams::base(ctx.n_rows, ctx.m_cols));
        INFO("context " << i << ": " << (v.empty() ? std::string() : v.front().message));
        REQUIRE(v.empty());
    }
}

TEST_CASE("Register operands bind to dependences by PE", "[ir]") {
    std::unordered_map<int, PeCoord> pe_of{{1, {0, 0}}, {2, {0, 1}}, {3, {0, 0}}};
    Operation op = make(9, Opcode::add, 1, 1, 3, {3, 2, 1}, {RegOperand{{0, 0}}, RegOperand{{0, 0}}});
    auto bound = bind_reg_operands(op, pe_of);
    REQUIRE(bound);
    CHECK(*bound == std::vector<int>{3, 1});

    op.operands = {RegOperand{{1, 1}}};
    CHECK_FALSE(bind_reg_operands(op, pe_of).has_value());
}

TEST_CASE("Result width", "[ir]") {
    CHECK(result_width(make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}, MemOperand{1}})) == 2);
    CHECK(result_width(make(1, Opcode::store, 0, 0, 1, {}, {MemOperand{0}})) == 0);
    CHECK(result_width(make(1, Opcode::mult, 0, 0, 1)) == 1);
}

TEST_CASE("Critical-op counting matches the scan oracle", "[ir]") {
    for (int n : {2, 4, 8}) {
        const Context ctx = generate_matmul_context(n, 1);
        CHECK(max_critical_ops_per_cycle(ctx) == oracle::max_critical_scan(ctx));
    }
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Context ctx = testgen::random_context(rng);
        CHECK(max_critical_ops_per_cycle(ctx) == oracle::max_critical_scan(ctx));
    }
    CHECK(max_critical_ops_per_cycle(Context{}) == 0);
}

TEST_CASE("Context length counts multi-cycle occupancy", "[ir]") {
    Context ctx = two_by_two();
    ctx.critical_stages = 3;
    ctx.ops = {make(1, Opcode::mult, 0, 0, 4, {}, {ImmOperand{1, {}}, ImmOperand{2, {}}}),
               make(2, Opcode::add, 0, 1, 5, {}, {ImmOperand{1, {}}, ImmOperand{2, {}}})};
    CHECK(ctx.length_cycles() == 6);
    CHECK(Context{}.length_cycles() == 0);
}

TEST_CASE("Pattern dump layout", "[ir]") {
    Context ctx = two_by_two();
    ctx.critical_stages = 2;
    ctx.ops = {make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}}),
               make(2, Opcode::load, 1, 0, 1, {}, {MemOperand{1}}),
               make(3, Opcode::mult, 0, 0, 2, {1}, {RegOperand{{0, 0}}, ImmOperand{2, {}}}),
               make(4, Opcode::store, 0, 1, 4, {3}, {RegOperand{{0, 0}}, MemOperand{9}})};
    CHECK(pattern_dump(ctx) == "\t1\t2\t3\t4\ncol#1\tLd\t1*\t2*\t\ncol#2\t\t\t\tSt\n");
    CHECK(column_pattern(ctx, 0, 2, 3) == std::vector<std::string>{"1*", "2*"});
}

TEST_CASE("Column pattern joins distinct symbols", "[ir]") {
    Context ctx = two_by_two();
    ctx.ops = {make(1, Opcode::load, 0, 0, 1, {}, {MemOperand{0}}),
               make(2, Opcode::load, 1, 0, 2, {}, {MemOperand{1}}),
               make(3, Opcode::abs, 0, 0, 2, {1}, {RegOperand{{0, 0}}})};
    CHECK(column_pattern(ctx, 0, 1, 2) == std::vector<std::string>{"Ld", "Ld/abs"});
}
