#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <cgra/arch_model.hpp>
#include <cgra/dse.hpp>
#include <cgra/kernel_ir.hpp>
#include <cgra/rsp_scheduler.hpp>
#include <cgra/simulator.hpp>

namespace cgra {

/// Whole file as a string; ConfigError naming the path if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Every parser throws ParseError whose message starts with the JSON path of
// the offending field, e.g. "ops[3].operands[1]: ...".

ArchParams parse_arch(std::string_view text);
std::string serialize_arch(const ArchParams& arch);

CostTable parse_cost_table(std::string_view text);
std::string serialize_cost_table(const CostTable& costs);
/// "default" yields CostTable::defaults(); anything else is a file path.
CostTable load_cost_table(const std::string& path_or_default);

Context parse_context(std::string_view text);
std::string serialize_context(const Context& ctx);

/// True if the document carries rearrangement data ("assignments").
bool is_rearranged_document(std::string_view text);
RearrangedContext parse_rearranged_context(std::string_view text);
std::string serialize_rearranged_context(const RearrangedContext& rctx);

MemoryImage parse_memory_image(std::string_view text);
std::string serialize_memory_image(const MemoryImage& mem);

SearchSpace parse_search_space(std::string_view text);
std::string serialize_search_space(const SearchSpace& space);

} // namespace cgra
