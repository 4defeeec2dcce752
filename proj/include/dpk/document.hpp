#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dpk/candf.hpp"
#include "dpk/lattice.hpp"
#include "dpk/oracle.hpp"
#include "dpk/solver.hpp"

namespace dpk {

inline constexpr std::string_view kInstanceSchema = "dpk-instance/1";

// JSON interchange form of a DpkInstance:
//   {"schema_version": "dpk-instance/1", "n": 2, "k": 1,
//    "d": [3.0, 3.0], "V": [[1.0], [1.0]],
//    "metadata": {"seed": 7, "description": "..."}}
// Reals are written in shortest round-trip form.
struct InstanceDocument {
    std::string schema_version{kInstanceSchema};
    DpkInstance instance;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> description;

    friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

/// Throws ParseError (with 1-based line/column for syntax errors).
InstanceDocument parse_instance_document(std::string_view text);
std::string emit_instance_document(const InstanceDocument& doc);

InstanceDocument read_instance_file(const std::filesystem::path& path);
void write_instance_file(const std::filesystem::path& path, const InstanceDocument& doc);

using Json = nlohmann::ordered_json;

Json stats_json(const InstanceStats& stats);

/// {"a_star", "f_star", "stats": {...}}; wall_time_ms only when given.
Json result_json(const SolveResult& result, std::optional<double> wall_time_ms = std::nullopt);

Json oracle_json(const OracleResult& result, const InstanceStats& stats);

/// result_json plus the rate fields of a Compute-and-Forward run.
Json rate_json(const RateResult& rate, std::span<const double> h, double power,
               std::optional<double> wall_time_ms = std::nullopt);

}  // namespace dpk
