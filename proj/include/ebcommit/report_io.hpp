#pragma once

// Schema-stable tables for experiment output: fixed column order, a header
// row, and 12 significant digits for every real number.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ebcommit/protocol.hpp"

namespace ebc::io {

inline constexpr std::string_view kVersion = "0.1.0";

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// "%.12g" independent of the global locale; non-finite values print as nan/inf.
std::string format_number(double value);

/// RFC 4180 with '\n' line endings.
void write_csv(const Table& table, std::ostream& os);

/// Array of row objects keyed by column name.
Json rows_to_json(const Table& table);

/// {"meta": meta, "rows": [...]} plus any extra top-level members.
Json document(const Json& meta, const Table& table);

std::string_view to_string(Bb84Basis basis);
std::string_view to_string(AliceKind kind);

/// One-row table with the verification outcome of a session.
Table report_table(const Transcript& transcript, const VerificationReport& report);

/// One row per protocol round.
Table transcript_table(const Transcript& transcript);

}  // namespace ebc::io
