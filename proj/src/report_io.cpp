#include "ebcommit/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace ebc::io {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

Json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          // Round through the 12-digit text form so JSON matches the CSV.
          if (!std::isfinite(v)) return nullptr;
          const std::string text = format_number(v);
          double rounded = v;
          std::from_chars(text.data(), text.data() + text.size(), rounded);
          return rounded;
        } else {
          return v;
        }
      },
      cell);
}

Cell optional_int(const std::optional<int>& v) {
  if (!v) return std::string{};
  return std::int64_t{*v};
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table row has " + std::to_string(row.size()) +
                                " cells, header has " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  return fmt::format("{:.12g}", value);
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

Json rows_to_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

Json document(const Json& meta, const Table& table) {
  Json doc = Json::object();
  doc["meta"] = meta;
  doc["rows"] = rows_to_json(table);
  return doc;
}

std::string_view to_string(Bb84Basis basis) {
  return basis == Bb84Basis::Rectilinear ? "rectilinear" : "diagonal";
}

std::string_view to_string(AliceKind kind) { return kind == AliceKind::Honest ? "honest" : "epr"; }

Table report_table(const Transcript& transcript, const VerificationReport& report) {
  Table table;
  table.columns = {"alice",          "q",          "rounds",           "committed_bit",
                   "opened_bit",     "seed",       "sifted_count",     "match_count",
                   "match_fraction", "expected_fraction", "threshold", "accepted"};
  const auto& c = transcript.config;
  table.add_row({std::string(to_string(transcript.alice)), c.q,
                 static_cast<std::int64_t>(c.rounds), std::int64_t{transcript.committed_bit},
                 optional_int(transcript.opened_bit), std::uint64_t{c.seed},
                 static_cast<std::int64_t>(report.sifted_count),
                 static_cast<std::int64_t>(report.match_count), report.match_fraction,
                 report.expected_fraction, report.threshold, report.accepted});
  return table;
}

Table transcript_table(const Transcript& transcript) {
  Table table;
  table.columns = {"round",     "alice_bit",     "alice_variant",     "state_index",
                   "bob_basis", "bob_outcome",   "alice_outcome",     "announced_variant",
                   "sifted",    "matched"};
  for (std::size_t r = 0; r < transcript.records.size(); ++r) {
    const RoundRecord& rec = transcript.records[r];
    Cell bit = std::string{};
    Cell variant = std::string{};
    if (rec.alice_symbol) {
      bit = std::int64_t{rec.alice_symbol->bit};
      variant = std::int64_t{rec.alice_symbol->variant};
    }
    table.add_row({static_cast<std::int64_t>(r), bit, variant,
                   static_cast<std::int64_t>(rec.state_index), std::string(to_string(rec.bob_basis)),
                   std::int64_t{rec.bob_outcome}, optional_int(rec.alice_outcome),
                   optional_int(rec.announced_variant), rec.sifted, rec.matched});
  }
  return table;
}

}  // namespace ebc::io
