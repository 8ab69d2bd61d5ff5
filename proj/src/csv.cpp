#include "bhlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bhlab/errors.hpp"

namespace bhlab {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InvalidInput("csv: missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "csv: row " << row + 1 << ", column '" << header.at(col) << "': '" << cell << "' is not a number";
    throw InvalidInput(os.str());
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("csv: cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(is, line) || line.empty()) throw InvalidInput("csv: " + path.string() + " has no header");
  t.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) {
      std::ostringstream os;
      os << "csv: " << path.filename().string() << " row " << t.rows.size() + 1 << " (line " << lineno << ") has "
         << cells.size() << " columns, expected " << t.header.size();
      throw InvalidInput(os.str());
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("csv: cannot write " + path.string());
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
}

CsvTable sweep_table(const SweepResult& result) {
  CsvTable t{kSweepHeader, {}};
  for (const auto& r : result.rows) {
    t.rows.push_back({format_number(r.k), format_number(r.b), format_number(r.delta), std::to_string(r.trial),
                      format_number(r.err_l2), format_number(r.err_h_minus_s), format_number(r.imag_residue),
                      format_number(r.wall_time)});
  }
  return t;
}

CsvTable linearization_table(const LinearizationResult& result) {
  CsvTable t{kLinearizationHeader, {}};
  for (const auto& r : result.rows)
    t.rows.push_back({format_number(r.amplitude), format_number(r.residual_ratio), format_number(result.fit_slope)});
  return t;
}

CsvTable bound_table(std::span<const double> ks, std::span<const double> values) {
  CsvTable t{kBoundHeader, {}};
  for (std::size_t i = 0; i < ks.size(); ++i) t.rows.push_back({format_number(ks[i]), format_number(values[i])});
  return t;
}

CsvTable samples_table(std::span<const FourierSample> samples) {
  CsvTable t{kSamplesHeader, {}};
  for (const auto& s : samples) {
    t.rows.push_back({format_number(s.xi[0]), format_number(s.xi[1]), format_number(s.xi[2]), format_number(s.r),
                      format_number(s.a_used), to_string(s.band), format_number(s.value.real()),
                      format_number(s.value.imag()), s.oracle ? format_number(s.oracle->real()) : "",
                      s.oracle ? format_number(s.oracle->imag()) : ""});
  }
  return t;
}

std::vector<SweepRow> sweep_rows_from(const CsvTable& table) {
  std::vector<std::size_t> col;
  for (const auto& name : kSweepHeader) col.push_back(table.column(name));
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    SweepRow r;
    r.k = table.number(i, col[0]);
    r.b = table.number(i, col[1]);
    r.delta = table.number(i, col[2]);
    r.trial = int(table.number(i, col[3]));
    r.err_l2 = table.number(i, col[4]);
    r.err_h_minus_s = table.number(i, col[5]);
    r.imag_residue = table.number(i, col[6]);
    r.wall_time = table.number(i, col[7]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace bhlab
