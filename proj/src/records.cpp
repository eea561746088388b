#include "nlslab/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "nlslab/config.hpp"
#include "nlslab/error.hpp"

namespace nlslab {

namespace {

constexpr const char* kHead[] = {"t", "mass", "energy", "h1_norm"};
constexpr const char* kMid[] = {"J",        "morawetz_lhs",      "morawetz_rhs",    "positivity_S",
                                "cube_sup", "cube_sup_integral", "mixed_norm_theta"};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf") return INFINITY;
    if (cell == "-inf") return -INFINITY;
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw InvalidInput("records row " + std::to_string(row) + ", column " + column + ": bad value '" + cell + "'");
    return v;
}

}  // namespace

std::vector<std::string> RecordSchema::columns() const {
    std::vector<std::string> cols(std::begin(kHead), std::end(kHead));
    for (double q : q_list) cols.push_back("lq_" + format_double(q));
    cols.insert(cols.end(), std::begin(kMid), std::end(kMid));
    for (const auto& name : accumulator_names) cols.push_back("acc_" + name);
    cols.emplace_back("boundary_guard_flag");
    return cols;
}

RecordWriter::RecordWriter(std::ostream& out, RecordSchema schema) : out_(out), schema_(std::move(schema)) {
    const auto cols = schema_.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
}

void RecordWriter::write(const DiagnosticsRecord& r) {
    if (r.lq_norms.size() != schema_.q_list.size() || r.accumulators.size() != schema_.accumulator_names.size())
        throw InvalidInput("record does not match the announced schema");
    std::string line;
    const auto put = [&](double v) {
        line += format_double(v);
        line += ',';
    };
    for (double v : {r.t, r.mass, r.energy, r.h1_norm}) put(v);
    for (double v : r.lq_norms) put(v);
    for (double v : {r.J, r.morawetz_lhs, r.morawetz_rhs, r.positivity_S, r.cube_sup, r.cube_sup_integral,
                     r.mixed_norm_theta})
        put(v);
    for (double v : r.accumulators) put(v);
    line += r.boundary_guard_flag ? "1\n" : "0\n";
    out_ << line;
    ++rows_;
}

std::string emit_records(const RecordSchema& schema, const std::vector<DiagnosticsRecord>& records) {
    std::ostringstream out;
    RecordWriter writer(out, schema);
    for (const auto& r : records) writer.write(r);
    return out.str();
}

RecordTable parse_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("records: missing header row");
    const auto header = split(line);
    RecordTable table;

    std::size_t i = 0;
    const auto expect = [&](const char* name) {
        if (i >= header.size() || header[i] != name)
            throw InvalidInput(std::string("records header: expected column '") + name + "'");
        ++i;
    };
    for (const char* h : kHead) expect(h);
    while (i < header.size() && header[i].rfind("lq_", 0) == 0) {
        table.schema.q_list.push_back(parse_cell(header[i].substr(3), 0, header[i]));
        ++i;
    }
    for (const char* h : kMid) expect(h);
    while (i < header.size() && header[i].rfind("acc_", 0) == 0) {
        table.schema.accumulator_names.push_back(header[i].substr(4));
        ++i;
    }
    expect("boundary_guard_flag");
    if (i != header.size()) throw InvalidInput("records header: unexpected column '" + header[i] + "'");

    const std::size_t nq = table.schema.q_list.size();
    const std::size_t na = table.schema.accumulator_names.size();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InvalidInput("records row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                               " cells, found " + std::to_string(cells.size()));
        std::size_t c = 0;
        const auto next = [&] {
            const double v = parse_cell(cells[c], row, header[c]);
            ++c;
            return v;
        };
        DiagnosticsRecord r;
        r.t = next();
        r.mass = next();
        r.energy = next();
        r.h1_norm = next();
        for (std::size_t k = 0; k < nq; ++k) r.lq_norms.push_back(next());
        r.J = next();
        r.morawetz_lhs = next();
        r.morawetz_rhs = next();
        r.positivity_S = next();
        r.cube_sup = next();
        r.cube_sup_integral = next();
        r.mixed_norm_theta = next();
        for (std::size_t k = 0; k < na; ++k) r.accumulators.push_back(next());
        if (cells[c] != "0" && cells[c] != "1")
            throw InvalidInput("records row " + std::to_string(row) + ": boundary_guard_flag must be 0 or 1");
        r.boundary_guard_flag = cells[c] == "1";
        table.records.push_back(std::move(r));
    }
    return table;
}

RecordFile::RecordFile(std::filesystem::path path, RecordSchema schema)
    : path_(std::move(path)),
      partial_(path_.string() + ".partial"),
      stream_(partial_, std::ios::binary | std::ios::trunc),
      writer_(stream_, std::move(schema)) {
    if (!stream_) throw IoError("cannot open " + partial_.string() + " for writing");
}

RecordFile::~RecordFile() = default;

void RecordFile::write(const DiagnosticsRecord& record) {
    writer_.write(record);
    if (!stream_) throw IoError("write failed after " + std::to_string(writer_.rows() - 1) + " rows; partial output left in " + partial_.string());
}

void RecordFile::commit() {
    if (committed_) return;
    stream_.flush();
    if (!stream_) throw IoError("flush failed; partial output left in " + partial_.string());
    stream_.close();
    std::error_code ec;
    std::filesystem::rename(partial_, path_, ec);
    if (ec) throw IoError("cannot rename " + partial_.string() + " to " + path_.string() + ": " + ec.message());
    committed_ = true;
}

VerifyReport verify_records(const RecordTable& table, double tol, double s_tol) {
    VerifyReport report;
    report.rows = table.records.size();
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        const auto& r = table.records[i];
        report.boundary_guard_fired = report.boundary_guard_fired || r.boundary_guard_flag;
        if (std::isnan(r.morawetz_lhs) || std::isnan(r.morawetz_rhs)) continue;
        ++report.checked;
        VerifyRow v;
        v.row = i + 1;
        v.t = r.t;
        const double scale = std::max({std::abs(r.morawetz_lhs), std::abs(r.morawetz_rhs), r.mass * r.mass});
        v.morawetz_margin = scale > 0 ? (r.morawetz_lhs - r.morawetz_rhs) / scale : 0.0;
        v.morawetz_ok = r.morawetz_lhs - r.morawetz_rhs >= -tol * scale;
        if (!std::isnan(r.positivity_S)) {
            const double s_scale = std::pow(r.mass + r.h1_norm, 4.0);
            v.positivity_margin = s_scale > 0 ? r.positivity_S / s_scale : 0.0;
            v.positivity_ok = r.positivity_S >= -s_tol * s_scale;
        }
        if (!v.morawetz_ok || !v.positivity_ok) report.failures.push_back(v);
    }
    return report;
}

}  // namespace nlslab
