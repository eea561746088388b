#pragma once

// DiagnosticsRecord rows and their CSV form. Column order:
//   t, mass, energy, h1_norm, lq_<q>..., J, morawetz_lhs, morawetz_rhs,
//   positivity_S, cube_sup, cube_sup_integral, mixed_norm_theta,
//   acc_<channel>..., boundary_guard_flag
// Values not computed for a run are written as "nan".

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace nlslab {

inline constexpr double not_computed = std::numeric_limits<double>::quiet_NaN();

struct RecordSchema {
    std::vector<double> q_list;
    std::vector<std::string> accumulator_names;

    std::vector<std::string> columns() const;
    bool operator==(const RecordSchema&) const = default;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double h1_norm = 0.0;
    std::vector<double> lq_norms;
    double J = not_computed;
    double morawetz_lhs = not_computed;
    double morawetz_rhs = not_computed;
    double positivity_S = not_computed;
    double cube_sup = not_computed;
    double cube_sup_integral = not_computed;
    double mixed_norm_theta = not_computed;
    std::vector<double> accumulators;
    bool boundary_guard_flag = false;
};

/// Streams rows after a header written at construction.
class RecordWriter {
public:
    RecordWriter(std::ostream& out, RecordSchema schema);

    void write(const DiagnosticsRecord& record);
    std::size_t rows() const { return rows_; }
    const RecordSchema& schema() const { return schema_; }

private:
    std::ostream& out_;
    RecordSchema schema_;
    std::size_t rows_ = 0;
};

std::string emit_records(const RecordSchema& schema, const std::vector<DiagnosticsRecord>& records);

struct RecordTable {
    RecordSchema schema;
    std::vector<DiagnosticsRecord> records;
};

/// Inverse of emit_records; throws InvalidInput on malformed rows.
RecordTable parse_records(std::istream& in);

/// Writes to "<path>.partial" and renames to <path> on commit(). A failed
/// write throws IoError and leaves the ".partial" file behind as the marker.
class RecordFile {
public:
    RecordFile(std::filesystem::path path, RecordSchema schema);
    ~RecordFile();

    void write(const DiagnosticsRecord& record);
    void commit();
    std::size_t rows() const { return writer_.rows(); }
    const std::filesystem::path& partial_path() const { return partial_; }

private:
    std::filesystem::path path_;
    std::filesystem::path partial_;
    std::ofstream stream_;
    RecordWriter writer_;
    bool committed_ = false;
};

struct VerifyRow {
    std::size_t row = 0;
    double t = 0.0;
    double morawetz_margin = 0.0;   // (lhs - rhs) / max(|lhs|, |rhs|, mass^2)
    double positivity_margin = 0.0; // S / (mass + h1_norm)^4
    bool morawetz_ok = true;
    bool positivity_ok = true;
};

struct VerifyReport {
    std::size_t rows = 0;
    std::size_t checked = 0;  // rows with computed Morawetz columns
    std::vector<VerifyRow> failures;
    bool boundary_guard_fired = false;
    bool ok() const { return failures.empty(); }
};

/// Re-checks lhs - rhs >= -tol * max(|lhs|, |rhs|, mass^2) and
/// S >= -s_tol * (mass + h1_norm)^4 on every row.
VerifyReport verify_records(const RecordTable& table, double tol = 1e-8, double s_tol = 1e-10);

}  // namespace nlslab
