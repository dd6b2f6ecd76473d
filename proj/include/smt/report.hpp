#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smt/common.hpp"

namespace smt {

// One verification row. `param` describes the instance being checked using
// ';'-separated key=value pairs so the CSV stays comma-clean.
struct CheckRow {
    std::string check;
    std::string param;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    bool one_sided = false;  // bound rows pass iff residual >= -tol; not serialized
};

// re-evaluate pass after changing tol, respecting the row kind
void reapply_tolerance(CheckRow& row, double tol);

// equality check: residual = |lhs - rhs|, pass iff residual <= tol
CheckRow check_close(std::string check, std::string param, double lhs, double rhs, double tol);

// one-sided check: residual = lhs - rhs (the margin), pass iff lhs >= rhs - tol
CheckRow check_bound(std::string check, std::string param, double lhs, double rhs, double tol);

struct Report {
    std::vector<CheckRow> rows;
    std::vector<std::pair<std::string, std::string>> meta;  // unique keys

    void add(CheckRow row) { rows.push_back(std::move(row)); }
    void set_meta(const std::string& key, std::string value);
    bool all_pass() const;
    void append(const Report& other, const std::string& prefix);
};

// CSV: exactly the header check,param,lhs,rhs,residual,tol,pass then one row
// per check, 12 significant digits, pass as 1/0, LF line endings, no metadata
void write_report_csv(const Report& rep, std::ostream& out);

// JSON: {"meta":{...},"pass":...,"rows":[...]}, keys sorted within every
// object, numbers at 17 significant digits, LF endings
void write_report_json(const Report& rep, std::ostream& out);

// plot: <base>.csv (the report CSV) plus <base>.gp, a gnuplot script that
// renders |residual| against row index on a log axis next to the tolerances;
// the script refers to the CSV by file name so the pair relocates together
void write_report_plot(const Report& rep, const std::string& base_path);

std::uint64_t fnv1a64(std::string_view bytes);

std::string json_escape(std::string_view s);

// whole-file helpers used by the CLI; failures throw io_error
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace smt
