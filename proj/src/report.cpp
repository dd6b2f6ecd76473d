#include "smt/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace smt {

CheckRow check_close(std::string check, std::string param, double lhs, double rhs, double tol) {
    CheckRow row;
    row.check = std::move(check);
    row.param = std::move(param);
    row.lhs = lhs;
    row.rhs = rhs;
    row.residual = std::abs(lhs - rhs);
    row.tol = tol;
    row.pass = std::isfinite(lhs) && std::isfinite(rhs) && row.residual <= tol;
    return row;
}

CheckRow check_bound(std::string check, std::string param, double lhs, double rhs, double tol) {
    CheckRow row;
    row.check = std::move(check);
    row.param = std::move(param);
    row.lhs = lhs;
    row.rhs = rhs;
    row.residual = lhs - rhs;
    row.tol = tol;
    row.pass = std::isfinite(lhs) && std::isfinite(rhs) && row.residual >= -tol;
    row.one_sided = true;
    return row;
}

void reapply_tolerance(CheckRow& row, double tol) {
    row.tol = tol;
    bool finite = std::isfinite(row.lhs) && std::isfinite(row.rhs);
    row.pass = finite && (row.one_sided ? row.residual >= -tol : row.residual <= tol);
}

void Report::set_meta(const std::string& key, std::string value) {
    for (auto& kv : meta)
        if (kv.first == key) {
            kv.second = std::move(value);
            return;
        }
    meta.emplace_back(key, std::move(value));
}

bool Report::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

void Report::append(const Report& other, const std::string& prefix) {
    for (CheckRow row : other.rows) {
        row.check = prefix + row.check;
        rows.push_back(std::move(row));
    }
}

void write_report_csv(const Report& rep, std::ostream& out) {
    out << "check,param,lhs,rhs,residual,tol,pass\n";
    for (const auto& r : rep.rows)
        out << r.check << ',' << r.param << ','
            << strf("%.12g,%.12g,%.12g,%.12g,", r.lhs, r.rhs, r.residual, r.tol)
            << (r.pass ? 1 : 0) << '\n';
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20)
                    out += strf("\\u%04x", ch);
                else
                    out += ch;
        }
    }
    return out;
}

namespace {

std::string num17(double v) {
    if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
    return strf("%.17g", v);
}

}  // namespace

void write_report_json(const Report& rep, std::ostream& out) {
    // keys inside each object emitted in sorted order by hand
    out << "{\"meta\":{";
    std::map<std::string, std::string> meta_sorted(rep.meta.begin(), rep.meta.end());
    bool first = true;
    for (const auto& kv : meta_sorted) {
        out << (first ? "" : ",") << '"' << json_escape(kv.first) << "\":\""
            << json_escape(kv.second) << '"';
        first = false;
    }
    out << "},\"pass\":" << (rep.all_pass() ? "true" : "false") << ",\"rows\":[";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        out << (i ? "," : "") << "{\"check\":\"" << json_escape(r.check) << "\",\"lhs\":"
            << num17(r.lhs) << ",\"param\":\"" << json_escape(r.param)
            << "\",\"pass\":" << (r.pass ? "true" : "false") << ",\"residual\":"
            << num17(r.residual) << ",\"rhs\":" << num17(r.rhs) << ",\"tol\":" << num17(r.tol)
            << "}";
    }
    out << "]}\n";
}

void write_report_plot(const Report& rep, const std::string& base_path) {
    std::ostringstream csv;
    write_report_csv(rep, csv);
    write_text_file(base_path + ".csv", csv.str());

    std::string csv_name = base_path + ".csv";
    std::string png_name = base_path + ".png";
    std::size_t slash = base_path.find_last_of('/');
    if (slash != std::string::npos) {
        csv_name = base_path.substr(slash + 1) + ".csv";
        png_name = base_path.substr(slash + 1) + ".png";
    }
    std::ostringstream gp;
    gp << "set terminal pngcairo size 1000,600\n"
       << "set output '" << png_name << "'\n"
       << "set datafile separator ','\n"
       << "set logscale y\n"
       << "set xlabel 'row'\n"
       << "set ylabel 'abs residual vs tol'\n"
       << "set key left top\n"
       << "plot '" << csv_name
       << "' every ::1 using 0:(abs(column(5)) > 0 ? abs(column(5)) : 1e-18) with points pt 7 "
          "title 'residual', \\\n     '"
       << csv_name << "' every ::1 using 0:6 with lines lw 2 title 'tol'\n";
    write_text_file(base_path + ".gp", gp.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(strf("cannot open %s for reading", path.c_str()));
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error(strf("read failed on %s", path.c_str()));
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error(strf("cannot open %s for writing", path.c_str()));
    out << content;
    out.flush();
    if (!out) throw io_error(strf("write failed on %s", path.c_str()));
}

}  // namespace smt
