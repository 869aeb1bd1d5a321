#include "formcount/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace formcount {

void RunConfig::add(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
}

std::vector<std::string> RunConfig::metadata_lines() const {
    std::vector<std::string> lines;
    lines.push_back(std::string("# ") + kProgramName + " " + kProgramVersion);
    lines.push_back("# command=" + command);
    for (const auto& [k, v] : params) lines.push_back("# " + k + "=" + v);
    lines.push_back("# seed=" + std::to_string(seed));
    lines.push_back("# workers=" + std::to_string(workers));
    return lines;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::int64_t> parse_i64_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument("bad integer list entry: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

std::vector<std::int64_t> parse_x_grid(const std::string& s) {
    const auto p1 = s.find(':');
    const auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::invalid_argument("X grid must be a:b:step");
    const std::int64_t a = std::stoll(s.substr(0, p1));
    const std::int64_t b = std::stoll(s.substr(p1 + 1, p2 - p1 - 1));
    const std::int64_t step = std::stoll(s.substr(p2 + 1));
    if (step <= 0 || b < a) throw std::invalid_argument("X grid must satisfy a <= b, step > 0");
    std::vector<std::int64_t> out;
    for (std::int64_t x = a; x <= b; x += step) out.push_back(x);
    return out;
}

namespace {

std::string int_str(const Int& v) { return v.get_str(); }

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

std::string i64_list_str(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// Exact dyadic num/den of a double; used only when a surface measure is
// irrational and must still fill the num/den columns.
std::pair<Int, Int> dyadic(double v) {
    if (v == 0) return {0, 1};
    int exp = 0;
    const double mant = std::frexp(v, &exp);
    const auto num64 = static_cast<std::int64_t>(std::ldexp(mant, 53));
    Int num(static_cast<long>(num64));
    Int den = 1;
    const int shift = 53 - exp;
    if (shift >= 0)
        den <<= static_cast<unsigned>(shift);
    else
        num <<= static_cast<unsigned>(-shift);
    Rat q = make_rat(num, den);
    return {q.get_num(), q.get_den()};
}

std::pair<Int, Int> surf_fraction(const RadicalSum& surf, bool& exact) {
    exact = surf.exactly_rational();
    if (exact) {
        const Rat v = surf.rational_value();
        return {v.get_num(), v.get_den()};
    }
    return dyadic(surf.value());
}

}  // namespace

void write_audit_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<CountReport>& rows) {
    for (const auto& line : config.metadata_lines()) os << line << '\n';
    os << "w,c,x,exact_count,vol_num,vol_den,surf_num,surf_den,norm_sq,ratio,check\n";
    for (const auto& r : rows) {
        bool surf_exact = false;
        const auto [sn, sd] = surf_fraction(r.surf, surf_exact);
        std::vector<std::string> fields{
            csv_field(i64_list_str(r.w)),
            std::to_string(r.c),
            std::to_string(r.x),
            int_str(r.exact_count),
            int_str(r.vol.get_num()),
            int_str(r.vol.get_den()),
            int_str(sn),
            int_str(sd),
            int_str(r.norm_sq),
            fmt_double(r.ratio),
            r.naive_checked ? "OK" : "UNCHECKED",
        };
        os << join(fields) << '\n';
    }
}

void write_census_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<CensusReport>& rows) {
    for (const auto& line : config.metadata_lines()) os << line << '\n';
    os << "n,m,x,r_max,incidence,distinct,tail_estimate,total,prop_lower,prop_upper\n";
    for (const auto& r : rows) {
        std::vector<std::string> fields{
            std::to_string(r.n),
            std::to_string(r.m),
            std::to_string(r.x),
            std::to_string(r.r_max),
            int_str(r.incidence),
            int_str(r.distinct),
            fmt_double(r.tail_estimate),
            int_str(r.total),
            fmt_double(r.prop_lower),
            fmt_double(r.prop_upper),
        };
        os << join(fields) << '\n';
    }
}

nlohmann::json geometry_report_json(const GeometryReport& report) {
    bool surf_exact = false;
    const auto [sn, sd] = surf_fraction(report.surf, surf_exact);
    return nlohmann::json{
        {"norm_sq", int_str(report.norm_sq)},
        {"vol_num", int_str(report.vol.get_num())},
        {"vol_den", int_str(report.vol.get_den())},
        {"surf_num", int_str(sn)},
        {"surf_den", int_str(sd)},
        {"surf_exact", surf_exact},
    };
}

nlohmann::json fit_report_json(const FitReport& fit, const RunConfig& config) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : fit.points)
        points.push_back({
            {"x", p.x},
            {"incidence", int_str(p.incidence)},
            {"distinct", int_str(p.distinct)},
            {"total", int_str(p.total)},
            {"tail_estimate_heuristic", p.tail_estimate},
            {"prop_lower", p.prop_lower},
            {"prop_upper", p.prop_upper},
        });
    nlohmann::json meta;
    meta["program"] = std::string(kProgramName) + " " + kProgramVersion;
    meta["command"] = config.command;
    for (const auto& [k, v] : config.params) meta[k] = v;
    meta["seed"] = config.seed;
    meta["workers"] = config.workers;
    return nlohmann::json{
        {"model", "c/X"},
        {"c", fit.c_fit},
        {"residual", fit.residual},
        {"alt_model", "c*logX/X"},
        {"alt_c", fit.alt_c_fit},
        {"alt_residual", fit.alt_residual},
        {"c_emp", fit.c_emp},
        {"monotone_decay", fit.monotone_decay},
        {"points", points},
        {"config", meta},
    };
}

std::string census_plot_script(const std::string& csv_path) {
    std::string s;
    s += "# gnuplot script for a census CSV\n";
    s += "set datafile separator ','\n";
    s += "set datafile commentschars '#'\n";
    s += "set logscale y\n";
    s += "set xlabel 'X'\n";
    s += "set ylabel 'proportion of forms representing m'\n";
    s += "plot '" + csv_path + "' using 3:9 with linespoints title 'lower bound', \\\n";
    s += "     '" + csv_path + "' using 3:10 with linespoints title 'upper bracket', \\\n";
    s += "     1.0/(2*x+1) with lines dashtype 2 title 'trivial family'\n";
    return s;
}

}  // namespace formcount
