#include "hexdg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace hexdg {

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_config_header(std::ostream& out, const ConfigEcho& cfg)
{
    for (const auto& [k, v] : cfg)
        out << "# " << k << '=' << v << '\n';
}

nlohmann::json config_json(const ConfigEcho& cfg)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : cfg)
        j[k] = v;
    return j;
}

void write_infsup_csv(std::ostream& out, const std::vector<InfSupResult>& rows, const ConfigEcho& cfg)
{
    write_config_header(out, cfg);
    out << "kind,patch,sigma,k,levels,M,N,value,sigma_kernel,seconds\n";
    for (const InfSupResult& r : rows) {
        out << to_string(r.kind) << ',' << to_string(r.patch) << ',' << format_double(r.sigma) << ',' << r.k << ','
            << r.levels << ',' << r.M << ',' << r.N << ',' << format_double(r.value) << ','
            << format_double(r.sigma_kernel) << ',' << format_double(r.seconds) << '\n';
    }
}

nlohmann::json infsup_summary(const InfSupStudy& study, const std::vector<ExponentFit>& fits, const ConfigEcho& cfg)
{
    nlohmann::json j;
    j["config"] = config_json(cfg);
    nlohmann::json rows = nlohmann::json::array();
    for (const InfSupResult& r : study.rows) {
        rows.push_back({{"kind", to_string(r.kind)},
                        {"patch", to_string(r.patch)},
                        {"k", r.k},
                        {"levels", r.levels},
                        {"M", r.M},
                        {"N", r.N},
                        {"value", r.value},
                        {"sigma_kernel", r.sigma_kernel},
                        {"sigma_max", r.sigma_max},
                        {"kernel_ratio", r.sigma_kernel / r.sigma_max}});
    }
    j["rows"] = rows;
    nlohmann::json skipped = nlohmann::json::array();
    for (const SkippedCell& s : study.skipped)
        skipped.push_back({{"kind", to_string(s.kind)},
                           {"patch", to_string(s.patch)},
                           {"k", s.k},
                           {"levels", s.levels},
                           {"reason", s.reason}});
    j["skipped"] = skipped;
    nlohmann::json jf = nlohmann::json::array();
    for (const ExponentFit& f : fits) {
        jf.push_back({{"kind", to_string(f.kind)},
                      {"patch", to_string(f.patch)},
                      {"k", f.k},
                      {"levels", f.levels},
                      {"values", f.values},
                      {"slope", f.slope},
                      {"intercept", f.intercept},
                      {"r2", f.r2}});
    }
    j["exponent_fits"] = jf;
    return j;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows, const ConfigEcho& cfg)
{
    write_config_header(out, cfg);
    out << "case,nu,patch,k,levels,N,dg_error,vel_error,pre_error,gmres_iters,seconds\n";
    for (const ConvergenceRow& r : rows) {
        out << r.case_name << ',' << format_double(r.nu) << ',' << r.patch << ',' << r.k << ',' << r.levels << ','
            << r.N << ',' << format_double(r.dg_error) << ',' << format_double(r.vel_error) << ','
            << format_double(r.pre_error) << ',' << r.gmres_iters << ',' << format_double(r.seconds) << '\n';
    }
}

nlohmann::json convergence_summary(const ConvergenceStudy& study, const ConfigEcho& cfg)
{
    nlohmann::json j;
    j["config"] = config_json(cfg);
    j["root"] = study.root;
    nlohmann::json rows = nlohmann::json::array();
    for (const ConvergenceRow& r : study.rows) {
        rows.push_back({{"case", r.case_name},
                        {"nu", r.nu},
                        {"k", r.k},
                        {"levels", r.levels},
                        {"N", r.N},
                        {"dg_error", r.dg_error},
                        {"dg_error_fine_quadrature", r.dg_error_fine_quadrature},
                        {"converged", r.converged},
                        {"residual", r.residual},
                        {"multiplier", r.multiplier},
                        {"pressure_mean", r.pressure_mean}});
    }
    j["rows"] = rows;
    nlohmann::json fits = nlohmann::json::array();
    for (const RateFit& f : study.fits)
        fits.push_back({{"nu", f.nu},
                        {"root", f.root},
                        {"slope", f.slope},
                        {"b", -f.slope},
                        {"intercept", f.intercept},
                        {"r2", f.r2},
                        {"points", f.points}});
    j["rate_fits"] = fits;
    return j;
}

std::string convergence_svg(const ConvergenceStudy& study, const std::string& title)
{
    const double W = 640, H = 440, left = 70, right = 150, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    std::map<double, std::vector<std::pair<double, double>>> curves;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const ConvergenceRow& r : study.rows) {
        if (!(r.dg_error > 0.0))
            continue;
        const double x = std::pow(static_cast<double>(r.N), 1.0 / study.root);
        const double y = std::log10(r.dg_error);
        curves[r.nu].emplace_back(x, y);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    if (curves.empty()) {
        s << "</svg>\n";
        return s.str();
    }
    if (xmax == xmin) {
        xmin -= 1;
        xmax += 1;
    }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin)
        ymax += 1;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
        s << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
          << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    for (int t = 0; t <= 5; ++t) {
        const double x = xmin + (xmax - xmin) * t / 5.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        s << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << buf << "</text>\n";
    }
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">N^(1/" << study.root
      << ")</text>\n";
    s << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">DG error</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int ci = 0;
    for (const auto& [nu, pts] : curves) {
        const char* col = colors[ci % 6];
        s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts)
            s << px(x) << ',' << py(y) << ' ';
        s << "\"/>\n";
        for (const auto& [x, y] : pts)
            s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        const double ly = top + 16 + 18 * ci;
        s << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 32 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        std::string label = "nu=" + format_double(nu);
        for (const RateFit& f : study.fits)
            if (f.nu == nu) {
                char buf[48];
                std::snprintf(buf, sizeof buf, " b=%.3g", -f.slope);
                label += buf;
            }
        s << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\">" << label << "</text>\n";
        ++ci;
    }
    s << "</svg>\n";
    return s.str();
}

std::string strip_csv_column(const std::string& csv, const std::string& column)
{
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    int drop = -1;
    auto split = [](const std::string& l) {
        std::vector<std::string> f;
        std::string cur;
        for (char c : l) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        f.push_back(cur);
        return f;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            out << line << '\n';
            continue;
        }
        auto f = split(line);
        if (drop < 0) {
            auto it = std::find(f.begin(), f.end(), column);
            drop = it == f.end() ? static_cast<int>(f.size()) : static_cast<int>(it - f.begin());
        }
        std::string joined;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (static_cast<int>(i) == drop)
                continue;
            joined += (joined.empty() ? "" : ",") + f[i];
        }
        out << joined << '\n';
    }
    return out.str();
}

} // namespace hexdg
