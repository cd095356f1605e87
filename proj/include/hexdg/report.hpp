#pragma once

// CSV, JSON and SVG output for studies. Numbers are printed with 17
// significant digits; every report starts with the effective configuration.

#include "hexdg/infsup.hpp"
#include "hexdg/study.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hexdg {

/// Ordered key/value pairs of the effective configuration.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double x);

/// "# key=value" lines.
void write_config_header(std::ostream& out, const ConfigEcho& cfg);
nlohmann::json config_json(const ConfigEcho& cfg);

/// kind,patch,sigma,k,levels,M,N,value,sigma_kernel,seconds
void write_infsup_csv(std::ostream& out, const std::vector<InfSupResult>& rows, const ConfigEcho& cfg);
nlohmann::json infsup_summary(const InfSupStudy& study, const std::vector<ExponentFit>& fits, const ConfigEcho& cfg);

/// case,nu,patch,k,levels,N,dg_error,vel_error,pre_error,gmres_iters,seconds
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows, const ConfigEcho& cfg);
nlohmann::json convergence_summary(const ConvergenceStudy& study, const ConfigEcho& cfg);

/// Semilog-y plot of dg_error against N^(1/root), one curve per nu.
std::string convergence_svg(const ConvergenceStudy& study, const std::string& title);

/// Drops the named column from CSV text (header comment lines are kept).
std::string strip_csv_column(const std::string& csv, const std::string& column);

} // namespace hexdg
