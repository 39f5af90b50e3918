#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace srled {

/// One CSV row. `x` is the pump P (dimensionless) or the offset w (rad/s);
/// `value` is p_out (photons/s), R (dimensionless) or p_out(w) (photons/s per
/// rad/s) depending on the table.
struct Row {
    double x = 0.0;
    double value = 0.0;
    double N_e = 0.0;
    double n = 0.0;
    double delta2_Ne = 0.0;
    double stability_margin = 0.0;  // relative, see Diagnostics
    double narrowness_ratio = 0.0;
    double residual = 0.0;
    std::string status = "ok";

    friend bool operator==(const Row&, const Row&) = default;
};

struct Table {
    std::string name;     // file stem
    std::string x_label;  // "P" or "omega_rad_per_s"
    std::string value_label;
    std::vector<Row> rows;
};

inline constexpr std::string_view kCsvHeader =
    "P_or_omega,value,N_e,n,delta2_Ne,stability_margin,narrowness_ratio,residual,status";

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

std::string write_csv(const Table& table);

/// Rows of a CSV produced by write_csv. Throws ValidationError on malformed
/// input.
std::vector<Row> parse_csv(std::string_view text);

}  // namespace srled
