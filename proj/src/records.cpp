#include "srled/records.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "srled/errors.hpp"

namespace srled {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw InternalError("to_chars failed");
    return std::string(buf.data(), ptr);
}

std::string write_csv(const Table& table) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : table.rows) {
        for (double v : {r.x, r.value, r.N_e, r.n, r.delta2_Ne, r.stability_margin,
                         r.narrowness_ratio, r.residual}) {
            out += format_double(v);
            out += ',';
        }
        for (char ch : r.status) out += (ch == ',' || ch == '\n') ? ';' : ch;
        out += '\n';
    }
    return out;
}

namespace {

double parse_field(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("csv", "line " + std::to_string(line) + ": bad number '" +
                                         std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<Row> parse_csv(std::string_view text) {
    std::vector<Row> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kCsvHeader) throw ValidationError("csv", "unexpected header");
            header_seen = true;
            continue;
        }
        std::array<std::string_view, 9> fields;
        std::size_t count = 0;
        while (count < 8) {
            const auto comma = line.find(',');
            if (comma == std::string_view::npos) break;
            fields[count++] = line.substr(0, comma);
            line = line.substr(comma + 1);
        }
        if (count != 8) {
            throw ValidationError("csv", "line " + std::to_string(line_no) + ": expected 9 columns");
        }
        fields[8] = line;
        Row r;
        r.x = parse_field(fields[0], line_no);
        r.value = parse_field(fields[1], line_no);
        r.N_e = parse_field(fields[2], line_no);
        r.n = parse_field(fields[3], line_no);
        r.delta2_Ne = parse_field(fields[4], line_no);
        r.stability_margin = parse_field(fields[5], line_no);
        r.narrowness_ratio = parse_field(fields[6], line_no);
        r.residual = parse_field(fields[7], line_no);
        r.status = std::string(fields[8]);
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ValidationError("csv", "missing header");
    return rows;
}

}  // namespace srled
