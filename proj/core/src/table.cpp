#include "uavg/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavg {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_to_string(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

void Table::add_note(std::string key, std::string value) { notes_.emplace_back(std::move(key), std::move(value)); }

int Table::column_index(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    return it == columns_.end() ? -1 : static_cast<int>(it - columns_.begin());
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out + '"';
}

std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no literal for non-finite numbers.
        if (!std::isfinite(*d)) return json_string(format_double(*d));
        return format_double(*d);
    }
    if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
    return cell_to_string(c);
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i]);
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_to_string(row[i]));
        os << '\n';
    }
    for (const auto& [k, v] : notes_) os << "# " << k << ',' << v << '\n';
}

void Table::write_json(std::ostream& os) const {
    os << "{\"columns\":[";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << json_string(columns_[i]);
    os << "],\"rows\":[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        os << (r ? "," : "") << '{';
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            os << (i ? "," : "") << json_string(columns_[i]) << ':' << json_cell(rows_[r][i]);
        }
        os << '}';
    }
    os << "],\"notes\":{";
    for (std::size_t i = 0; i < notes_.size(); ++i) {
        os << (i ? "," : "") << json_string(notes_[i].first) << ':' << json_string(notes_[i].second);
    }
    os << "}}\n";
}

std::string Table::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

std::string Table::to_json() const {
    std::ostringstream os;
    write_json(os);
    return os.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace {

bool numeric(const Cell& c, double& out) {
    if (const auto* d = std::get_if<double>(&c)) {
        out = *d;
        return std::isfinite(out);
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
        out = static_cast<double>(*i);
        return true;
    }
    if (const auto* b = std::get_if<bool>(&c)) {
        out = *b ? 1.0 : 0.0;
        return true;
    }
    return false;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string svg_line_chart(const Table& table, const ChartSpec& spec) {
    const int xi = table.column_index(spec.x);
    const int yi = table.column_index(spec.y);
    if (xi < 0 || yi < 0) throw std::invalid_argument("svg_line_chart: unknown column");
    const int si = spec.series.empty() ? -1 : table.column_index(spec.series);
    if (!spec.series.empty() && si < 0) throw std::invalid_argument("svg_line_chart: unknown series column");

    std::map<std::string, std::vector<std::pair<double, double>>> series;
    std::vector<std::string> order;
    for (const auto& row : table.rows()) {
        double x = 0, y = 0;
        if (!numeric(row[static_cast<std::size_t>(xi)], x) || !numeric(row[static_cast<std::size_t>(yi)], y)) continue;
        if ((spec.log_x && x <= 0) || (spec.log_y && y <= 0)) continue;
        if (spec.log_x) x = std::log10(x);
        if (spec.log_y) y = std::log10(y);
        const std::string key = si < 0 ? spec.y : spec.series + "=" + cell_to_string(row[static_cast<std::size_t>(si)]);
        if (!series.count(key)) order.push_back(key);
        series[key].emplace_back(x, y);
    }

    constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& [_, pts] : series) {
        for (const auto& [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (order.empty()) x0 = y0 = 0, x1 = y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto label = [](double v, bool log) { return format_double(log ? std::pow(10.0, v) : v).substr(0, 10); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << spec.title << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">" << label(xv, spec.log_x)
           << "</text>\n";
        os << "<text x=\"" << L - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << label(yv, spec.log_y)
           << "</text>\n";
    }
    os << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << spec.x
       << "</text>\n";
    os << "<text x=\"15\" y=\"" << T + (H - T - B) / 2 << "\" transform=\"rotate(-90 15 " << T + (H - T - B) / 2
       << ")\" text-anchor=\"middle\">" << spec.y << "</text>\n";
    for (std::size_t s = 0; s < order.size(); ++s) {
        const char* colour = kPalette[s % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[order[s]]) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n";
        const double ly = T + 12 + 16 * static_cast<double>(s);
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4
           << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 35 << "\" y=\"" << ly << "\">" << order[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace uavg
