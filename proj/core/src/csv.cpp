#include "marrm/csv.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace marrm::cli {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<long> iso_day_number(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    const std::string ys = iso.substr(0, 4), ms = iso.substr(5, 2), ds = iso.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year(std::stoi(ys)),
                                          std::chrono::month(static_cast<unsigned>(std::stoi(ms))),
                                          std::chrono::day(static_cast<unsigned>(std::stoi(ds)))};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days(ymd).time_since_epoch().count();
}

std::string iso_from_day_number(long days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days(std::chrono::days(days))};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<PricePoint> parse_price_csv(std::istream& in, const std::string& source_name) {
    std::vector<PricePoint> out;
    std::vector<std::string> errors;
    auto fail = [&](long line, const std::string& msg) {
        errors.push_back(source_name + ":" + std::to_string(line) + ": " + msg);
    };

    std::string line;
    long line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "date,price") fail(line_no, "expected header `date,price`");
            saw_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            fail(line_no, "expected `date,price`");
            continue;
        }
        const std::string date = line.substr(0, comma);
        const std::string price_str = line.substr(comma + 1);
        if (!iso_day_number(date)) {
            fail(line_no, "invalid ISO date `" + date + "`");
            continue;
        }
        char* end = nullptr;
        const double price = std::strtod(price_str.c_str(), &end);
        if (price_str.empty() || end != price_str.c_str() + price_str.size()) {
            fail(line_no, "invalid price `" + price_str + "`");
            continue;
        }
        if (!(price > 0.0)) {
            fail(line_no, "price must be > 0, got `" + price_str + "`");
            continue;
        }
        if (!out.empty()) {
            if (out.back().date == date) {
                fail(line_no, "duplicate date `" + date + "`");
                continue;
            }
            if (date < out.back().date) {
                fail(line_no, "dates out of order: `" + date + "` after `" + out.back().date + "`");
                continue;
            }
        }
        out.push_back({date, price});
    }
    if (!saw_header) fail(line_no == 0 ? 1 : line_no, "missing header `date,price`");

    if (!errors.empty()) {
        std::string msg = "price CSV errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw CsvError(msg);
    }
    return out;
}

std::vector<PricePoint> ingest_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open price CSV `" + path + "`");
    return parse_price_csv(in, path);
}

std::string render_price_csv(const std::vector<PricePoint>& prices,
                             const std::vector<std::string>& comment_lines) {
    std::ostringstream os;
    for (const auto& c : comment_lines) os << "# " << c << "\n";
    os << "date,price\n";
    for (const auto& p : prices) os << p.date << "," << format_real(p.price) << "\n";
    return os.str();
}

} // namespace marrm::cli
