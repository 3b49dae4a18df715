#pragma once

#include "marrm/garch.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace marrm::cli {

// Reals serialized with 17 significant digits round-trip bit-exactly.
std::string format_real(double v);

// Days since 1970-01-01 for a valid ISO YYYY-MM-DD date, std::nullopt otherwise.
std::optional<long> iso_day_number(const std::string& iso);
// ISO date `days` after 1970-01-01.
std::string iso_from_day_number(long days);

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Price CSV: header `date,price`, ISO dates strictly increasing, positive
// decimal prices. Every malformed row is reported with its line number.
std::vector<PricePoint> parse_price_csv(std::istream& in, const std::string& source_name);
std::vector<PricePoint> ingest_prices(const std::string& path);

std::string render_price_csv(const std::vector<PricePoint>& prices,
                             const std::vector<std::string>& comment_lines);

} // namespace marrm::cli
