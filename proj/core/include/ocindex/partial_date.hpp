#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ocindex {

enum class DatePrecision { year, year_month, day };

/// ISO-8601 reduced-precision date: "YYYY", "YYYY-MM", or "YYYY-MM-DD".
struct PartialDate {
    int year = 0;
    std::optional<int> month;  // 1..12
    std::optional<int> day;    // 1..31, requires month

    DatePrecision precision() const;
    std::string to_string() const;

    static std::optional<PartialDate> parse(std::string_view text);

    bool operator==(const PartialDate&) const = default;
};

/// Calendar interval between two dates at their common precision,
/// serialized as an XSD duration ("P6Y", "P6Y3M", "P6Y0M1D", "-P0Y9M").
struct Timespan {
    bool negative = false;
    int years = 0;
    int months = 0;
    int days = 0;
    DatePrecision precision = DatePrecision::year;

    std::string to_xsd() const;
    static std::optional<Timespan> parse_xsd(std::string_view text);

    bool operator==(const Timespan&) const = default;
};

/// citing minus cited, truncated to the coarser of the two precisions.
Timespan compute_timespan(const PartialDate& citing, const PartialDate& cited);

/// XSD-style duration addition: months first (day clamped to the target
/// month's length), then days. Full-precision dates only.
PartialDate add_timespan(const PartialDate& date, const Timespan& span);

int days_in_month(int year, int month);

}  // namespace ocindex
