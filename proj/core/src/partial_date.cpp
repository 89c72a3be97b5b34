#include "ocindex/partial_date.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace ocindex {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

long serial_day(int year, int month, int day) {
    using namespace std::chrono;
    return sys_days(std::chrono::year(year) / month / day).time_since_epoch().count();
}

struct Ymd {
    int year, month, day;
};

Ymd add_months(Ymd d, int months) {
    int total = d.year * 12 + (d.month - 1) + months;
    int year = total / 12;
    int month = total % 12;
    if (month < 0) {
        month += 12;
        --year;
    }
    ++month;
    return {year, month, std::min(d.day, days_in_month(year, month))};
}

bool ymd_leq(const Ymd& a, const Ymd& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.month != b.month) return a.month < b.month;
    return a.day <= b.day;
}

}  // namespace

int days_in_month(int year, int month) {
    using namespace std::chrono;
    return static_cast<int>(unsigned(
        year_month_day_last(std::chrono::year(year) / month / last).day()));
}

DatePrecision PartialDate::precision() const {
    if (day) return DatePrecision::day;
    if (month) return DatePrecision::year_month;
    return DatePrecision::year;
}

std::string PartialDate::to_string() const {
    char buf[16];
    if (day)
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, *month, *day);
    else if (month)
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, *month);
    else
        std::snprintf(buf, sizeof buf, "%04d", year);
    return buf;
}

std::optional<PartialDate> PartialDate::parse(std::string_view text) {
    PartialDate d;
    auto take = [&](std::string_view part, int lo, int hi, int& out) {
        return parse_int(part, out) && out >= lo && out <= hi;
    };
    auto year_ok = [&](std::string_view part) {  // exactly four digits
        return part.size() == 4 && take(part, 0, 9999, d.year);
    };
    auto dash1 = text.find('-', 1);  // offset 1 tolerates a leading sign
    if (dash1 == std::string_view::npos) {
        if (!year_ok(text)) return std::nullopt;
        return d;
    }
    if (!year_ok(text.substr(0, dash1))) return std::nullopt;
    auto rest = text.substr(dash1 + 1);
    auto dash2 = rest.find('-');
    int month = 0;
    if (dash2 == std::string_view::npos) {
        if (!take(rest, 1, 12, month)) return std::nullopt;
        d.month = month;
        return d;
    }
    if (!take(rest.substr(0, dash2), 1, 12, month)) return std::nullopt;
    d.month = month;
    int day = 0;
    if (!take(rest.substr(dash2 + 1), 1, 31, day)) return std::nullopt;
    if (day > days_in_month(d.year, month)) return std::nullopt;
    d.day = day;
    return d;
}

std::string Timespan::to_xsd() const {
    std::string out = negative ? "-P" : "P";
    out += std::to_string(years) + "Y";
    if (precision == DatePrecision::year) return out;
    out += std::to_string(months) + "M";
    if (precision == DatePrecision::year_month) return out;
    out += std::to_string(days) + "D";
    return out;
}

std::optional<Timespan> Timespan::parse_xsd(std::string_view text) {
    Timespan span;
    if (text.starts_with('-')) {
        span.negative = true;
        text.remove_prefix(1);
    }
    if (!text.starts_with('P')) return std::nullopt;
    text.remove_prefix(1);
    span.precision = DatePrecision::year;
    bool saw_year = false;
    int value = 0;
    std::size_t i = 0;
    auto flush = [&](char unit) {
        switch (unit) {
            case 'Y': span.years = value; saw_year = true; break;
            case 'M': span.months = value; span.precision = DatePrecision::year_month; break;
            case 'D': span.days = value; span.precision = DatePrecision::day; break;
            default: return false;
        }
        value = 0;
        return true;
    };
    bool have_digits = false;
    while (i < text.size()) {
        char c = text[i++];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            value = value * 10 + (c - '0');
            have_digits = true;
        } else {
            if (!have_digits || !flush(c)) return std::nullopt;
            have_digits = false;
        }
    }
    if (have_digits || !saw_year) return std::nullopt;
    return span;
}

Timespan compute_timespan(const PartialDate& citing, const PartialDate& cited) {
    DatePrecision prec = std::min(citing.precision(), cited.precision());
    Timespan span;
    span.precision = prec;

    if (prec == DatePrecision::year) {
        int diff = citing.year - cited.year;
        span.negative = diff < 0;
        span.years = std::abs(diff);
        return span;
    }
    if (prec == DatePrecision::year_month) {
        int diff = (citing.year - cited.year) * 12 + (*citing.month - *cited.month);
        span.negative = diff < 0;
        diff = std::abs(diff);
        span.years = diff / 12;
        span.months = diff % 12;
        return span;
    }

    // Components are chosen in the direction the span will be applied
    // (months first, then days, from the cited date), so that
    // cited + span == citing holds exactly, clamping included.
    Ymd a{cited.year, *cited.month, *cited.day};
    Ymd b{citing.year, *citing.month, *citing.day};
    int months;
    long days;
    if (ymd_leq(a, b)) {
        // Largest whole-month count not overshooting b, then leftover days.
        months = (b.year - a.year) * 12 + (b.month - a.month);
        if (!ymd_leq(add_months(a, months), b)) --months;
        while (ymd_leq(add_months(a, months + 1), b)) ++months;
        Ymd anchored = add_months(a, months);
        days = serial_day(b.year, b.month, b.day) -
               serial_day(anchored.year, anchored.month, anchored.day);
    } else {
        span.negative = true;
        // Largest whole-month count stepping back from a without passing b.
        months = (a.year - b.year) * 12 + (a.month - b.month);
        if (!ymd_leq(b, add_months(a, -months))) --months;
        while (ymd_leq(b, add_months(a, -(months + 1)))) ++months;
        Ymd anchored = add_months(a, -months);
        days = serial_day(anchored.year, anchored.month, anchored.day) -
               serial_day(b.year, b.month, b.day);
    }
    span.years = months / 12;
    span.months = months % 12;
    span.days = static_cast<int>(days);
    return span;
}

PartialDate add_timespan(const PartialDate& date, const Timespan& span) {
    int sign = span.negative ? -1 : 1;
    Ymd d{date.year, date.month.value_or(1), date.day.value_or(1)};
    d = add_months(d, sign * (span.years * 12 + span.months));
    long serial = serial_day(d.year, d.month, d.day) + sign * span.days;
    using namespace std::chrono;
    year_month_day ymd{sys_days(days(serial))};
    PartialDate out;
    out.year = static_cast<int>(ymd.year());
    out.month = static_cast<int>(unsigned(ymd.month()));
    out.day = static_cast<int>(unsigned(ymd.day()));
    return out;
}

}  // namespace ocindex
