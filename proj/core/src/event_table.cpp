#include "holoscope/event_table.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace holo {

void write_events_csv(std::ostream& out, const std::vector<ReturnEvent>& events) {
    out << kEventCsvHeader << '\n';
    for (const auto& e : events) {
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                           e.word.to_string(), e.t_e, e.dt, e.phi_e, e.phi_r, e.p_e[0], e.p_e[1], e.p_e[2],
                           e.p_r[0], e.p_r[1], e.p_r[2], e.freq_ratio);
    }
}

std::string events_to_csv(const std::vector<ReturnEvent>& events) {
    std::ostringstream out;
    write_events_csv(out, events);
    return out.str();
}

namespace {

double parse_number(std::string_view field, std::size_t line, std::size_t column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
        fail(ErrorKind::Parse, fmt::format("line {}: column {}: '{}' is not a finite number", line, column, field));
    return value;
}

} // namespace

std::vector<ReturnEvent> read_events_csv(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    if (!std::getline(in, text)) fail(ErrorKind::Parse, "line 1: empty event table");
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text != kEventCsvHeader)
        fail(ErrorKind::Parse, fmt::format("line 1: unexpected header '{}'", text));

    std::vector<ReturnEvent> events;
    while (std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = text;
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 12)
            fail(ErrorKind::Parse, fmt::format("line {}: expected 12 fields, found {}", line_no, fields.size()));
        ReturnEvent e;
        try {
            e.word = GroupWord::parse(fields[0]);
        } catch (const Error& err) {
            fail(ErrorKind::Parse, fmt::format("line {}: column 1: {}", line_no, err.what()));
        }
        double v[11];
        for (std::size_t i = 0; i < 11; ++i) v[i] = parse_number(fields[i + 1], line_no, i + 2);
        e.t_e = v[0];
        e.dt = v[1];
        e.phi_e = v[2];
        e.phi_r = v[3];
        e.p_e = MinkowskiVector(v[4], v[5], v[6]);
        e.p_r = MinkowskiVector(v[7], v[8], v[9]);
        e.freq_ratio = v[10];
        if (!(e.dt > 0.0))
            fail(ErrorKind::Parse, fmt::format("line {}: return time must be positive", line_no));
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<ReturnEvent> read_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidArgument, fmt::format("cannot open event table {}", path.string()));
    return read_events_csv(in);
}

} // namespace holo
