#include <fermat3/cli.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fermat3::cli
{

std::string format_number(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buffer, ptr);
}

std::string render(const Report &report, OutputFormat format)
{
    std::ostringstream oss;
    if (format == OutputFormat::Json) {
        oss << report.json.dump(2) << "\n";
        return oss.str();
    }
    const auto join = [&oss](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            oss << (i ? "," : "") << cells[i];
        }
        oss << "\n";
    };
    join(report.csv.header);
    for (const auto &row : report.csv.rows) {
        join(row);
    }
    return oss.str();
}

bool emit_report(const Report &report, OutputFormat format, const std::string &path, std::ostream &out)
{
    const auto text = render(report, format);
    if (path.empty()) {
        out << text;
        return static_cast<bool>(out);
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        return false;
    }
    file << text;
    file.close();
    return static_cast<bool>(file);
}

} // namespace fermat3::cli
