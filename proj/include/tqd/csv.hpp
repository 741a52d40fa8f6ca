#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace tqd
{
    /// Header plus rows, written RFC-4180 style with '.' decimals and LF line ends.
    class CsvTable
    {
    public:
        using Cell = std::variant<double, std::string>;

        explicit CsvTable(std::vector<std::string> header, int precision = 17);

        /// Throws std::invalid_argument on a width mismatch or a non-finite number.
        void add_row(std::vector<Cell> row);

        const std::vector<std::string>& header() const { return header_; }
        std::size_t rows() const { return rows_.size(); }

        void write(std::ostream& os) const;
        std::string str() const;
        void save(const std::string& path) const;

    private:
        std::vector<std::string> header_;
        std::vector<std::vector<Cell>> rows_;
        int precision_;
    };

    std::string format_number(double x, int precision);

    /// Minimal reader for tables written by CsvTable (no quoted fields).
    struct CsvData
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        /// Index of `name` in the header; throws std::out_of_range if missing.
        std::size_t column(const std::string& name) const;
        std::vector<double> numbers(const std::string& name) const;
    };

    CsvData parse_csv(const std::string& text);
} // namespace tqd
