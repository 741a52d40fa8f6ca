#include "tqd/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tqd
{
    std::string format_number(double x, int precision)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        return buf;
    }

    CsvTable::CsvTable(std::vector<std::string> header, int precision)
        : header_(std::move(header)), precision_(precision)
    {
        if (precision_ < 1 || precision_ > 17)
        {
            throw std::invalid_argument("CSV precision must be within [1, 17]");
        }
    }

    void CsvTable::add_row(std::vector<Cell> row)
    {
        if (row.size() != header_.size())
        {
            throw std::invalid_argument("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                        std::to_string(header_.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (const double* x = std::get_if<double>(&row[i]); x && !std::isfinite(*x))
            {
                throw std::invalid_argument("non-finite value in CSV column " + header_[i]);
            }
        }
        rows_.push_back(std::move(row));
    }

    void CsvTable::write(std::ostream& os) const
    {
        auto emit = [&os](const auto& cells, auto&& to_text) {
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                {
                    os << ',';
                }
                os << to_text(cells[i]);
            }
            os << '\n';
        };
        emit(header_, [](const std::string& s) { return s; });
        for (const auto& row : rows_)
        {
            emit(row, [this](const Cell& c) {
                if (const double* x = std::get_if<double>(&c))
                {
                    return format_number(*x, precision_);
                }
                return std::get<std::string>(c);
            });
        }
    }

    std::string CsvTable::str() const
    {
        std::ostringstream os;
        write(os);
        return os.str();
    }

    void CsvTable::save(const std::string& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
        {
            throw std::runtime_error("cannot open " + path + " for writing");
        }
        write(out);
        if (!out)
        {
            throw std::runtime_error("failed writing " + path);
        }
    }

    std::size_t CsvData::column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
        {
            if (header[i] == name)
            {
                return i;
            }
        }
        throw std::out_of_range("no CSV column named " + name);
    }

    std::vector<double> CsvData::numbers(const std::string& name) const
    {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows)
        {
            out.push_back(std::stod(r.at(c)));
        }
        return out;
    }

    CsvData parse_csv(const std::string& text)
    {
        CsvData data;
        std::istringstream in(text);
        std::string line;
        bool first = true;
        while (std::getline(in, line))
        {
            if (line.empty())
            {
                continue;
            }
            std::vector<std::string> cells;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
            {
                cells.push_back(cell);
            }
            if (first)
            {
                data.header = std::move(cells);
                first = false;
            }
            else
            {
                data.rows.push_back(std::move(cells));
            }
        }
        return data;
    }
} // namespace tqd
