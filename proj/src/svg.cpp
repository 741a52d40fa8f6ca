#include "tqd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tqd/csv.hpp"

namespace tqd
{
    namespace
    {
        constexpr const char* kPalette[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

        std::string escape(const std::string& s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                default: out += c;
                }
            }
            return out;
        }

        std::string num(double x) { return format_number(x, 6); }
    } // namespace

    std::string SvgPlot::render(int width, int height) const
    {
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : series)
        {
            if (s.x.size() != s.y.size())
            {
                throw std::invalid_argument("series " + s.name + " has mismatched x/y lengths");
            }
            for (std::size_t i = 0; i < s.x.size(); ++i)
            {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        }
        if (!(x1 > x0))
        {
            x1 = x0 + 1;
        }
        if (!(y1 > y0))
        {
            y1 = y0 + 1;
        }

        const double left = 70, right = 150, top = 40, bottom = 50;
        const double pw = width - left - right, ph = height - top - bottom;
        auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
        auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
           << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
        os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
           << "\" fill=\"none\" stroke=\"black\"/>\n";

        for (int k = 0; k <= 4; ++k)
        {
            const double fx = x0 + (x1 - x0) * k / 4.0;
            const double fy = y0 + (y1 - y0) * k / 4.0;
            os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
               << num(fx) << "</text>\n";
            os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(fy) + 4) << "\" text-anchor=\"end\">"
               << num(fy) << "</text>\n";
        }
        os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
           << escape(x_label) << "</text>\n";
        os << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
           << escape(y_label) << "</text>\n";

        for (std::size_t s = 0; s < series.size(); ++s)
        {
            const char* colour = kPalette[s % std::size(kPalette)];
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < series[s].x.size(); ++i)
            {
                os << (i ? " " : "") << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i]));
            }
            os << "\"/>\n";
            const double ly = top + 14 + 18.0 * static_cast<double>(s);
            os << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 30)
               << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << num(left + pw + 36) << "\" y=\"" << num(ly + 4) << "\">" << escape(series[s].name)
               << "</text>\n";
        }
        os << "</svg>\n";
        return os.str();
    }

    void SvgPlot::save(const std::string& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
        {
            throw std::runtime_error("cannot open " + path + " for writing");
        }
        out << render();
    }
} // namespace tqd
