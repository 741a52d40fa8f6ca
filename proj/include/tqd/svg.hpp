#pragma once

#include <string>
#include <vector>

namespace tqd
{
    struct PlotSeries
    {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
    };

    /// Line plot with linear axes spanning the data range.
    struct SvgPlot
    {
        std::string title;
        std::string x_label;
        std::string y_label;
        std::vector<PlotSeries> series;

        std::string render(int width = 640, int height = 420) const;
        void save(const std::string& path) const;
    };
} // namespace tqd
