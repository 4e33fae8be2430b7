#pragma once

#include <string>
#include <vector>

namespace tcsde::repro {

struct CsvTable {
    std::string provenance;  // leading `# ...` line, without the '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
};

// Parses the CSV files written by the runner (one optional comment line, a
// header, numeric rows; "nan" allowed).
CsvTable parse_csv(const std::string& text);

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;       // NaN breaks the line
    std::string comment;         // embedded as an XML comment
    std::size_t max_points = 2000;
    // y range from the points past this fraction of the x span; earlier
    // points are clamped into it
    double y_range_skip = 0.0;
    int width = 720;
    int height = 440;
};

std::string render_svg(const LinePlot& plot);

// Figure of ratio.csv: `real_ratio` or `op_ratio` against t.
std::string ratio_figure(const std::string& ratio_csv_text, bool operational);

// Ticks at 1, 2 or 5 times a power of ten covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace tcsde::repro
