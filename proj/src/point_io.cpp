#include "phs/point_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "phs/errors.hpp"
#include "phs/format.hpp"

namespace phs {

namespace {

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    for (auto& s : cells) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return cells;
}

}  // namespace

PointData read_points_csv(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line)) throw InputError(source + ": empty file, expected header x1,...,xd[,value]");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_row(line);
    std::size_t dim = 0;
    while (dim < header.size() && header[dim] == "x" + std::to_string(dim + 1)) ++dim;
    const bool has_value = dim + 1 == header.size() && header.back() == "value";
    if (dim == 0 || (dim != header.size() && !has_value))
        throw InputError(source + ": header must be x1,...,xd optionally followed by value");
    const std::size_t width = header.size();

    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_row(line);
        if (cells.size() != width)
            throw InputError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " fields, got " + std::to_string(cells.size()));
        for (const auto& cell : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
                throw InputError(source + ":" + std::to_string(line_no) + ": invalid number '" + cell + "'");
            if (!std::isfinite(v))
                throw InputError(source + ":" + std::to_string(line_no) + ": non-finite value '" + cell + "'");
            data.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw InputError(source + ": no data rows");

    const auto n = static_cast<Eigen::Index>(rows);
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(dim), n);
    std::optional<Eigen::VectorXd> values;
    if (has_value) values = Eigen::VectorXd(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double* row = data.data() + static_cast<std::size_t>(r) * width;
        for (std::size_t c = 0; c < dim; ++c) coords(static_cast<Eigen::Index>(c), r) = row[c];
        if (has_value) (*values)[r] = row[dim];
    }
    return {PointSet(std::move(coords), FileProvenance{source}), std::move(values)};
}

PointData read_points_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_points_csv(in, path);
}

void write_points_csv(std::ostream& out, const PointSet& points, const Eigen::VectorXd* values)
{
    if (values && values->size() != points.size()) throw InputError("value count does not match point count");
    for (int i = 0; i < points.dim(); ++i) out << (i ? "," : "") << 'x' << (i + 1);
    if (values) out << ",value";
    out << '\n';
    for (int j = 0; j < points.size(); ++j) {
        for (int i = 0; i < points.dim(); ++i) out << (i ? "," : "") << format_double(points.coords()(i, j));
        if (values) out << ',' << format_double((*values)[j]);
        out << '\n';
    }
}

}  // namespace phs
