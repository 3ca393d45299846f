#include "fracpme/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fracpme/error.hpp"

namespace fracpme {

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_snapshot(std::ostream& os, const Snapshot& snapshot, const GridSpec& grid) {
    os << "# t=" << format_number(snapshot.time) << '\n';
    os << "# dx=" << format_number(grid.dx()) << '\n';
    for (int i = 0; i <= grid.intervals_x(); ++i) {
        os << format_number(grid.x(i)) << '\t' << format_number(snapshot.trace[i]) << '\n';
    }
}

void write_field(std::ostream& os, const Field& field, double time) {
    const GridSpec& grid = field.grid();
    os << "# t=" << format_number(time) << '\n';
    os << "# dx=" << format_number(grid.dx()) << '\n';
    for (int k = 0; k <= grid.intervals_y(); ++k) {
        for (int i = 0; i <= grid.intervals_x(); ++i) {
            os << format_number(grid.x(i)) << '\t' << format_number(grid.y(k)) << '\t'
               << format_number(field.at(i, k)) << '\n';
        }
    }
}

void write_error_table(std::ostream& os, const ErrorTable& table) {
    os << "dx dt nodes error order\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        os << format_number(row.dx) << ' ' << format_number(row.dt) << ' ' << row.nodes << ' '
           << format_number(row.error) << ' ';
        if (r > 0) os << format_number(table.orders[r - 1]);
        os << '\n';
    }
}

void write_property_report(std::ostream& os, const PropertyReport& report) {
    if (report.cfl_violation) {
        os << "# " << report.diagnostic << '\n';
        return;
    }
    os << "# solver_slack=" << format_number(report.solver_slack) << '\n';
    os << "property\tstatus\tmeasured\tallowed\tnote\n";
    for (const auto& r : report.results) {
        const char* status = !r.applicable ? "n/a" : (r.passed ? "pass" : "FAIL");
        os << r.name << '\t' << status << '\t' << format_number(r.measured) << '\t'
           << format_number(r.allowed) << '\t' << r.note << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    body(os);
    os.flush();
    if (!os) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void write_run(const std::filesystem::path& dir, const RunResult& result, const GridSpec& grid) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& snap : result.snapshots) {
        char name[48];
        std::snprintf(name, sizeof name, "snapshot_%06d.tsv", snap.j);
        write_file(dir / name, [&](std::ostream& os) { write_snapshot(os, snap, grid); });
        if (snap.field) {
            std::snprintf(name, sizeof name, "field_%06d.tsv", snap.j);
            write_file(dir / name, [&](std::ostream& os) { write_field(os, *snap.field, snap.time); });
        }
    }
}

}  // namespace fracpme
