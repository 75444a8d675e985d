#include "cosim/csv_observer.hpp"

#include "cosim/config.hpp"
#include "cosim/errors.hpp"

namespace cosim {

CsvObserver::CsvObserver(std::filesystem::path directory)
    : directory_(std::move(directory)),
      signals_path_(directory_ / "signals.csv"),
      energy_path_(directory_ / "energy.csv") {}

void CsvObserver::check(std::ofstream& out, const std::filesystem::path& path) {
    if (!out) throw Error(ErrorCode::generic, "cannot write " + path.string());
}

void CsvObserver::on_initialized(const RunInfo& info) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    signals_.open(signals_path_, std::ios::binary | std::ios::trunc);
    check(signals_, signals_path_);
    energy_.open(energy_path_, std::ios::binary | std::ios::trunc);
    check(energy_, energy_path_);

    signals_ << "time";
    for (std::size_t p = 0; p < info.topology.ports().size(); ++p) {
        const auto& entity = info.topology.entities()[info.topology.ports()[p].entity];
        if (entity.kind != EntityKind::slave) continue;
        columns_.push_back(p);
        signals_ << ',' << info.topology.port_name(p);
    }
    signals_ << '\n';
    energy_ << "time,bond,P1,P2,dP,dE,cumulative_dE,epsilon\n";
    signals_.flush();
    energy_.flush();
    check(signals_, signals_path_);
    check(energy_, energy_path_);
}

void CsvObserver::on_step(const StepRecord& record) {
    const auto t = format_real(record.end_time());
    signals_ << t;
    for (auto p : columns_) signals_ << ',' << format_real(record.values[p]);
    signals_ << '\n';
    check(signals_, signals_path_);

    const auto epsilon = format_real(record.energy.epsilon);
    for (const auto& b : record.energy.bonds) {
        energy_ << t << ',' << b.bond << ',' << format_real(b.p1) << ',' << format_real(b.p2) << ','
                << format_real(b.dp) << ',' << format_real(b.de) << ',' << format_real(b.cumulative_de) << ','
                << epsilon << '\n';
    }
    check(energy_, energy_path_);
}

void CsvObserver::on_terminated(const RunEnd&) {
    signals_.flush();
    energy_.flush();
    signals_.close();
    energy_.close();
}

}  // namespace cosim
