#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cosim/master.hpp"

namespace cosim {

/// Writes signals.csv (every slave variable after each step) and energy.csv
/// (one row per bond and step) into a directory. Reals use the shortest
/// round-trip decimal form. A write failure throws, which makes the master
/// drop the observer.
class CsvObserver final : public Observer {
public:
    explicit CsvObserver(std::filesystem::path directory);

    void on_initialized(const RunInfo& info) override;
    void on_step(const StepRecord& record) override;
    void on_terminated(const RunEnd& end) override;

    const std::filesystem::path& signals_path() const { return signals_path_; }
    const std::filesystem::path& energy_path() const { return energy_path_; }

private:
    void check(std::ofstream& out, const std::filesystem::path& path);

    std::filesystem::path directory_;
    std::filesystem::path signals_path_;
    std::filesystem::path energy_path_;
    std::ofstream signals_;
    std::ofstream energy_;
    std::vector<std::size_t> columns_;
};

}  // namespace cosim
