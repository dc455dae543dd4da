#pragma once

#include <string>
#include <vector>

#include "catspec/config.hpp"
#include "catspec/experiment.hpp"

// Subcommand implementations. Each run maps a resolved configuration to
// a set of output files (CSV + JSON manifest) plus console text, without
// touching the filesystem, so identical configs provably produce
// identical bytes.
namespace catspec::runs {

struct OutputFile {
  std::string name;     // relative to the output directory
  std::string content;
};

struct RunOutput {
  std::vector<OutputFile> files;
  std::string text;  // console summary
};

RunOutput run_modes(const config::Resolved& r);
RunOutput run_signal(const config::Resolved& r);
RunOutput run_kickscan(const config::Resolved& r);
RunOutput run_excite(const config::Resolved& r);
RunOutput run_pulsescan(const config::Resolved& r);
RunOutput run_spectrum(const config::Resolved& r);
RunOutput run_dvr(const config::Resolved& r);
RunOutput run_validate(const config::Resolved& r);

// subcommand in {modes, signal, kickscan, excite, pulsescan, spectrum,
// dvr, validate}; throws ConfigError otherwise.
RunOutput dispatch(const std::string& subcommand, const config::Resolved& r);

// Fixed scan serialization: metadata lines, then
// x,S,p_abs_eff,stderr,eta_m,alpha_mag,s_max_t plus any extra columns.
std::string scan_to_csv(const experiment::ScanResult& scan,
                        const config::Resolved& r,
                        const std::string& subcommand);

std::string manifest_json(const config::Resolved& r,
                          const std::string& subcommand,
                          const std::vector<std::string>& file_names);

}  // namespace catspec::runs
