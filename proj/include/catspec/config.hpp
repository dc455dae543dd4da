#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catspec/catseq.hpp"
#include "catspec/crystal.hpp"
#include "catspec/errors.hpp"
#include "catspec/molecule.hpp"

// Run configuration: a nested key-value text document with units in the
// key names. Sections and keys are validated against a fixed dictionary
// so typos fail loudly. Precedence: built-in defaults, then an optional
// config file, then --set overrides.
namespace catspec::config {

// Raw parsed document: "section.key" -> value, with source line numbers
// for diagnostics.
class RunConfig {
 public:
  static RunConfig defaults();        // neutral defaults
  static RunConfig paper_defaults();  // shipped reference parameter set

  void merge_file(const std::string& path);
  void merge_text(const std::string& text, const std::string& origin);
  // Accepts "section.key=value" or a bare "key=value" when the key is
  // unique across sections.
  void set_override(const std::string& assignment);

  const std::string& get(const std::string& dotted_key) const;
  bool has(const std::string& dotted_key) const;
  double get_double(const std::string& dotted_key) const;
  int get_int(const std::string& dotted_key) const;
  std::uint64_t get_u64(const std::string& dotted_key) const;
  std::string get_string(const std::string& dotted_key) const;
  std::vector<double> get_list(const std::string& dotted_key) const;
  std::vector<int> get_int_list(const std::string& dotted_key) const;

  void set(const std::string& dotted_key, const std::string& value);
  void unset(const std::string& dotted_key);

  // Canonical serialization (sections and keys sorted); parsing it back
  // reproduces the document.
  std::string serialize() const;
  // FNV-1a 64 over the canonical serialization, as a hex string.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const {
    return values_;
  }

 private:
  std::map<std::string, std::string> values_;
};

// Everything derived from a RunConfig that the subcommands consume.
struct Resolved {
  crystal::IonCrystal ions;
  double cos_chi = 1.0;
  double eta_a = 0;  // drive-transition Lamb-Dicke parameter
  double eta_m = 0;  // recoil Lamb-Dicke parameter at the laser center
  catseq::CatParams cat;
  catseq::DecoherenceModel decoherence{1.0, 1.0};
  molecule::MolecularTransition transition{1.0, 1.0};
  molecule::PulseTrainSpec train;
  molecule::TrialOptions trial;
  crystal::SyncReport sync;

  std::uint64_t seed = 0;
  int n_trials = 0;
  int n_shots = 0;
  int threads = 0;
  int fock_cutoff = 0;
  int phi_points = 0;
  std::vector<int> kick_list;
  std::vector<int> pulse_list;
  std::vector<double> spectrum_grid_cm1;
  double eta = 0;  // displacement magnitude for the signal subcommand
  std::string out_dir;
  std::string measured_csv;

  std::string config_hash;
  RunConfig raw;
};

// Validates and derives; throws ConfigError with the offending key. When
// [transition] provides curve paths, the transition constants are filled
// by the vibrational eigensolver before use.
Resolved resolve(const RunConfig& config);

// Parses "start:step:stop" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace catspec::config
