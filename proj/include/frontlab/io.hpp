#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "frontlab/energy.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/potential.hpp"
#include "frontlab/renorm.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/tw_ode.hpp"

namespace frontlab::io {

using Json = nlohmann::json;

// Potential descriptors: {"kind": ..., "d": ..., "params": {...}}.
// Schema violations raise ConfigError naming the offending field.
Potential potential_from_json(const Json& j);
Json potential_to_json(const Potential& v);
/// Parses a descriptor file; syntax errors report the byte offset.
Potential load_potential(const std::filesystem::path& path);
Json parse_json_text(std::string_view text, std::string_view origin);

Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);
Json to_json(const Profile& p);
Profile profile_from_json(const Json& j);
Json to_json(const SpectralReport& r);
SpectralReport spectral_report_from_json(const Json& j);
Json to_json(const HypothesisReport& r);
Json to_json(const SpeedProbe& p);
SpeedProbe speed_probe_from_json(const Json& j);
Json to_json(const SpeedEstimate& e);
SpeedEstimate speed_estimate_from_json(const Json& j);
Json to_json(const TWState& s);
TWState tw_state_from_json(const Json& j);
Json to_json(const FrontRecord& r);
FrontRecord front_record_from_json(const Json& j);
Json to_json(const FrontTrack& t);
FrontTrack front_track_from_json(const Json& j);
Json to_json(const BarrierCrossing& c);
BarrierCrossing barrier_crossing_from_json(const Json& j);
Json to_json(const LemmaReport& r);
LemmaReport lemma_report_from_json(const Json& j);
Json to_json(const RenormSequence& s);
RenormSequence renorm_sequence_from_json(const Json& j);

const char* nu_status_name(NuStatus s);

/// 17 significant digits, '.' decimal point, independent of the global locale.
std::string format_double(double x);

std::string profile_csv(const Profile& p);
std::string probes_csv(const std::vector<SpeedProbe>& probes);
std::string snapshot_csv(const Grid& x, std::size_t d, const Snapshot& s);
std::string track_csv(const FrontTrack& t);
std::string trajectory_csv(const BarrierTrajectory& t);
std::string sequence_csv(const RenormSequence& s);

/// Polyline plot of y against x, scaled into a width x height box.
std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y,
                         int width = 640, int height = 400);

/// Writes to a temporary sibling and renames it over the target.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

struct RunManifest {
  std::string command;
  Json config;
  std::string input_hash;  // hex FNV-1a of the canonical config dump
  std::vector<std::string> outputs;
  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

RunManifest make_manifest(std::string command, Json config, std::vector<std::string> outputs);
Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

}  // namespace frontlab::io
