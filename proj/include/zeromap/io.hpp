#ifndef ZEROMAP_IO_HPP
#define ZEROMAP_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "zeromap/mapengine.hpp"
#include "zeromap/odometer.hpp"
#include "zeromap/seqlab.hpp"
#include "zeromap/tower.hpp"
#include "zeromap/verifier.hpp"

// JSON and CSV forms of every report type. JSON objects keep insertion order
// and floats are rounded to 15 significant digits, so output is byte-stable.
namespace zeromap::io {

using Json = nlohmann::ordered_json;

double round15(double v);
std::string format15(double v);

Json to_json(const seqlab::CesaroSeries& s);
seqlab::CesaroSeries cesaro_series_from_json(const Json& j);

Json to_json(const seqlab::OscillationReport& r);
seqlab::OscillationReport oscillation_report_from_json(const Json& j);

Json to_json(const seqlab::DensityReport& r);
seqlab::DensityReport density_report_from_json(const Json& j);

Json to_json(const odometer::Progression& p);
odometer::Progression progression_from_json(const Json& j);

Json to_json(const mapengine::ScreenResult& r);
mapengine::ScreenResult screen_result_from_json(const Json& j);

Json to_json(const mapengine::PerronResult& r);
mapengine::PerronResult perron_result_from_json(const Json& j);

Json to_json(const mapengine::CascadeResult& r);
mapengine::CascadeResult cascade_result_from_json(const Json& j);

Json to_json(const tower::Tower& t);
tower::Tower tower_from_json(const Json& j);

Json to_json(const tower::TowerReport& r);
tower::TowerReport tower_report_from_json(const Json& j);

/// Summary only; per-step labels go to CSV.
Json to_json(const tower::Itinerary& it);
tower::Itinerary itinerary_from_json(const Json& j);

Json to_json(const verifier::ProbeConfig& c);
verifier::ProbeConfig probe_config_from_json(const Json& j);

Json to_json(const verifier::MlsVerdict& v);
verifier::MlsVerdict mls_verdict_from_json(const Json& j);

Json to_json(const verifier::EquicontinuityResult& r);
verifier::EquicontinuityResult equicontinuity_from_json(const Json& j);

Json to_json(const verifier::AttractionResult& r);
verifier::AttractionResult attraction_from_json(const Json& j);

/// Columns n, re, im.
void write_sequence_csv(std::ostream& out, const seqlab::ArithmeticSequence& c);
seqlab::ArithmeticSequence read_sequence_csv(std::istream& in, std::string label);

}  // namespace zeromap::io

#endif  // ZEROMAP_IO_HPP
