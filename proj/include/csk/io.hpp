#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "csk/aintegral.hpp"
#include "csk/asymptotics.hpp"
#include "csk/charseq.hpp"
#include "csk/criteria.hpp"
#include "csk/entire.hpp"
#include "csk/measures.hpp"
#include "csk/sequences.hpp"
#include "csk/verdict.hpp"
#include "csk/weights.hpp"

namespace csk::io {

using json = nlohmann::json;

// Reading. Every failure is an InputError naming the file or field.
std::string read_file(const std::string& path);
json parse_json(const std::string& text, const std::string& where);
json load_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);  // "-" or empty: stdout

// Finite doubles as numbers, non-finite ones as "inf", "-inf", "nan".
json number(double x);
double to_double(const json& j, const std::string& field);  // accepts numbers and decimal strings
std::string format_csv(double x);  // 12 significant digits

SequenceSpec sequence_spec_from_json(const json& j);
json to_json(const SequenceSpec& spec);
json to_json(const DiscreteSequence& seq);  // points as %.17g strings

WeightSpec weight_from_json(const json& j);
json to_json(const WeightSpec& w);

DiscreteMeasure measure_from_json(const json& j);
DiscreteMeasure measure_from_csv(const std::string& text);
DiscreteMeasure load_measure(const std::string& path);  // .csv by extension, JSON otherwise
json to_json(const DiscreteMeasure& mu);
std::string to_csv(const DiscreteMeasure& mu);

SampledFunction sampled_function_from_json(const json& j);
json to_json(const SampledFunction& f);

json to_json(const CharEntry& e);
json to_json(const CharacteristicSequence& P);
CharacteristicSequence charseq_from_json(const json& j, const DiscreteSequence& seq);
std::string to_csv(const CharacteristicSequence& P);

json to_json(const SeriesAssessment& s);
json to_json(const Verdict& v);
json to_json(const DensityReport& r);
json to_json(const BalanceReport& r);
json to_json(const MomentValue& m);
json to_json(const AnnihilationReport& r);
json to_json(const DecayProfile& d);
json to_json(const ExtremeReport& r);
json to_json(const ScaledComplex& s);
json to_json(const ProductEvaluation& p);
json to_json(const IdentityReport& r);
json to_json(const ZeroSetClass& z);
json to_json(const QuadResult& q);
json to_json(const AIntegralReport& r);
json to_json(const ResidualTable& t);
json to_json(const UlyanovReport& r);
json to_json(const CountingConjugate& c);
json to_json(const ComparisonReport& r);
std::string to_csv(const ComparisonReport& r);
json to_json(const PowerDemoReport& r);
json complex_json(cplx z);

}  // namespace csk::io
