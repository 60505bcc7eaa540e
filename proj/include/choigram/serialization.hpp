#pragma once

// JSON channel files and the export schemas used by the CLI.
//
// Channel schema:
//   {
//     "dim": d,
//     "representation": "kraus" | "superop" | "choi",
//     "convention": "column-stacking",
//     "entries": <matrix> | [<matrix>, ...],   // list form for kraus
//     "normalized": bool                        // choi only, default false
//   }
// where <matrix> is an array of rows and every entry is an [re, im] pair.

#include "choigram/channels.hpp"
#include "choigram/charfunc.hpp"

#include <json.hpp>

#include <string>

namespace choigram {

struct LoadedChannel {
  std::string representation;
  Superoperator superop;  // canonical form, whatever was on disk
};

LoadedChannel parse_channel_json(const nlohmann::json& j);
LoadedChannel load_channel_json(const std::string& path);

nlohmann::json channel_json(const KrausChannel& k);
nlohmann::json channel_json(const Superoperator& s);
nlohmann::json channel_json(const ChoiOperator& j);

nlohmann::json matrix_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows,
                               Eigen::Index cols, const std::string& what);

nlohmann::json gram_json(const GramMatrix& g, const UnitaryBasis& basis);
nlohmann::json char_table_json(const CharFunctionTable& table, const UnitaryBasis& basis);

/// 17-significant-digit decimal form, locale independent; "nan"/"inf"
/// spellings are normalized so output files are byte-stable.
std::string format_float(double v);

}  // namespace choigram
