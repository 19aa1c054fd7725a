#pragma once

#include <string>

#include <json.hpp>

#include "qhc/channel.hpp"
#include "qhc/fixed_points.hpp"
#include "qhc/group.hpp"
#include "qhc/rep.hpp"
#include "qhc/schur.hpp"
#include "qhc/spectra.hpp"

namespace qhc::io {

using Json = nlohmann::ordered_json;

// Complex numbers are [re, im] pairs; matrices are arrays of rows.
Json to_json(cplx z);
Json to_json(const Mat& m);
Json to_json(const Vec& v);
Json to_json(const RVec& v);
cplx complex_from_json(const Json& j);
Mat matrix_from_json(const Json& j);
Vec vector_from_json(const Json& j);

/// { "order": n, "table": [[...]], "labels": [...] }
Json group_to_json(const FiniteGroup& g);

/// A group reference: an alias string ("s3", "z2^3", ...), a table object as
/// produced by group_to_json, or a descriptor object with exactly one of the
/// keys "cyclic", "product", "semidirect", "symmetric", "dihedral", "explicit".
GroupPtr group_from_json(const Json& ref);
GroupDescriptor descriptor_from_json(const Json& j);

/// { "group": <ref>, "weights": [...] }
Json measure_to_json(const ProbabilityMeasure& mu, const Json& group_ref);
ProbabilityMeasure measure_from_json(const Json& j, GroupPtr* group = nullptr);

/// { "group": <ref>, "dim": d, "matrices": [...] }
Json rep_to_json(const UnitaryRep& rep, const Json& group_ref);
UnitaryRep rep_from_json(const Json& j);

/// { "group": <ref>, "values": [[re, im], ...] }
Json pdf_to_json(const PositiveDefiniteFunction& phi, const Json& group_ref);
PositiveDefiniteFunction pdf_from_json(const Json& j);

/// { "dim_in": d, "dim_out": d2, "kraus": [...] }
Json channel_to_json(const QuantumChannel& c);
QuantumChannel channel_from_json(const Json& j);

/// { "blocks": [[n, m], ...], "noiseless": [...], "unitary": <matrix>, "seed": k }
Json noiseless_to_json(const NoiselessReport& r);

Json capacity_to_json(const CapacityResult& r);
Json moe_to_json(const MoeResult& r);
Json dichotomy_to_json(const DichotomyResult& r);
Json aqbc_sample_to_json(const AqbcSample& s);

/// { "error": { "kind": ..., "message": ... } }
Json error_to_json(const std::string& kind, const std::string& message);

}  // namespace qhc::io
