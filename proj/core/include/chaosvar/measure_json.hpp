#pragma once

#include <json.hpp>

#include "chaosvar/spectral_measure.hpp"
#include "chaosvar/sym_tensor.hpp"

namespace chaosvar {

// Tensor shape: {"order": q, "dim": n, "entries": [[[i1, ..., iq], value], ...]},
// 0-based sorted indices.
nlohmann::json tensor_to_json(const SymTensor& t);
SymTensor tensor_from_json(const nlohmann::json& j);

// Forms: {"re": [[...]], "im": [[...]]}; "im" may be omitted for real forms.
nlohmann::json form_to_json(const HermitianForm& f);
HermitianForm form_from_json(const nlohmann::json& j);

// Measure shape (version 1):
//   {"kind": "atomic",   "version": 1, "dim_freq", "dim_target", "atoms": [{"freq", "form"}]}
//   {"kind": "sphere",   ..., "radius", "directions", "profile", "lift": {"kind", "beta", "gamma"}}
//   {"kind": "lebesgue", ..., "grid": {"lower", "spacing", "counts"}, "values": [form]}
// Shorthands accepted on input only:
//   {"kind": "random_wave", "dim_freq": d}
//   {"kind": "gaussian_covariance", "dim_freq": d, "scale": s, "per_axis": n, "cutoff_sd": c}
//   {"kind": "uniform_interval", "half_width": a, "density": c, "per_axis": n}   (d = 1)
nlohmann::json measure_to_json(const SpectralMeasure& mu);
SpectralMeasure measure_from_json(const nlohmann::json& j);

}  // namespace chaosvar
