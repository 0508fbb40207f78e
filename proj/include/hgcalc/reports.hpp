#pragma once

#include <optional>
#include <string>

#include "hgcalc/ce.hpp"
#include "hgcalc/complex.hpp"
#include "hgcalc/mc.hpp"

namespace hgcalc {

// deterministic JSON reports (sorted keys, fixed 2-space indentation)

std::string window_report(const ComplexWindow& win, const std::map<int, HomologyResult>& hom,
                          const std::string& model_name);
std::string basis_report(const ComplexWindow& win, const std::string& model_name);
std::string mc_report(const Ambient& amb, const std::vector<HairyGraph>& basis,
                      const std::vector<Obstruction>& obstructions,
                      const std::optional<std::string>& solutions,
                      const std::vector<std::string>& gauge_checks);
std::string ce_report(const CEResult& ce, const std::string& model_name, int n);
std::string utt_report(const Ambient& amb, const UTTH0& h0, const std::string& model_name);

// graph vectors: {"terms": [{"graph": ..., "coeff": ...}]}
std::string graphvector_to_json(const GraphVector& v);
GraphVector graphvector_from_json(const std::string& text, const Ambient& amb, RingPtr ring);

// polynomial rendering for obstruction reports ("l1*l2" style)
std::string poly_str(const RingElement& e);

}  // namespace hgcalc
