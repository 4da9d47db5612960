#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nominal/data_value.hpp"
#include "nominal/structure.hpp"
#include "nominal/symmetry.hpp"

namespace nominal {

using Valuation = std::vector<DataValue>;
using PartialValuation = std::vector<std::optional<DataValue>>;

/// An embedding of shape into the limit, built from witnesses, avoiding the
/// given values.
Valuation realize(const Symmetry& sym, const FinStruct& shape, std::span<const DataValue> avoid = {});

/// Fills the unset positions of partial with fresh witnesses so that the
/// whole valuation induces shape. The set positions must already be
/// consistent with shape.
Valuation extend_valuation(const Symmetry& sym, const FinStruct& shape,
                           const PartialValuation& partial, std::span<const DataValue> avoid);

/// Every completion of partial that induces shape, where each unset position
/// takes either an unused value of known or one fresh value per extension
/// type over known and the values assigned so far.
void for_each_valuation(const Symmetry& sym, const FinStruct& shape, const PartialValuation& partial,
                        std::span<const DataValue> known,
                        const std::function<void(const Valuation&)>& visit);

/// Renames values outside known to deterministic representatives of their
/// extension types, so valuations in the same orbit over known coincide.
Valuation canonicalize_fresh(const Symmetry& sym, std::span<const DataValue> valuation,
                             std::span<const DataValue> known);

} // namespace nominal
