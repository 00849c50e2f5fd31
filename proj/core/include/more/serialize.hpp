#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "more/motif.hpp"
#include "more/training.hpp"

namespace more {

std::string config_to_json(const TrainConfig& config);

/// Missing keys keep their defaults. Accepts "model": "more"|"gcn" and
/// "aggregator": "ha"|"su"|"co". Throws FormatError on bad JSON or values.
TrainConfig config_from_json(std::string_view text);

/// FNV-1a over the canonical JSON form of the config.
std::uint64_t config_hash(const TrainConfig& config);

/// Report with config, metrics and full per-epoch curves.
void write_report_json(std::ostream& out, const TrainReport& report, const TrainConfig& config,
                       std::string_view dataset);

/// Header: epoch,train_loss,val_loss,test_loss,train_acc,val_acc,test_acc.
/// Values use round-trip precision.
void write_curves_csv(std::ostream& out, const TrainReport& report);

/// Header: node,m31,m32,m41,m42,m43.
void write_nmd_csv(std::ostream& out, const MotifCensus& census);

std::string split_to_json(const Split& split);

/// Checkpoint: model kind, per-matrix shapes and row-major values, seed and
/// config hash.
void save_params(std::ostream& out, const ModelParams& params, const TrainConfig& config);

/// Inverse of save_params. Throws FormatError on malformed input.
ModelParams load_params(std::istream& in, TrainConfig* config = nullptr);

}  // namespace more
