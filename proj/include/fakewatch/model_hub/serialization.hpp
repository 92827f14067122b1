#pragma once

#include <string>
#include <string_view>

#include "fakewatch/model_hub/trained_model.hpp"

namespace fakewatch::model_hub {

// File layout: "FKW1" | u32 format_version | u32 CRC-32 of payload |
// u64 payload length | payload. All integers little-endian.
std::string encode_model(const TrainedModel& model);
// kIntegrity for bad magic, truncation or checksum mismatch; kMigration for a
// format version other than kModelFormatVersion.
TrainedModel decode_model(std::string_view bytes);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace fakewatch::model_hub
