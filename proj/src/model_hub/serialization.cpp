#include "fakewatch/model_hub/serialization.hpp"

#include <zlib.h>

#include <cstring>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/strings.hpp"
#include "fakewatch/model_hub/binary_io.hpp"

namespace fakewatch::model_hub {
namespace {

constexpr char kMagic[4] = {'F', 'K', 'W', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 8;

enum ParamTag : std::uint8_t { kBool = 0, kInt = 1, kDouble = 2, kString = 3 };

std::uint32_t checksum(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // crc32 takes a uInt length; feed large payloads in chunks.
  const auto* p = reinterpret_cast<const Bytef*>(data.data());
  std::size_t left = data.size();
  while (left > 0) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

void write_param(BinaryWriter& out, const ParamValue& v) {
  if (auto* b = std::get_if<bool>(&v)) {
    out.u8(kBool);
    out.u8(*b ? 1 : 0);
  } else if (auto* i = std::get_if<std::int64_t>(&v)) {
    out.u8(kInt);
    out.i64(*i);
  } else if (auto* d = std::get_if<double>(&v)) {
    out.u8(kDouble);
    out.f64(*d);
  } else {
    out.u8(kString);
    out.str(std::get<std::string>(v));
  }
}

ParamValue read_param(BinaryReader& in) {
  switch (in.u8()) {
    case kBool:
      return in.u8() != 0;
    case kInt:
      return in.i64();
    case kDouble:
      return in.f64();
    case kString:
      return in.str();
    default:
      throw Error(ErrorCode::kIntegrity, "unknown hyperparameter tag");
  }
}

void write_featurizer(BinaryWriter& out, const Featurizer& f) {
  out.u8(f.tokenizer.lowercase ? 1 : 0);
  out.u64(f.tokenizer.min_token_length);
  out.u64(f.tokenizer.stopwords.size());
  for (const auto& w : f.tokenizer.stopwords) out.str(w);
  const auto& vocab = f.tfidf.vocabulary();
  out.u8(f.tfidf.norm() == features::Norm::kL2 ? 1 : 0);
  out.u64(vocab.corpus_size());
  out.u64(vocab.size());
  for (const auto& t : vocab.terms()) out.str(t);
  out.u32_vec(vocab.document_frequency());
  out.u64(f.tfidf.fingerprint());
}

std::shared_ptr<const Featurizer> read_featurizer(BinaryReader& in) {
  auto f = std::make_shared<Featurizer>();
  f->tokenizer.lowercase = in.u8() != 0;
  f->tokenizer.min_token_length = in.u64();
  std::size_t stop = in.count(4);
  for (std::size_t i = 0; i < stop; ++i) f->tokenizer.stopwords.insert(in.str());
  auto norm = in.u8() != 0 ? features::Norm::kL2 : features::Norm::kNone;
  std::size_t corpus_size = in.u64();
  std::size_t terms_count = in.count(4);
  std::vector<std::string> terms(terms_count);
  for (auto& t : terms) t = in.str();
  auto df = in.u32_vec();
  std::uint64_t fingerprint = in.u64();
  if (df.size() != terms.size()) throw Error(ErrorCode::kIntegrity, "vocabulary length mismatch");
  f->tfidf = features::TfidfModel(features::Vocabulary(std::move(terms), std::move(df), corpus_size), norm);
  if (f->tfidf.fingerprint() != fingerprint) throw Error(ErrorCode::kIntegrity, "vocabulary fingerprint mismatch");
  return f;
}

}  // namespace

std::string encode_model(const TrainedModel& model) {
  if (!model.classifier) throw Error(ErrorCode::kState, "cannot save a model without a classifier");
  BinaryWriter body;
  body.str(algorithm_name(model.spec.algorithm));
  body.u64(model.spec.seed);
  body.u64(model.spec.hyperparameters.size());
  for (const auto& [name, value] : model.spec.hyperparameters) {
    body.str(name);
    write_param(body, value);
  }
  body.u64(model.vocabulary_fingerprint);
  body.i64(model.trained_at.time_since_epoch().count());
  body.u8(model.classifier->score_kind() == ScoreKind::kProbability ? 0 : 1);
  body.u64(model.notes.size());
  for (const auto& [k, v] : model.notes) {
    body.str(k);
    body.str(v);
  }
  body.u8(model.featurizer ? 1 : 0);
  if (model.featurizer) write_featurizer(body, *model.featurizer);
  model.classifier->encode(body);

  const std::string& payload = body.bytes();
  BinaryWriter head;
  for (char c : kMagic) head.u8(static_cast<std::uint8_t>(c));
  head.u32(kModelFormatVersion);
  head.u32(checksum(payload));
  head.u64(payload.size());
  return head.bytes() + payload;
}

TrainedModel decode_model(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kIntegrity, "not a model file (bad magic or header)");
  }
  BinaryReader head(bytes.substr(4, kHeaderSize - 4));
  std::uint32_t version = head.u32();
  std::uint32_t crc = head.u32();
  std::uint64_t length = head.u64();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kMigration, "model format version " + std::to_string(version) +
                                           " is not supported; this build reads version " +
                                           std::to_string(kModelFormatVersion));
  }
  std::string_view payload = bytes.substr(kHeaderSize);
  if (payload.size() != length) throw Error(ErrorCode::kIntegrity, "model payload length mismatch (truncated file?)");
  if (checksum(payload) != crc) throw Error(ErrorCode::kIntegrity, "model checksum mismatch");

  BinaryReader in(payload);
  TrainedModel model;
  model.format_version = version;
  model.spec.algorithm = parse_algorithm(in.str());
  model.spec.seed = in.u64();
  std::size_t params = in.count(6);
  for (std::size_t i = 0; i < params; ++i) {
    std::string name = in.str();
    model.spec.hyperparameters[name] = read_param(in);
  }
  model.vocabulary_fingerprint = in.u64();
  model.trained_at = Timestamp(std::chrono::seconds(in.i64()));
  const ScoreKind kind = in.u8() == 0 ? ScoreKind::kProbability : ScoreKind::kMargin;
  std::size_t notes = in.count(8);
  for (std::size_t i = 0; i < notes; ++i) {
    std::string k = in.str();
    model.notes[k] = in.str();
  }
  if (in.u8() != 0) model.featurizer = read_featurizer(in);
  auto classifier = decode_classifier(model.spec.algorithm, in);
  if (!in.at_end()) throw Error(ErrorCode::kIntegrity, "trailing bytes after model payload");
  if (classifier->score_kind() != kind) throw Error(ErrorCode::kIntegrity, "score kind does not match algorithm");
  model.classifier = std::move(classifier);
  return model;
}

void save_model(const TrainedModel& model, const std::string& path) { write_file(path, encode_model(model)); }

TrainedModel load_model(const std::string& path) { return decode_model(read_file(path)); }

}  // namespace fakewatch::model_hub
