// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/checkpoint.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

#include "sscl/serialize.hpp"

namespace sscl {
namespace {

constexpr char kMagic[8] = {'S', 'S', 'C', 'L', 'C', 'K', 'P', 'T'};

std::uint32_t crc_of(const std::string& payload) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
            static_cast<uInt>(payload.size())));
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const std::vector<Param*>& params, const Optimizer* opt,
                     const ClassMemoryBank* bank) {
  std::ostringstream payload;
  io::write_string(payload, meta.task);
  io::write_pod<std::uint64_t>(payload, meta.plan_hash);
  io::write_pod<std::int32_t>(payload, meta.epoch);
  io::write_pod<std::int32_t>(payload, meta.stage);
  io::write_pod<std::uint32_t>(payload, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    io::write_string(payload, p->name);
    io::write_mat(payload, p->value);
  }
  // nested blobs so a reader can skip state it does not need
  std::ostringstream opt_blob, bank_blob;
  if (opt) opt->save_state(opt_blob);
  if (bank) bank->save(bank_blob);
  io::write_string(payload, opt_blob.str());
  io::write_string(payload, bank_blob.str());

  const std::string body = payload.str();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_checkpoint: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  io::write_pod<std::uint32_t>(out, kCheckpointVersion);
  io::write_pod<std::uint64_t>(out, body.size());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  io::write_pod<std::uint32_t>(out, crc_of(body));
}

CheckpointMeta load_checkpoint(const std::string& path,
                               const std::vector<Param*>& params, Optimizer* opt,
                               std::optional<ClassMemoryBank>* bank) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 8) != std::string(kMagic, 8))
    throw DataError("load_checkpoint: not a checkpoint container: " + path);
  const auto version = io::read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw DataError("load_checkpoint: unsupported container version " +
                    std::to_string(version));
  const auto body_size = io::read_pod<std::uint64_t>(in);
  std::string body(body_size, '\0');
  in.read(body.data(), static_cast<std::streamsize>(body_size));
  if (!in) throw DataError("load_checkpoint: truncated container");
  const auto stored_crc = io::read_pod<std::uint32_t>(in);
  if (crc_of(body) != stored_crc)
    throw DataError("load_checkpoint: checksum mismatch, container corrupted");

  std::istringstream payload(body);
  CheckpointMeta meta;
  meta.task = io::read_string(payload);
  meta.plan_hash = io::read_pod<std::uint64_t>(payload);
  meta.epoch = io::read_pod<std::int32_t>(payload);
  meta.stage = io::read_pod<std::int32_t>(payload);
  const auto count = io::read_pod<std::uint32_t>(payload);
  if (count != params.size())
    throw DataError("load_checkpoint: parameter count mismatch");
  for (Param* p : params) {
    const std::string name = io::read_string(payload);
    if (name != p->name)
      throw DataError("load_checkpoint: parameter '" + name + "' where '" +
                      p->name + "' was expected");
    Mat value = io::read_mat(payload);
    if (value.rows() != p->value.rows() || value.cols() != p->value.cols())
      throw DataError("load_checkpoint: shape mismatch for '" + name + "'");
    p->value = std::move(value);
  }
  const std::string opt_blob = io::read_string(payload);
  if (opt) {
    if (opt_blob.empty())
      throw DataError("load_checkpoint: container has no optimizer state");
    std::istringstream ss(opt_blob);
    opt->load_state(ss);
  }
  const std::string bank_blob = io::read_string(payload);
  if (bank) {
    if (bank_blob.empty())
      bank->reset();
    else {
      std::istringstream ss(bank_blob);
      *bank = ClassMemoryBank::load(ss);
    }
  }
  return meta;
}

}  // namespace sscl
